#include "slicesim/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace slicesim {

double pathloss(double distance_m, double ref_db, double exponent, double ref_distance_m) {
    if (!(distance_m > 0)) throw std::domain_error("pathloss: distance must be > 0");
    const double db = ref_db + 10.0 * exponent * std::log10(distance_m / ref_distance_m);
    return std::pow(10.0, -db / 10.0);
}

std::mt19937_64 RngStreams::engine(Stream stream, std::uint64_t index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

UserGeometry place_users(const ScenarioConfig& cfg, const RngStreams& rng) {
    auto eng = rng.engine(Stream::geometry);
    const double r0 = cfg.min_distance_m * cfg.min_distance_m;
    const double r1 = cfg.cell_radius_m * cfg.cell_radius_m;
    std::uniform_real_distribution<double> area(r0, r1);
    UserGeometry g;
    for (int k = 0; k < cfg.num_embb_users; ++k) g.embb_distance_m.push_back(std::sqrt(area(eng)));
    for (int n = 0; n < cfg.num_urllc_users; ++n) g.urllc_distance_m.push_back(std::sqrt(area(eng)));
    return g;
}

UserGeometry load_geometry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open geometry file " + path.string());
    std::vector<std::pair<int, double>> embb, urllc;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string id;
        double d = 0;
        if (!(ss >> id)) continue;
        if (!(ss >> d) || id.size() < 2 || (id[0] != 'e' && id[0] != 'u'))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected `e<k>|u<n> distance_m`");
        const int index = std::stoi(id.substr(1));
        (id[0] == 'e' ? embb : urllc).emplace_back(index, d);
    }
    auto ordered = [&](std::vector<std::pair<int, double>>& v, const char* kind) {
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].first != static_cast<int>(i))
                throw std::runtime_error(path.string() + ": " + kind + " user ids must be 0..n-1 without gaps");
            out.push_back(v[i].second);
        }
        return out;
    };
    return {ordered(embb, "eMBB"), ordered(urllc, "URLLC")};
}

void save_geometry(const UserGeometry& geometry, const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "# user_id distance_m\n" << std::setprecision(17);
    for (std::size_t k = 0; k < geometry.embb_distance_m.size(); ++k)
        out << 'e' << k << ' ' << geometry.embb_distance_m[k] << '\n';
    for (std::size_t n = 0; n < geometry.urllc_distance_m.size(); ++n)
        out << 'u' << n << ' ' << geometry.urllc_distance_m[n] << '\n';
}

void check_geometry(const UserGeometry& geometry, const ScenarioConfig& cfg) {
    if (static_cast<int>(geometry.embb_distance_m.size()) != cfg.num_embb_users)
        throw ConfigError("geometry", "eMBB user count differs from scenario.num_embb_users");
    if (static_cast<int>(geometry.urllc_distance_m.size()) != cfg.num_urllc_users)
        throw ConfigError("geometry", "URLLC user count differs from scenario.num_urllc_users");
    auto in_cell = [&](double d) { return d > 0 && d <= cfg.cell_radius_m; };
    for (double d : geometry.embb_distance_m)
        if (!in_cell(d)) throw ConfigError("geometry", "distance outside (0, cell_radius_m]");
    for (double d : geometry.urllc_distance_m)
        if (!in_cell(d)) throw ConfigError("geometry", "distance outside (0, cell_radius_m]");
}

SlotState sample_slot(const ScenarioConfig& cfg, const UserGeometry& geometry, const RngStreams& rng,
                      std::int64_t t) {
    const int K = cfg.num_embb_users, N = cfg.num_urllc_users, B = cfg.num_rbs;
    SlotState slot;
    slot.slot_index = t;
    slot.embb_gain.resize(K, B);
    slot.urllc_gain.resize(N, B);

    auto fading = rng.engine(Stream::fading, static_cast<std::uint64_t>(t));
    std::exponential_distribution<double> power_fading(1.0);
    auto loss = [&](double d) {
        return pathloss(d, cfg.pathloss_ref_db, cfg.pathloss_exponent, cfg.pathloss_ref_distance_m);
    };
    for (int k = 0; k < K; ++k) {
        const double pl = loss(geometry.embb_distance_m[k]);
        for (int b = 0; b < B; ++b) slot.embb_gain(k, b) = pl * power_fading(fading);
    }
    for (int n = 0; n < N; ++n) {
        const double pl = loss(geometry.urllc_distance_m[n]);
        for (int b = 0; b < B; ++b) slot.urllc_gain(n, b) = pl * power_fading(fading);
    }

    if (cfg.arrival_rate > 0) {
        auto traffic = rng.engine(Stream::traffic, static_cast<std::uint64_t>(t));
        std::poisson_distribution<int> per_minislot(cfg.arrival_rate / cfg.minislots_per_slot);
        for (int m = 0; m < cfg.minislots_per_slot; ++m) slot.arrivals += per_minislot(traffic);
    }
    return slot;
}

Matrix saa_fading(const ScenarioConfig& cfg, const RngStreams& rng, std::int64_t t) {
    auto eng = rng.engine(Stream::saa, static_cast<std::uint64_t>(t));
    std::exponential_distribution<double> power_fading(1.0);
    Matrix g(cfg.saa_samples, cfg.num_embb_users);
    for (int s = 0; s < g.rows(); ++s)
        for (int k = 0; k < g.cols(); ++k) g(s, k) = power_fading(eng);
    return g;
}

Vector transmission_fading(const ScenarioConfig& cfg, const RngStreams& rng, std::int64_t t) {
    auto eng = rng.engine(Stream::transmission, static_cast<std::uint64_t>(t));
    std::exponential_distribution<double> power_fading(1.0);
    Vector g(cfg.num_embb_users);
    for (int k = 0; k < g.size(); ++k) g(k) = power_fading(eng);
    return g;
}

SlotState experienced_slot(const SlotState& slot, const Vector& factors) {
    SlotState out = slot;
    out.embb_gain = factors.asDiagonal() * slot.embb_gain;
    return out;
}

}  // namespace slicesim
