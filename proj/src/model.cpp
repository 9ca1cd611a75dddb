#include "slicesim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace slicesim {

void validate(const ScenarioConfig& cfg) {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(field, what);
    };
    require(cfg.num_embb_users >= 1, "scenario.num_embb_users", "must be >= 1");
    require(cfg.num_urllc_users >= 1, "scenario.num_urllc_users", "must be >= 1");
    require(cfg.cell_radius_m > 0, "scenario.cell_radius_m", "must be > 0");
    require(cfg.min_distance_m > 0 && cfg.min_distance_m <= cfg.cell_radius_m, "scenario.min_distance_m",
            "must lie in (0, cell_radius_m]");

    require(cfg.slot_duration_s > 0, "phy.slot_duration_s", "must be > 0");
    require(cfg.minislots_per_slot >= 1, "phy.minislots_per_slot", "must be >= 1");
    require(cfg.symbols_per_minislot >= 1, "phy.symbols_per_minislot", "must be >= 1");
    require(cfg.minislots_per_slot * cfg.symbols_per_minislot == cfg.symbols_per_slot, "phy.minislots_per_slot",
            "minislots_per_slot * symbols_per_minislot must equal symbols_per_slot");
    require(cfg.subcarriers_per_rb >= 1, "phy.subcarriers_per_rb", "must be >= 1");
    require(cfg.subcarrier_spacing_hz > 0, "phy.subcarrier_spacing_hz", "must be > 0");
    require(cfg.num_rbs >= 1, "phy.num_rbs", "must be >= 1");
    require(cfg.num_rbs * cfg.rb_bandwidth_hz() <= cfg.system_bandwidth_hz * (1 + 1e-12), "phy.num_rbs",
            "RBs do not fit in system_bandwidth_hz");
    require(cfg.max_power_w > 0, "phy.max_power_w", "must be > 0");
    require(cfg.pathloss_ref_distance_m > 0, "phy.pathloss_ref_distance_m", "must be > 0");
    require(cfg.pathloss_exponent > 0, "phy.pathloss_exponent", "must be > 0");
    require(cfg.cb_symbols >= 1, "phy.cb_symbols", "must be >= 1");
    require(cfg.decoding_error > 0 && cfg.decoding_error < 1, "phy.decoding_error", "must lie in (0, 1)");

    require(cfg.urllc_packet_bits > 0, "traffic.urllc_packet_bits", "must be > 0");
    require(cfg.arrival_rate >= 0, "traffic.arrival_rate", "must be >= 0");
    require(cfg.outage_target > 0 && cfg.outage_target < 1, "traffic.outage_target", "must lie in (0, 1)");

    require(cfg.risk_param < 0, "optimizer.risk_param", "must be < 0 (risk-averse)");
    require(cfg.rounding_threshold >= 0 && cfg.rounding_threshold <= 1, "optimizer.rounding_threshold",
            "must lie in [0, 1]");
    require(cfg.penalty_weight < 0, "optimizer.penalty_weight", "must be < 0");
    require(cfg.variance_weight >= 0, "optimizer.variance_weight", "must be >= 0");
    require(cfg.saa_samples >= 1, "optimizer.saa_samples", "must be >= 1");
    require(cfg.epsilon > 0, "optimizer.epsilon", "must be > 0");
    require(cfg.max_outer_iterations >= 1, "optimizer.max_outer_iterations", "must be >= 1");
    require(cfg.max_inner_iterations >= 1, "optimizer.max_inner_iterations", "must be >= 1");
    require(cfg.inner_tolerance > 0, "optimizer.inner_tolerance", "must be > 0");

    require(cfg.discount >= 0 && cfg.discount < 1, "learning.discount", "must lie in [0, 1)");
    require(cfg.actor_lr >= 0, "learning.actor_lr", "must be >= 0");
    require(cfg.critic_lr >= 0, "learning.critic_lr", "must be >= 0");
    require(cfg.minibatch_size >= 0, "learning.minibatch_size", "must be >= 0");
    require(cfg.replay_capacity >= 1, "learning.replay_capacity", "must be >= 1");
    require(cfg.outage_window >= 1, "learning.outage_window", "must be >= 1");
    require(cfg.warmstart_slots >= 0, "learning.warmstart_slots", "must be >= 0");
    require(cfg.initial_phi >= 0, "learning.initial_phi", "must be >= 0");
}

double embb_rb_rate(double rb_bandwidth_hz, double slot_duration_s, int z, int minislots, double power_w,
                    double gain, double sigma2) {
    if (minislots < 1 || z < 0 || z > minislots) throw std::domain_error("embb_rb_rate: z outside [0, M]");
    if (!(sigma2 > 0)) throw std::domain_error("embb_rb_rate: sigma2 must be > 0");
    const double kept = 1.0 - static_cast<double>(z) / minislots;
    return rb_bandwidth_hz * slot_duration_s * kept * std::log2(1.0 + power_w * gain / sigma2);
}

double embb_user_rate(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int k) {
    const double f = cfg.rb_bandwidth_hz();
    const double sigma2 = cfg.noise_power_w();
    double rate = 0.0;
    for (int b = 0; b < alloc.num_rbs(); ++b) {
        if (alloc.x(k, b) <= 0.0) continue;
        rate += alloc.x(k, b) * embb_rb_rate(f, cfg.slot_duration_s, alloc.z(k, b), cfg.minislots_per_slot,
                                             alloc.p(k, b), slot.embb_gain(k, b), sigma2);
    }
    return rate;
}

Vector embb_user_rates(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg) {
    Vector r(alloc.num_users());
    for (int k = 0; k < alloc.num_users(); ++k) r(k) = embb_user_rate(alloc, slot, cfg, k);
    return r;
}

double rate_no_puncturing(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int k) {
    Allocation unpunctured = alloc;
    unpunctured.z.setZero();
    return embb_user_rate(unpunctured, slot, cfg, k);
}

double channel_dispersion(double power_w, double gain, double sigma2) {
    if (!(sigma2 > 0)) throw std::domain_error("channel_dispersion: sigma2 must be > 0");
    const double s = 1.0 + power_w * gain / sigma2;
    return 1.0 - 1.0 / (s * s);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double inverse_q(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("inverse_q: epsilon must lie in (0, 1)");
    // Newton on Q with a bisection bracket; Q is strictly decreasing.
    double lo = -40.0, hi = 40.0;
    double q = 0.0;
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    for (int it = 0; it < 200; ++it) {
        const double f = q_function(q) - epsilon;
        if (f > 0) lo = q; else hi = q;
        const double slope = -inv_sqrt_2pi * std::exp(-0.5 * q * q);
        double next = q - f / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - q) < 1e-14 * std::max(1.0, std::abs(q))) return next;
        q = next;
    }
    return q;
}

Vector punctured_fraction(const Allocation& alloc, int minislots, PunctureForm form) {
    Vector u = Vector::Zero(alloc.num_rbs());
    for (int b = 0; b < alloc.num_rbs(); ++b) {
        for (int k = 0; k < alloc.num_users(); ++k) {
            const double share = form == PunctureForm::minislots
                                     ? static_cast<double>(alloc.z(k, b)) / minislots
                                     : alloc.w(k, b);
            u(b) += alloc.x(k, b) * share;
        }
    }
    return u;
}

Matrix urllc_full_rb_rates(const SlotState& slot, const ScenarioConfig& cfg) {
    const double sigma2 = cfg.noise_power_w();
    const double pu = cfg.urllc_power_w();
    const double scale = cfg.rb_bandwidth_hz() * cfg.slot_duration_s / slot.num_urllc_users();
    return slot.urllc_gain.unaryExpr([&](double h) { return scale * std::log2(1.0 + pu * h / sigma2); });
}

Matrix urllc_dispersion_penalty(const SlotState& slot, const ScenarioConfig& cfg) {
    if (cfg.cb_symbols <= 0) throw std::domain_error("urllc_dispersion_penalty: cb_symbols must be > 0");
    const double sigma2 = cfg.noise_power_w();
    const double pu = cfg.urllc_power_w();
    const double qinv = inverse_q(cfg.decoding_error);
    return slot.urllc_gain.unaryExpr([&](double h) {
        return std::sqrt(channel_dispersion(pu, h, sigma2) / cfg.cb_symbols) * qinv;
    });
}

double urllc_sum_rate(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, PunctureForm form) {
    const Vector u = punctured_fraction(alloc, cfg.minislots_per_slot, form);
    const Matrix full = urllc_full_rb_rates(slot, cfg);
    const Matrix penalty = urllc_dispersion_penalty(slot, cfg);
    double total = 0.0;
    for (int n = 0; n < full.rows(); ++n) {
        for (int b = 0; b < full.cols(); ++b) {
            if (u(b) <= 0.0) continue;
            total += std::max(0.0, u(b) * full(n, b) - penalty(n, b));
        }
    }
    return total;
}

double exp_utility(std::span<const double> samples, double mu) {
    if (samples.empty()) throw std::invalid_argument("exp_utility: no samples");
    if (mu == 0.0) throw std::invalid_argument("exp_utility: mu must be non-zero");
    double peak = -std::numeric_limits<double>::infinity();
    for (double r : samples) peak = std::max(peak, mu * r);
    double acc = 0.0;
    for (double r : samples) acc += std::exp(mu * r - peak);
    return (peak + std::log(acc / static_cast<double>(samples.size()))) / mu;
}

double population_mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = population_mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size());
}

double mean_variance_objective(const std::vector<std::vector<double>>& histories, double beta) {
    double total = 0.0;
    for (const auto& h : histories) {
        if (h.empty()) throw std::invalid_argument("mean_variance_objective: empty history");
        total += population_mean(h) - beta * population_variance(h);
    }
    return total;
}

double markov_required_rate(double packet_bits, double mean_arrivals, double outage_target) {
    if (!(outage_target > 0)) throw std::domain_error("markov_required_rate: outage target must be > 0");
    return packet_bits * mean_arrivals / outage_target;
}

}  // namespace slicesim
