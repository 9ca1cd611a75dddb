#include "slicesim/config_io.hpp"

#include "slicesim/metrics.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace slicesim {

namespace {

using Member = std::variant<int ScenarioConfig::*, double ScenarioConfig::*, bool ScenarioConfig::*,
                            std::uint64_t ScenarioConfig::*>;

struct Field {
    const char* section;
    const char* key;
    Member member;
};

const std::vector<Field>& fields() {
    using C = ScenarioConfig;
    static const std::vector<Field> table = {
        {"scenario", "num_embb_users", &C::num_embb_users},
        {"scenario", "num_urllc_users", &C::num_urllc_users},
        {"scenario", "cell_radius_m", &C::cell_radius_m},
        {"scenario", "min_distance_m", &C::min_distance_m},
        {"phy", "slot_duration_s", &C::slot_duration_s},
        {"phy", "minislots_per_slot", &C::minislots_per_slot},
        {"phy", "symbols_per_slot", &C::symbols_per_slot},
        {"phy", "symbols_per_minislot", &C::symbols_per_minislot},
        {"phy", "subcarriers_per_rb", &C::subcarriers_per_rb},
        {"phy", "subcarrier_spacing_hz", &C::subcarrier_spacing_hz},
        {"phy", "system_bandwidth_hz", &C::system_bandwidth_hz},
        {"phy", "num_rbs", &C::num_rbs},
        {"phy", "max_power_w", &C::max_power_w},
        {"phy", "noise_density_dbm_hz", &C::noise_density_dbm_hz},
        {"phy", "noise_figure_db", &C::noise_figure_db},
        {"phy", "pathloss_ref_db", &C::pathloss_ref_db},
        {"phy", "pathloss_ref_distance_m", &C::pathloss_ref_distance_m},
        {"phy", "pathloss_exponent", &C::pathloss_exponent},
        {"phy", "cb_symbols", &C::cb_symbols},
        {"phy", "decoding_error", &C::decoding_error},
        {"traffic", "urllc_packet_bits", &C::urllc_packet_bits},
        {"traffic", "arrival_rate", &C::arrival_rate},
        {"traffic", "outage_target", &C::outage_target},
        {"optimizer", "risk_param", &C::risk_param},
        {"optimizer", "risk_neutral", &C::risk_neutral},
        {"optimizer", "rounding_threshold", &C::rounding_threshold},
        {"optimizer", "penalty_weight", &C::penalty_weight},
        {"optimizer", "variance_weight", &C::variance_weight},
        {"optimizer", "saa_samples", &C::saa_samples},
        {"optimizer", "epsilon", &C::epsilon},
        {"optimizer", "max_outer_iterations", &C::max_outer_iterations},
        {"optimizer", "max_inner_iterations", &C::max_inner_iterations},
        {"optimizer", "inner_tolerance", &C::inner_tolerance},
        {"learning", "discount", &C::discount},
        {"learning", "actor_lr", &C::actor_lr},
        {"learning", "critic_lr", &C::critic_lr},
        {"learning", "minibatch_size", &C::minibatch_size},
        {"learning", "replay_capacity", &C::replay_capacity},
        {"learning", "outage_window", &C::outage_window},
        {"learning", "warmstart_slots", &C::warmstart_slots},
        {"learning", "initial_phi", &C::initial_phi},
        {"run", "seed", &C::seed},
    };
    return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

template <class T>
T parse_number(const std::string& text, const std::string& path) {
    T value{};
    std::string s = text;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if constexpr (std::is_same_v<T, double>) {
        // strtod accepts exponents and "inf"; reject trailing garbage.
        char* end = nullptr;
        value = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(path, "expected a number, got '" + text + "'");
    } else {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError(path, "expected an integer, got '" + text + "'");
    }
    return value;
}

void assign(ScenarioConfig& cfg, const Field& f, const std::string& text) {
    const std::string path = std::string(f.section) + "." + f.key;
    std::visit(
        [&](auto member) {
            using T = std::remove_cvref_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, bool>) {
                std::string v = text;
                std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
                if (v == "true" || v == "1" || v == "yes") cfg.*member = true;
                else if (v == "false" || v == "0" || v == "no") cfg.*member = false;
                else throw ConfigError(path, "expected true or false, got '" + text + "'");
            } else {
                cfg.*member = parse_number<T>(text, path);
            }
        },
        f.member);
}

std::string render(const ScenarioConfig& cfg, const Field& f) {
    return std::visit(
        [&](auto member) -> std::string {
            using T = std::remove_cvref_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, bool>) return cfg.*member ? "true" : "false";
            else if constexpr (std::is_same_v<T, double>) return format_number(cfg.*member);
            else return std::to_string(cfg.*member);
        },
        f.member);
}

}  // namespace

void merge_config(ScenarioConfig& cfg, const YAML::Node& root) {
    if (!root || root.IsNull()) return;
    if (!root.IsMap()) throw ConfigError("<root>", "expected a mapping of sections");
    for (const auto& section : root) {
        const auto name = section.first.as<std::string>();
        if (!section.second.IsMap()) {
            if (section.second.IsNull()) continue;
            throw ConfigError(name, "expected a mapping of keys");
        }
        for (const auto& entry : section.second) {
            const auto key = entry.first.as<std::string>();
            const Field* f = find_field(name, key);
            if (!f) throw ConfigError(name + "." + key, "unknown key");
            if (!entry.second.IsScalar()) throw ConfigError(name + "." + key, "expected a scalar value");
            assign(cfg, *f, entry.second.Scalar());
        }
    }
}

ScenarioConfig parse_config(const std::string& yaml_text) {
    ScenarioConfig cfg;
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("<root>", std::string("malformed YAML: ") + e.what());
    }
    merge_config(cfg, root);
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void set_field(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    const Field* f = dot == std::string::npos ? nullptr
                                              : find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (!f) throw ConfigError(dotted_key, "unknown key");
    assign(cfg, *f, value);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(std::string(f.section) + "." + f.key);
    return keys;
}

std::vector<std::string> apply_env_overrides(ScenarioConfig& cfg, const EnvLookup& lookup) {
    std::vector<std::string> applied;
    for (const auto& f : fields()) {
        std::string var = std::string("SLICESIM_") + f.section + "_" + f.key;
        std::transform(var.begin(), var.end(), var.begin(), [](unsigned char c) { return std::toupper(c); });
        if (auto value = lookup(var)) {
            assign(cfg, f, *value);
            applied.push_back(std::string(f.section) + "." + f.key);
        }
    }
    return applied;
}

EnvLookup process_environment() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

std::string dump_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& f : fields()) {
        if (section != f.section) {
            section = f.section;
            out << section << ":\n";
        }
        out << "  " << f.key << ": " << render(cfg, f) << '\n';
    }
    return out.str();
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace slicesim
