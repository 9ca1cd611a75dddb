#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slicesim {

/// Raised when a configuration value breaks an invariant. `field()` holds the
/// dotted path of the offending key (e.g. "phy.max_power_w").
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Every physical-layer, traffic, optimizer and learning parameter of a run.
///
/// Defaults reproduce the simulation table of the reference scenario where one
/// exists (1 ms slots, 7 mini-slots of 2 symbols, 12 x 15 kHz subcarriers per
/// RB, 20 MHz, 32-byte packets, actor/critic rates 1e-5/1e-3, mini-batch 32).
/// Everything else is a documented modelling choice, see README.
struct ScenarioConfig {
    // scenario
    int num_embb_users = 10;
    int num_urllc_users = 5;
    double cell_radius_m = 300.0;
    double min_distance_m = 35.0;

    // phy
    double slot_duration_s = 1e-3;
    int minislots_per_slot = 7;
    int symbols_per_slot = 14;
    int symbols_per_minislot = 2;
    int subcarriers_per_rb = 12;
    double subcarrier_spacing_hz = 15e3;
    double system_bandwidth_hz = 20e6;
    int num_rbs = 100;
    double max_power_w = 19.952623149688797;  // 43 dBm
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 9.0;
    double pathloss_ref_db = 38.0;
    double pathloss_ref_distance_m = 1.0;
    double pathloss_exponent = 3.5;
    int cb_symbols = 2;
    double decoding_error = 1e-5;

    // traffic
    double urllc_packet_bits = 256.0;
    double arrival_rate = 10.0;  // packets per slot
    double outage_target = 0.04;

    // optimizer
    double risk_param = -5.0;
    bool risk_neutral = false;
    double rounding_threshold = 0.5;
    double penalty_weight = -1.0;
    double variance_weight = 0.1;
    int saa_samples = 32;
    double epsilon = 1e-3;
    int max_outer_iterations = 200;
    int max_inner_iterations = 500;
    double inner_tolerance = 1e-6;

    // learning
    double discount = 0.9;
    double actor_lr = 1e-5;
    double critic_lr = 1e-3;
    int minibatch_size = 32;
    int replay_capacity = 10000;
    int outage_window = 100;
    int warmstart_slots = 1000;
    double initial_phi = 0.0;

    // run
    std::uint64_t seed = 1;

    double rb_bandwidth_hz() const { return subcarriers_per_rb * subcarrier_spacing_hz; }

    /// Noise power over one RB in watts.
    double noise_power_w() const {
        const double dbm = noise_density_dbm_hz + noise_figure_db + 10.0 * std::log10(rb_bandwidth_hz());
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    /// Per-RB transmit power used for URLLC transmissions.
    double urllc_power_w() const { return max_power_w / num_rbs; }

    /// Factor converting bits/slot into Mbit/s.
    double mbps_per_bit_slot() const { return 1e-6 / slot_duration_s; }

    /// Factor converting bits/slot into the unit of the risk-averse utility:
    /// spectral efficiency over the whole RB grid, bit/s/Hz.
    double utility_per_bit_slot() const { return 1.0 / (num_rbs * rb_bandwidth_hz() * slot_duration_s); }
};

/// Throws ConfigError on the first violated invariant.
void validate(const ScenarioConfig& cfg);

}  // namespace slicesim
