#pragma once

// Seeded channel and traffic generation.

#include "slicesim/scenario.hpp"
#include "slicesim/types.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

namespace slicesim {

/// Log-distance path loss, returned as a linear power gain.
/// PL(dB) = ref_db + 10 n log10(d / d0). Throws std::domain_error for d <= 0.
double pathloss(double distance_m, double ref_db = 38.0, double exponent = 3.5, double ref_distance_m = 1.0);

/// Distance of every user to the gNB.
struct UserGeometry {
    std::vector<double> embb_distance_m;
    std::vector<double> urllc_distance_m;
};

/// Independent random substreams derived from one seed.
enum class Stream : std::uint64_t {
    geometry = 1,
    fading = 2,
    traffic = 3,
    policy = 4,
    saa = 5,
    transmission = 6,
};

/// Maps (seed, stream, index) to a fresh engine. The same triple always yields
/// the same sequence and different streams never share state, so changing how
/// one stream is consumed leaves every other stream untouched.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

    std::mt19937_64 engine(Stream stream, std::uint64_t index = 0) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Users uniform in area over the annulus [min_distance, radius].
UserGeometry place_users(const ScenarioConfig& cfg, const RngStreams& rng);

/// Plain-text table, one `user_id distance_m` pair per line, ids `e<k>` for
/// eMBB users and `u<n>` for URLLC users. `#` starts a comment.
UserGeometry load_geometry(const std::filesystem::path& path);
void save_geometry(const UserGeometry& geometry, const std::filesystem::path& path);

/// Throws ConfigError when the geometry does not match the config.
void check_geometry(const UserGeometry& geometry, const ScenarioConfig& cfg);

/// Rayleigh block fading per (user, RB) and Poisson URLLC arrivals summed over
/// the slot's mini-slots. Deterministic in (seed, t).
SlotState sample_slot(const ScenarioConfig& cfg, const UserGeometry& geometry, const RngStreams& rng,
                      std::int64_t t);

/// Exponential(1) power-fading factors used by the sample-average approximation
/// of the fading expectation: one factor per (sample, eMBB user), shared by all
/// RBs of that user. S x K.
Matrix saa_fading(const ScenarioConfig& cfg, const RngStreams& rng, std::int64_t t);

/// Exponential(1) fading factor per eMBB user that the transmission actually
/// experiences on top of the gains the scheduler planned with. It follows the
/// distribution the sample-average approximation averages over. K-vector.
Vector transmission_fading(const ScenarioConfig& cfg, const RngStreams& rng, std::int64_t t);

/// `slot` with every eMBB gain row k scaled by factors(k).
SlotState experienced_slot(const SlotState& slot, const Vector& factors);

}  // namespace slicesim
