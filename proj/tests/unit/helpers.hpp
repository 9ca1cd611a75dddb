#pragma once

#include "slicesim/env.hpp"
#include "slicesim/scenario.hpp"
#include "slicesim/types.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing {

using namespace slicesim;

inline ScenarioConfig small_config(int users = 3, int rbs = 4, int urllc = 2) {
    ScenarioConfig cfg;
    cfg.num_embb_users = users;
    cfg.num_rbs = rbs;
    cfg.num_urllc_users = urllc;
    cfg.saa_samples = 16;
    cfg.arrival_rate = 0.5;
    return cfg;
}

inline SlotState make_slot(const ScenarioConfig& cfg, std::uint64_t seed, std::int64_t t = 0) {
    const RngStreams rng(seed);
    return sample_slot(cfg, place_users(cfg, rng), rng, t);
}

inline Matrix uniform_matrix(int rows, int cols, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

/// Binary allocation giving RB b to user b % K with equal power.
inline Allocation round_robin_alloc(const ScenarioConfig& cfg) {
    const int K = cfg.num_embb_users, B = cfg.num_rbs;
    Allocation a = Allocation::zeros(K, B);
    for (int b = 0; b < B; ++b) {
        a.x(b % K, b) = 1.0;
        a.p(b % K, b) = cfg.max_power_w / B;
    }
    return a;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace testing
