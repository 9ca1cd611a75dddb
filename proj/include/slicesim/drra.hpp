#pragma once

// Block-coordinate eMBB resource allocation with relaxation and rounding.
//
// The shared objective is the sample-average exponential utility
//   G = (1/mu) log (1/S) sum_s exp(mu R_s),   R_s = sum_{k,b} x_kb (1 - w_b) C_skb,
// where C_skb is the rate of RB b for user k under fading sample s, expressed
// in bit/s/Hz of the whole grid (ScenarioConfig::utility_per_bit_slot).
// Puncturing weights live per RB (w_b); an Allocation stores them broadcast to
// the RB owner.

#include "slicesim/scenario.hpp"
#include "slicesim/solver.hpp"
#include "slicesim/types.hpp"

#include <string>
#include <vector>

namespace slicesim {

/// Per-slot data shared by the three subproblems.
class DrraContext {
public:
    /// `saa` is S x K, one Exponential(1) factor per (sample, eMBB user).
    DrraContext(const SlotState& slot, const ScenarioConfig& cfg, Matrix saa);

    int num_users() const { return K_; }
    int num_rbs() const { return B_; }
    int num_samples() const { return S_; }
    const ScenarioConfig& config() const { return cfg_; }
    const SlotState& slot() const { return slot_; }

    /// Per-sample RB rates in utility units: S x (K*B), column k + K*b.
    Matrix capacities(const Matrix& p) const;

    /// G and optional gradients with respect to x (K x B) and w (B) for fixed capacities.
    double utility(const Matrix& cap, const Matrix& x, const Vector& w, Matrix* grad_x = nullptr,
                   Vector* grad_w = nullptr) const;

    /// G and optional gradient with respect to p (K x B).
    double utility_power(const Matrix& x, const Vector& w, const Matrix& p, Matrix* grad_p = nullptr) const;

    /// G of an executed allocation, eMBB rates reduced by z/M.
    double allocation_utility(const Allocation& alloc) const;

    /// Sum over URLLC users of the full-RB URLLC rate of every RB (bits/slot).
    const Vector& urllc_capacity() const { return urllc_capacity_; }
    /// Sum of the dispersion penalty over every (URLLC user, RB) pair (bits/slot).
    double urllc_penalty() const { return urllc_penalty_; }

    /// Linear lower bound on the URLLC sum rate at per-RB weights w (bits/slot).
    double urllc_rate_bound(const Vector& w) const { return urllc_capacity_.dot(w) - urllc_penalty_; }

private:
    /// Utility of per-sample sum rates; fills the softmax weights dG/dR_s.
    double combine(const Vector& rates, Vector* weights) const;

    ScenarioConfig cfg_;
    SlotState slot_;
    Matrix saa_;
    int K_, B_, S_;
    double sigma2_;
    double rb_scale_;  // utility units per bit/s/Hz of one RB
    Vector urllc_capacity_;
    double urllc_penalty_;
};

/// Integrality-gap and timing report of one run_drra call.
struct SolveReport {
    std::int64_t slot_index = 0;
    std::vector<double> objective_trace;  // G after every outer iteration
    int iterations = 0;
    bool converged = false;
    double relaxed_utility = 0.0;   // G at the relaxed x
    double rounded_utility = 0.0;   // G after rounding, before the final power/weight pass
    double final_utility = 0.0;     // G of the emitted allocation (executed z)
    double rho = 1.0;               // integrality gap
    double delta = 0.0;             // RB-constraint violation left after repair
    double threshold_delta = 0.0;   // violation of the plain threshold rounding
    bool feasible_urllc = true;
    int inner_failures = 0;         // subproblem solves that hit their iteration cap
    double wall_time_s = 0.0;
};

/// One JSON object per line.
std::string to_json_line(const SolveReport& report);

struct SubproblemResult {
    Matrix value;  // x or p (K x B)
    AscentResult ascent;
};

/// Relaxed RB allocation for fixed power and weights, warm-started from `x0`.
SubproblemResult solve_rb_allocation(const DrraContext& ctx, const Matrix& p, const Vector& w, const Matrix& x0);

/// Power allocation over {p >= 0, sum p <= P_max} for fixed x and weights.
SubproblemResult solve_power_allocation(const DrraContext& ctx, const Matrix& x, const Vector& w, const Matrix& p0);

struct WeightResult {
    Vector w;                // per RB, in [0, 1]
    bool feasible = true;    // false when even w = 1 misses the required rate
    double required_rate = 0.0;
    double violation = 0.0;  // relative shortfall of the URLLC bound at w
    int penalty_rounds = 0;
    AscentResult ascent;
};

/// URLLC puncturing weights maximizing G subject to
/// urllc_rate_bound(w) >= zeta * mean_arrivals / Theta_max and 0 <= w <= 1.
WeightResult solve_urllc_weights(const DrraContext& ctx, const Matrix& x, const Matrix& p, double mean_arrivals,
                                 const Vector& w0);

/// floor(M * w) elementwise.
IntMatrix weights_to_minislots(const Matrix& w, int minislots);

struct RoundingResult {
    Matrix x;                 // binary, every RB assigned to exactly one user
    double threshold_delta;   // max_b (sum_k [x~_kb >= eta] - 1)^+ before repair
    double delta;             // the same after repair, always 0
    int repaired_rbs;
};

/// Threshold rounding at eta; RBs with zero or several winners go to argmax_k x~_kb
/// (ties to the lowest user index).
RoundingResult round_rb_allocation(const Matrix& x_relaxed, double eta);

/// (G(x_binary) + alpha * delta) / G(x_relaxed) at fixed power and weights.
double integrality_gap(const DrraContext& ctx, const Matrix& x_relaxed, const Matrix& x_binary, const Matrix& p,
                       const Vector& w, double alpha, double delta);

struct DrraResult {
    Allocation alloc;
    SolveReport report;
    Matrix x_relaxed;
    Vector rb_weights;
};

/// Alternates the three subproblems until the relative change of G is at most
/// cfg.epsilon, rounds x, re-solves power and weights for the binary x and emits
/// z = floor(M w).
DrraResult run_drra(const SlotState& slot, const ScenarioConfig& cfg, const Matrix& saa);

}  // namespace slicesim
