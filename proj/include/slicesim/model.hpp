#pragma once

// Rate, utility and reliability formulas shared by every scheduler.
//
// Rates are bits per slot throughout: a bits/s Shannon rate multiplied by the
// slot duration, so they compare directly with the URLLC load zeta * L.

#include "slicesim/scenario.hpp"
#include "slicesim/types.hpp"

#include <span>
#include <vector>

namespace slicesim {

/// Rate of one eMBB RB with `z` of `minislots` mini-slots punctured.
/// Throws std::domain_error if z is outside [0, minislots] or sigma2 <= 0.
double embb_rb_rate(double rb_bandwidth_hz, double slot_duration_s, int z, int minislots, double power_w,
                    double gain, double sigma2);

/// Sum over the RBs held by user `k`.
double embb_user_rate(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int k);

/// embb_user_rate for every user.
Vector embb_user_rates(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg);

/// Same as embb_user_rate with every z forced to zero.
double rate_no_puncturing(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int k);

/// 1 - 1/(1+snr)^2. Throws std::domain_error if sigma2 <= 0.
double channel_dispersion(double power_w, double gain, double sigma2);

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double q_function(double x);

/// Solves Q(q) = epsilon. Throws std::domain_error outside (0, 1).
double inverse_q(double epsilon);

enum class PunctureForm {
    minislots,  // z / M of the owner's RB
    weights,    // continuous w of the owner's RB
};

/// Finite-blocklength URLLC throughput summed over URLLC users.
///
/// Each (user n, RB b) term is  f_b T u_b / N * log2(1 + snr_nb) - sqrt(D_nb / c) Q^-1(vartheta),
/// where u_b is the punctured fraction of RB b, clamped at zero.
double urllc_sum_rate(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg,
                      PunctureForm form = PunctureForm::minislots);

/// Per-RB punctured fraction under the given form.
Vector punctured_fraction(const Allocation& alloc, int minislots, PunctureForm form);

/// URLLC rate of a fully punctured RB, per (user, RB) before the dispersion
/// penalty: f_b T / N * log2(1 + snr_nb). N x B.
Matrix urllc_full_rb_rates(const SlotState& slot, const ScenarioConfig& cfg);

/// sqrt(D_nb / c) * Q^-1(vartheta) for every (n, b). N x B.
Matrix urllc_dispersion_penalty(const SlotState& slot, const ScenarioConfig& cfg);

/// (1/mu) log((1/S) sum_s exp(mu R_s)) via log-sum-exp. Throws on empty input or mu == 0.
double exp_utility(std::span<const double> samples, double mu);

/// Sum over users of (mean - beta * variance) of each user's history.
/// Variances use divisor n.
double mean_variance_objective(const std::vector<std::vector<double>>& histories, double beta);

/// zeta E[L] / Theta, the service rate at which Markov's inequality bounds the
/// outage probability by Theta.
double markov_required_rate(double packet_bits, double mean_arrivals, double outage_target);

double population_mean(std::span<const double> v);
double population_variance(std::span<const double> v);

}  // namespace slicesim
