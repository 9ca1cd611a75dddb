#pragma once

// Actor-critic URLLC puncturing scheduler.
//
// The actor is a Gibbs policy factorized over RBs: RB b punctures m of its M
// mini-slots with probability proportional to exp(theta . Phi(s, b, m)). The
// critic is linear in the chosen-level features averaged over allocated RBs.

#include "slicesim/scenario.hpp"
#include "slicesim/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace slicesim {

inline constexpr int kFeatureDim = 6;
using Feature = Eigen::Matrix<double, kFeatureDim, 1>;

/// Reduced state: no-puncture eMBB rates, per-RB mean URLLC gain and arrivals.
struct RlState {
    Vector r_hat;                // K, bits/slot
    Vector urllc_gain_summary;   // B, mean over URLLC users
    int arrivals = 0;
    std::vector<int> owner;      // B, eMBB user holding each RB or -1
};

/// Punctured mini-slots per RB, plus the same decision as a K x B matrix.
struct RlAction {
    std::vector<int> levels;  // B, 0 on unallocated RBs
    IntMatrix z;              // K x B, nonzero only at (owner(b), b)
};

RlState build_state(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg);

/// [1, owner r_hat / max r_hat, h_b / max h, clamp(L / lambda, 0, 4), m / M, (m / M) * owner r_hat / max r_hat].
Feature features(const RlState& state, int rb, int level, const ScenarioConfig& cfg);

/// B x (M+1) matrix of per-RB level probabilities.
Matrix policy_probs(const Vector& theta, const RlState& state, const ScenarioConfig& cfg);

/// One categorical draw per allocated RB.
RlAction sample_action(const Matrix& probs, const RlState& state, std::mt19937_64& rng);

/// Builds the action for given per-RB levels (levels on unallocated RBs are ignored).
RlAction make_action(const std::vector<int>& levels, const RlState& state);

/// Levels executed by an existing K x B puncturing matrix.
std::vector<int> levels_of(const IntMatrix& z, const RlState& state);

/// g + phi * (urllc_rate - zeta L), every term in utility units.
double reward(double embb_utility, double urllc_rate_bits, int arrivals, double phi, const ScenarioConfig& cfg);

/// URLLC outage in a slot: packets arrived and the served rate does not exceed zeta L.
bool is_outage(double urllc_rate_bits, int arrivals, const ScenarioConfig& cfg);

/// Sliding window of outage indicators.
class OutageWindow {
public:
    explicit OutageWindow(int length = 100) : bits_(static_cast<std::size_t>(length), 0) {}

    void push(bool outage);
    int violations() const { return count_; }
    int length() const { return static_cast<int>(bits_.size()); }
    /// Violations divided by the window length.
    double rate() const { return static_cast<double>(count_) / length(); }

private:
    std::vector<char> bits_;
    std::size_t next_ = 0;
    int count_ = 0;
};

/// max(phi + theta_hat - theta_max, 0).
double update_phi(double phi, double outage_rate, double theta_max);

/// Critic features: mean of Phi(s, b, m_b) over allocated RBs.
Feature critic_features(const RlState& state, const std::vector<int>& levels, const ScenarioConfig& cfg);

/// R + gamma V' - V.
double td_error(double reward, double value, double next_value, double gamma);

Vector update_critic(const Vector& v, double delta, const Feature& psi, double rho_c);

/// Sum over allocated RBs of Phi(s, b, m_b) - E_pi[Phi(s, b, .)].
Vector score(const Vector& theta, const RlState& state, const std::vector<int>& levels, const ScenarioConfig& cfg);

Vector update_actor(const Vector& theta, double delta, const RlState& state, const std::vector<int>& levels,
                    const ScenarioConfig& cfg, double rho_a);

struct ReplayTuple {
    Feature psi;        // critic features of (s, a)
    double reward = 0;
    Feature psi_next;   // critic features of (s', a')
};

/// Fixed-capacity FIFO experience pool.
class ReplayPool {
public:
    explicit ReplayPool(std::size_t capacity = 10000) : capacity_(capacity) {}

    void push(const ReplayTuple& t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    const ReplayTuple& operator[](std::size_t i) const { return items_[i]; }

private:
    std::size_t capacity_;
    std::vector<ReplayTuple> items_;
    std::size_t next_ = 0;
};

struct AgentState {
    Vector theta = Vector::Zero(kFeatureDim);
    Vector v = Vector::Zero(kFeatureDim);
    double phi = 0.0;
    OutageWindow outage;
    ReplayPool pool;
    std::int64_t step = 0;

    struct Pending {
        RlState state;
        std::vector<int> levels;
        Feature psi;
        double reward;
    };
    std::optional<Pending> pending;  // last transition, completed by the next step

    static AgentState initial(const ScenarioConfig& cfg);
};

struct StepOutcome {
    RlAction action;         // executed action
    bool warm_started = false;
    double reward = 0.0;
    double embb_utility = 0.0;
    double urllc_rate = 0.0;  // bits/slot
    bool outage = false;
    double td_error = 0.0;    // of the transition completed by this step
    double phi = 0.0;         // weight used in this slot's reward
};

/// Evaluates the exponential utility of an executed allocation (see DrraContext).
using UtilityFn = std::function<double(const Allocation&)>;

/// One scheduling slot: sample an action (or execute `warm_z` during the first
/// warmstart_slots steps), score it, complete the previous transition with an
/// on-policy actor-critic update plus a replayed critic mini-batch, then update phi.
StepOutcome step(AgentState& agent, const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg,
                 const UtilityFn& utility, std::mt19937_64& rng, const IntMatrix* warm_z = nullptr);

/// Structured-text checkpoint of (theta, v, phi, step) tagged with a config hash.
void save_checkpoint(const AgentState& agent, const std::string& config_hash, const std::filesystem::path& path);

/// Restores theta, v, phi and step into a fresh agent. Throws std::runtime_error if
/// the stored hash differs from `config_hash`.
AgentState load_checkpoint(const std::filesystem::path& path, const ScenarioConfig& cfg, const std::string& config_hash);

}  // namespace slicesim
