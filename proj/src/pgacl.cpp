#include "slicesim/pgacl.hpp"

#include "slicesim/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace slicesim {

RlState build_state(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg) {
    RlState s;
    s.r_hat.resize(alloc.num_users());
    for (int k = 0; k < alloc.num_users(); ++k) s.r_hat(k) = rate_no_puncturing(alloc, slot, cfg, k);
    s.urllc_gain_summary = slot.urllc_gain.colwise().mean().transpose();
    s.arrivals = slot.arrivals;
    s.owner.resize(alloc.num_rbs());
    for (int b = 0; b < alloc.num_rbs(); ++b) s.owner[b] = alloc.owner(b);
    return s;
}

Feature features(const RlState& state, int rb, int level, const ScenarioConfig& cfg) {
    const double r_max = state.r_hat.size() ? state.r_hat.maxCoeff() : 0.0;
    const int o = state.owner[rb];
    const double owner_rate = (o >= 0 && r_max > 0) ? state.r_hat(o) / r_max : 0.0;
    const double h_max = state.urllc_gain_summary.maxCoeff();
    const double gain = h_max > 0 ? state.urllc_gain_summary(rb) / h_max : 0.0;
    double load = 0.0;
    if (cfg.arrival_rate > 0) load = std::clamp(state.arrivals / cfg.arrival_rate, 0.0, 4.0);
    else if (state.arrivals > 0) load = 4.0;
    const double frac = static_cast<double>(level) / cfg.minislots_per_slot;
    Feature f;
    f << 1.0, owner_rate, gain, load, frac, frac * owner_rate;
    return f;
}

Matrix policy_probs(const Vector& theta, const RlState& state, const ScenarioConfig& cfg) {
    const int B = static_cast<int>(state.owner.size());
    const int levels = cfg.minislots_per_slot + 1;
    Matrix probs(B, levels);
    Vector energy(levels);
    for (int b = 0; b < B; ++b) {
        for (int m = 0; m < levels; ++m) energy(m) = theta.dot(features(state, b, m, cfg));
        const double peak = energy.maxCoeff();
        const Vector e = (energy.array() - peak).exp().matrix();
        probs.row(b) = (e / e.sum()).transpose();
    }
    return probs;
}

RlAction make_action(const std::vector<int>& levels, const RlState& state) {
    const int K = static_cast<int>(state.r_hat.size());
    const int B = static_cast<int>(state.owner.size());
    RlAction a{std::vector<int>(B, 0), IntMatrix::Zero(K, B)};
    for (int b = 0; b < B; ++b) {
        if (state.owner[b] < 0) continue;
        a.levels[b] = levels[b];
        a.z(state.owner[b], b) = levels[b];
    }
    return a;
}

std::vector<int> levels_of(const IntMatrix& z, const RlState& state) {
    std::vector<int> levels(state.owner.size(), 0);
    for (std::size_t b = 0; b < levels.size(); ++b)
        if (state.owner[b] >= 0) levels[b] = z(state.owner[b], static_cast<int>(b));
    return levels;
}

RlAction sample_action(const Matrix& probs, const RlState& state, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> levels(state.owner.size(), 0);
    for (int b = 0; b < probs.rows(); ++b) {
        if (state.owner[b] < 0) continue;
        const double u = unit(rng);
        double acc = 0.0;
        int m = static_cast<int>(probs.cols()) - 1;
        for (int j = 0; j < probs.cols(); ++j) {
            acc += probs(b, j);
            if (u < acc) {
                m = j;
                break;
            }
        }
        levels[b] = m;
    }
    return make_action(levels, state);
}

double reward(double embb_utility, double urllc_rate_bits, int arrivals, double phi, const ScenarioConfig& cfg) {
    const double slack = (urllc_rate_bits - cfg.urllc_packet_bits * arrivals) * cfg.utility_per_bit_slot();
    return embb_utility + phi * slack;
}

bool is_outage(double urllc_rate_bits, int arrivals, const ScenarioConfig& cfg) {
    return arrivals > 0 && urllc_rate_bits <= cfg.urllc_packet_bits * arrivals;
}

void OutageWindow::push(bool outage) {
    count_ += static_cast<int>(outage) - bits_[next_];
    bits_[next_] = outage;
    next_ = (next_ + 1) % bits_.size();
}

double update_phi(double phi, double outage_rate, double theta_max) {
    return std::max(phi + outage_rate - theta_max, 0.0);
}

Feature critic_features(const RlState& state, const std::vector<int>& levels, const ScenarioConfig& cfg) {
    Feature psi = Feature::Zero();
    int used = 0;
    for (std::size_t b = 0; b < state.owner.size(); ++b) {
        if (state.owner[b] < 0) continue;
        psi += features(state, static_cast<int>(b), levels[b], cfg);
        ++used;
    }
    if (used) psi /= used;
    return psi;
}

double td_error(double reward, double value, double next_value, double gamma) {
    return reward + gamma * next_value - value;
}

Vector update_critic(const Vector& v, double delta, const Feature& psi, double rho_c) {
    return v + rho_c * delta * psi;
}

Vector score(const Vector& theta, const RlState& state, const std::vector<int>& levels, const ScenarioConfig& cfg) {
    const Matrix probs = policy_probs(theta, state, cfg);
    Vector g = Vector::Zero(kFeatureDim);
    for (int b = 0; b < probs.rows(); ++b) {
        if (state.owner[b] < 0) continue;
        g += features(state, b, levels[b], cfg);
        for (int m = 0; m < probs.cols(); ++m) g -= probs(b, m) * features(state, b, m, cfg);
    }
    return g;
}

Vector update_actor(const Vector& theta, double delta, const RlState& state, const std::vector<int>& levels,
                    const ScenarioConfig& cfg, double rho_a) {
    if (delta == 0.0) return theta;
    return theta + rho_a * delta * score(theta, state, levels, cfg);
}

void ReplayPool::push(const ReplayTuple& t) {
    if (capacity_ == 0) return;
    if (items_.size() < capacity_) {
        items_.push_back(t);
        return;
    }
    items_[next_] = t;
    next_ = (next_ + 1) % capacity_;
}

AgentState AgentState::initial(const ScenarioConfig& cfg) {
    AgentState a;
    a.phi = cfg.initial_phi;
    a.outage = OutageWindow(cfg.outage_window);
    a.pool = ReplayPool(static_cast<std::size_t>(cfg.replay_capacity));
    return a;
}

StepOutcome step(AgentState& agent, const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg,
                 const UtilityFn& utility, std::mt19937_64& rng, const IntMatrix* warm_z) {
    StepOutcome out;
    const RlState state = build_state(alloc, slot, cfg);
    const Matrix probs = policy_probs(agent.theta, state, cfg);
    out.action = sample_action(probs, state, rng);
    if (warm_z && agent.step < cfg.warmstart_slots) {
        out.action = make_action(levels_of(*warm_z, state), state);
        out.warm_started = true;
    }

    Allocation executed = alloc;
    executed.z = out.action.z;
    out.embb_utility = utility(executed);
    out.urllc_rate = urllc_sum_rate(executed, slot, cfg, PunctureForm::minislots);
    out.outage = is_outage(out.urllc_rate, slot.arrivals, cfg);
    out.phi = agent.phi;
    out.reward = reward(out.embb_utility, out.urllc_rate, slot.arrivals, agent.phi, cfg);

    const Feature psi = critic_features(state, out.action.levels, cfg);
    if (agent.pending) {
        const auto& prev = *agent.pending;
        const double delta = td_error(prev.reward, agent.v.dot(prev.psi), agent.v.dot(psi), cfg.discount);
        out.td_error = delta;
        agent.theta = update_actor(agent.theta, delta, prev.state, prev.levels, cfg, cfg.actor_lr);
        agent.v = update_critic(agent.v, delta, prev.psi, cfg.critic_lr);
        agent.pool.push({prev.psi, prev.reward, psi});

        if (agent.pool.size() > 0 && cfg.minibatch_size > 0) {
            std::uniform_int_distribution<std::size_t> pick(0, agent.pool.size() - 1);
            for (int i = 0; i < cfg.minibatch_size; ++i) {
                const ReplayTuple& t = agent.pool[pick(rng)];
                const double d = td_error(t.reward, agent.v.dot(t.psi), agent.v.dot(t.psi_next), cfg.discount);
                agent.v = update_critic(agent.v, d, t.psi, cfg.critic_lr);
            }
        }
    }
    agent.pending = AgentState::Pending{state, out.action.levels, psi, out.reward};

    agent.outage.push(out.outage);
    agent.phi = update_phi(agent.phi, agent.outage.rate(), cfg.outage_target);
    ++agent.step;
    return out;
}

void save_checkpoint(const AgentState& agent, const std::string& config_hash, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = "slicesim-agent-1";
    j["config_hash"] = config_hash;
    j["theta"] = std::vector<double>(agent.theta.data(), agent.theta.data() + agent.theta.size());
    j["v"] = std::vector<double>(agent.v.data(), agent.v.data() + agent.v.size());
    j["phi"] = agent.phi;
    j["step"] = agent.step;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
    out << j.dump(2) << '\n';
}

AgentState load_checkpoint(const std::filesystem::path& path, const ScenarioConfig& cfg,
                           const std::string& config_hash) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("config_hash").get<std::string>() != config_hash)
        throw std::runtime_error("checkpoint " + path.string() + " was written for a different config");
    AgentState a = AgentState::initial(cfg);
    const auto theta = j.at("theta").get<std::vector<double>>();
    const auto v = j.at("v").get<std::vector<double>>();
    if (theta.size() != kFeatureDim || v.size() != kFeatureDim)
        throw std::runtime_error("checkpoint " + path.string() + ": parameter vectors must have 6 entries");
    a.theta = Eigen::Map<const Vector>(theta.data(), kFeatureDim);
    a.v = Eigen::Map<const Vector>(v.data(), kFeatureDim);
    a.phi = j.at("phi").get<double>();
    a.step = j.at("step").get<std::int64_t>();
    return a;
}

}  // namespace slicesim
