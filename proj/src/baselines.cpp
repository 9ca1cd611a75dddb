#include "slicesim/baselines.hpp"

#include "slicesim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slicesim {

namespace {

std::vector<int> allocated_rbs(const Allocation& alloc) {
    std::vector<int> rbs;
    for (int b = 0; b < alloc.num_rbs(); ++b)
        if (alloc.owner(b) >= 0) rbs.push_back(b);
    return rbs;
}

/// Unpunctured rate of RB b for its owner (bits/slot).
double rb_rate(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int b) {
    const int k = alloc.owner(b);
    return embb_rb_rate(cfg.rb_bandwidth_hz(), cfg.slot_duration_s, 0, cfg.minislots_per_slot, alloc.p(k, b),
                        slot.embb_gain(k, b), cfg.noise_power_w());
}

}  // namespace

int demand_from_load(int arrivals, const ScenarioConfig& cfg, const SlotState& slot, const Allocation& alloc) {
    if (arrivals <= 0) return 0;
    const auto rbs = allocated_rbs(alloc);
    const int cap = static_cast<int>(rbs.size()) * cfg.minislots_per_slot;
    if (rbs.empty()) return 0;
    const Matrix full = urllc_full_rb_rates(slot, cfg);
    const Matrix penalty = urllc_dispersion_penalty(slot, cfg);
    double per_minislot = 0.0;
    for (int b : rbs)
        for (int n = 0; n < full.rows(); ++n)
            per_minislot += std::max(0.0, full(n, b) / cfg.minislots_per_slot - penalty(n, b));
    per_minislot /= static_cast<double>(rbs.size());
    if (per_minislot <= 0.0) return cap;
    const double need = std::ceil(cfg.urllc_packet_bits * arrivals / per_minislot);
    return static_cast<int>(std::min<double>(need, cap));
}

IntMatrix sum_rate_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand) {
    IntMatrix z = IntMatrix::Zero(alloc.num_users(), alloc.num_rbs());
    auto rbs = allocated_rbs(alloc);
    std::vector<double> loss(alloc.num_rbs(), 0.0);
    for (int b : rbs) loss[b] = rb_rate(alloc, slot, cfg, b) / cfg.minislots_per_slot;
    // The loss of one mini-slot does not depend on how many are already taken,
    // so filling the cheapest RBs first is the greedy (and optimal) placement.
    std::stable_sort(rbs.begin(), rbs.end(), [&](int a, int b) { return loss[a] < loss[b]; });
    for (int b : rbs) {
        if (demand <= 0) break;
        const int take = std::min(demand, cfg.minislots_per_slot);
        z(alloc.owner(b), b) = take;
        demand -= take;
    }
    return z;
}

IntMatrix sum_log_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand) {
    const int M = cfg.minislots_per_slot;
    IntMatrix z = IntMatrix::Zero(alloc.num_users(), alloc.num_rbs());
    const auto rbs = allocated_rbs(alloc);
    std::vector<double> loss(alloc.num_rbs(), 0.0);
    Vector rate = Vector::Zero(alloc.num_users());
    for (int b : rbs) {
        const double r = rb_rate(alloc, slot, cfg, b);
        loss[b] = r / M;
        rate(alloc.owner(b)) += r;
    }
    auto utility = [](double r) { return std::log(std::max(r, 1.0)); };
    for (; demand > 0; --demand) {
        int best = -1;
        double best_cost = 0.0;
        for (int b : rbs) {
            const int k = alloc.owner(b);
            if (z(k, b) >= M) continue;
            const double cost = utility(rate(k)) - utility(rate(k) - loss[b]);
            if (best < 0 || cost < best_cost) {
                best = b;
                best_cost = cost;
            }
        }
        if (best < 0) break;
        const int k = alloc.owner(best);
        ++z(k, best);
        rate(k) -= loss[best];
    }
    return z;
}

int mcs_index(double spectral_efficiency) {
    int level = 0;
    for (std::size_t i = 0; i < kCqiEfficiency.size(); ++i)
        if (kCqiEfficiency[i] <= spectral_efficiency) level = static_cast<int>(i) + 1;
    return level;
}

std::vector<int> user_mcs(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg) {
    const double sigma2 = cfg.noise_power_w();
    std::vector<double> se(alloc.num_users(), 0.0);
    std::vector<int> count(alloc.num_users(), 0);
    for (int b : allocated_rbs(alloc)) {
        const int k = alloc.owner(b);
        se[k] += std::log2(1.0 + alloc.p(k, b) * slot.embb_gain(k, b) / sigma2);
        ++count[k];
    }
    std::vector<int> mcs(alloc.num_users(), 0);
    for (int k = 0; k < alloc.num_users(); ++k)
        if (count[k]) mcs[k] = mcs_index(se[k] / count[k]);
    return mcs;
}

IntMatrix lmcs_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand) {
    IntMatrix z = IntMatrix::Zero(alloc.num_users(), alloc.num_rbs());
    const auto mcs = user_mcs(alloc, slot, cfg);
    std::vector<int> users(alloc.num_users());
    std::iota(users.begin(), users.end(), 0);
    std::stable_sort(users.begin(), users.end(), [&](int a, int b) { return mcs[a] < mcs[b]; });
    const auto rbs = allocated_rbs(alloc);
    for (int k : users) {
        for (int b : rbs) {
            if (demand <= 0) return z;
            if (alloc.owner(b) != k) continue;
            const int take = std::min(demand, cfg.minislots_per_slot);
            z(k, b) = take;
            demand -= take;
        }
    }
    return z;
}

IntMatrix equal_split_scheduler(const Allocation& alloc, const SlotState&, const ScenarioConfig& cfg, int demand) {
    IntMatrix z = IntMatrix::Zero(alloc.num_users(), alloc.num_rbs());
    const auto rbs = allocated_rbs(alloc);
    if (rbs.empty()) return z;
    demand = std::min<int>(demand, static_cast<int>(rbs.size()) * cfg.minislots_per_slot);
    for (int i = 0; i < demand; ++i) {
        const int b = rbs[i % rbs.size()];
        ++z(alloc.owner(b), b);
    }
    return z;
}

Scheduler parse_scheduler(const std::string& name) {
    if (name == "drra") return Scheduler::drra;
    if (name == "pgacl") return Scheduler::pgacl;
    if (name == "sum-rate") return Scheduler::sum_rate;
    if (name == "sum-log") return Scheduler::sum_log;
    if (name == "lmcs") return Scheduler::lmcs;
    if (name == "equal") return Scheduler::equal;
    throw std::invalid_argument("unknown scheduler '" + name + "' (drra|pgacl|sum-rate|sum-log|lmcs|equal)");
}

std::string scheduler_name(Scheduler s) {
    switch (s) {
        case Scheduler::drra: return "drra";
        case Scheduler::pgacl: return "pgacl";
        case Scheduler::sum_rate: return "sum-rate";
        case Scheduler::sum_log: return "sum-log";
        case Scheduler::lmcs: return "lmcs";
        case Scheduler::equal: return "equal";
    }
    return "unknown";
}

IntMatrix run_baseline(Scheduler s, const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg,
                       int demand) {
    switch (s) {
        case Scheduler::sum_rate: return sum_rate_scheduler(alloc, slot, cfg, demand);
        case Scheduler::sum_log: return sum_log_scheduler(alloc, slot, cfg, demand);
        case Scheduler::lmcs: return lmcs_scheduler(alloc, slot, cfg, demand);
        case Scheduler::equal: return equal_split_scheduler(alloc, slot, cfg, demand);
        default: throw std::invalid_argument("run_baseline: " + scheduler_name(s) + " is not a baseline");
    }
}

}  // namespace slicesim
