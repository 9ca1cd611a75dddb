#include "slicesim/simulation.hpp"

#include "slicesim/model.hpp"

#include <stdexcept>

namespace slicesim {

namespace {

struct LaneRuntime {
    Lane lane;
    ScenarioConfig cfg;
    std::optional<AgentState> agent;
    MetricsLog log;
};

SlotRecord measure(const Allocation& alloc, const SlotState& experienced, const ScenarioConfig& cfg,
                   std::int64_t t, int arrivals) {
    SlotRecord rec;
    rec.t = t;
    rec.arrivals = arrivals;
    const Vector rates = embb_user_rates(alloc, experienced, cfg) * cfg.mbps_per_bit_slot();
    rec.embb_rate_mbps.assign(rates.data(), rates.data() + rates.size());
    rec.sum_rate_mbps = rates.sum();
    rec.urllc_rate_bits = urllc_sum_rate(alloc, experienced, cfg);
    rec.outage = is_outage(rec.urllc_rate_bits, arrivals, cfg);
    rec.punctured = alloc.z.sum();
    return rec;
}

}  // namespace

RunOutput run_lanes(const ScenarioConfig& cfg, std::int64_t slots, std::vector<Lane> lanes,
                    const std::optional<UserGeometry>& geometry, const RunHooks& hooks) {
    if (slots < 0) throw std::invalid_argument("run_lanes: negative slot count");
    validate(cfg);
    const RngStreams rng(cfg.seed);
    const UserGeometry geo = geometry ? *geometry : place_users(cfg, rng);
    check_geometry(geo, cfg);

    std::vector<LaneRuntime> runtime;
    for (auto& lane : lanes) {
        LaneRuntime r{lane, lane.learning.value_or(cfg), std::nullopt, {}};
        validate(r.cfg);
        if (lane.scheduler == Scheduler::pgacl) r.agent = lane.agent ? *lane.agent : AgentState::initial(r.cfg);
        runtime.push_back(std::move(r));
    }

    RunOutput out;
    for (std::int64_t t = 0; t < slots; ++t) {
        const SlotState slot = sample_slot(cfg, geo, rng, t);
        const Matrix saa = saa_fading(cfg, rng, t);
        const DrraResult drra = run_drra(slot, cfg, saa);
        if (hooks.on_report) hooks.on_report(drra.report);
        if (drra.report.inner_failures > 0 || !drra.report.converged) ++out.solver_warnings;

        const DrraContext ctx(slot, cfg, saa);
        const UtilityFn utility = [&ctx](const Allocation& a) { return ctx.allocation_utility(a); };
        const SlotState experienced = experienced_slot(slot, transmission_fading(cfg, rng, t));

        for (auto& r : runtime) {
            Allocation alloc = drra.alloc;
            double reward_value = 0.0, phi = 0.0, g = 0.0;
            switch (r.lane.scheduler) {
                case Scheduler::drra:
                    g = utility(alloc);
                    break;
                case Scheduler::pgacl: {
                    auto engine = rng.engine(Stream::policy, static_cast<std::uint64_t>(t));
                    const StepOutcome o = step(*r.agent, alloc, slot, r.cfg, utility, engine, &drra.alloc.z);
                    alloc.z = o.action.z;
                    reward_value = o.reward;
                    phi = o.phi;
                    g = o.embb_utility;
                    break;
                }
                default: {
                    const int demand = demand_from_load(slot.arrivals, r.cfg, slot, alloc);
                    alloc.z = run_baseline(r.lane.scheduler, alloc, slot, r.cfg, demand);
                    g = utility(alloc);
                    break;
                }
            }
            SlotRecord rec = measure(alloc, experienced, r.cfg, t, slot.arrivals);
            rec.embb_utility = g;
            rec.phi = phi;
            rec.reward = r.lane.scheduler == Scheduler::pgacl
                             ? reward_value
                             : reward(g, rec.urllc_rate_bits, slot.arrivals, 0.0, r.cfg);
            r.log.append(std::move(rec));
        }
        if (hooks.on_progress) hooks.on_progress(t + 1);
    }

    for (auto& r : runtime) out.lanes.push_back({r.lane.name, std::move(r.log), std::move(r.agent)});
    return out;
}

RunOutput run_simulation(const ScenarioConfig& cfg, Scheduler scheduler, std::int64_t slots,
                         const std::optional<UserGeometry>& geometry, const RunHooks& hooks) {
    return run_lanes(cfg, slots, {Lane{scheduler_name(scheduler), scheduler, std::nullopt, std::nullopt}}, geometry,
                     hooks);
}

}  // namespace slicesim
