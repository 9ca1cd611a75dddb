#pragma once

// Slot-by-slot pipeline: channel/traffic sample, DRRA, puncturing scheduler,
// experienced rates, metrics.

#include "slicesim/baselines.hpp"
#include "slicesim/drra.hpp"
#include "slicesim/env.hpp"
#include "slicesim/metrics.hpp"
#include "slicesim/pgacl.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slicesim {

/// One scheduler fed by a shared DRRA allocation. Lanes of a multi-lane run see
/// the same slots and the same RB/power decisions; only the puncturing differs.
struct Lane {
    std::string name;
    Scheduler scheduler = Scheduler::drra;
    /// Config used for the scheduler and its agent (e.g. warmstart_slots = 0 for a
    /// random-start agent). Physical and traffic fields must match the run config.
    std::optional<ScenarioConfig> learning;
    /// Initial agent for pgacl lanes; a fresh one when empty.
    std::optional<AgentState> agent;
};

struct LaneResult {
    std::string name;
    MetricsLog log;
    std::optional<AgentState> agent;
};

struct RunHooks {
    /// Called once per slot with the DRRA report.
    std::function<void(const SolveReport&)> on_report;
    /// Called after each slot with the number of slots done.
    std::function<void(std::int64_t)> on_progress;
};

struct RunOutput {
    std::vector<LaneResult> lanes;
    int solver_warnings = 0;  // slots whose DRRA solve hit an iteration cap
};

/// Simulates slots [0, slots) for every lane. Users are placed from the seed
/// unless `geometry` is given.
RunOutput run_lanes(const ScenarioConfig& cfg, std::int64_t slots, std::vector<Lane> lanes,
                    const std::optional<UserGeometry>& geometry = std::nullopt, const RunHooks& hooks = {});

/// Single-lane convenience wrapper.
RunOutput run_simulation(const ScenarioConfig& cfg, Scheduler scheduler, std::int64_t slots,
                         const std::optional<UserGeometry>& geometry = std::nullopt, const RunHooks& hooks = {});

}  // namespace slicesim
