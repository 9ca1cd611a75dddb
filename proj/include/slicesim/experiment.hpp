#pragma once

// Experiment plans, run directories and reports.
//
// A plan file is YAML:
//
//   name: fairness
//   scheduler: drra            # drra | pgacl | sum-rate | sum-log | lmcs | equal
//   slots: 200
//   seeds: [1, 2, 3]
//   output: runs/fairness      # relative to the plan file
//   config_file: base.yaml     # optional, relative to the plan file
//   config: {optimizer: {risk_param: -5}}   # optional inline sections, applied last
//   geometry: users.txt        # optional user placement table
//   sweep:                     # optional, cartesian product with seeds
//     risk_param: [-10, -5, -0.1]
//     arrival_rate: [0.2, 0.4]
//     outage_target: [0.04]
//   r_min_mbps: [0.5, 1.0, 1.5]
//
// Each (sweep point, seed) owns one directory holding config.yaml,
// manifest.json, slots.csv, summary.csv, drra.jsonl, SVG plots and, for pgacl,
// agent.json.

#include "slicesim/baselines.hpp"
#include "slicesim/env.hpp"
#include "slicesim/metrics.hpp"
#include "slicesim/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slicesim {

struct ExperimentPlan {
    std::string name = "run";
    Scheduler scheduler = Scheduler::drra;
    ScenarioConfig base;
    std::vector<double> risk_params;     // empty: base value only
    std::vector<double> arrival_rates;
    std::vector<double> outage_targets;
    std::vector<double> r_min_mbps = {0.5, 1.0, 1.5, 2.0};
    std::vector<std::uint64_t> seeds;    // empty: base.seed only
    std::int64_t slots = 100;
    std::filesystem::path output = "runs";
    std::optional<std::filesystem::path> geometry;
};

/// Relative paths in the plan resolve against `base_dir`. Throws ConfigError with
/// the offending key.
ExperimentPlan parse_plan(const std::string& yaml_text, const std::filesystem::path& base_dir = ".");
ExperimentPlan load_plan(const std::filesystem::path& path);

/// One run of a plan.
struct RunPoint {
    ScenarioConfig cfg;
    std::string dir_name;
};

/// Cartesian product risk x arrival x outage target x seed, in that nesting order.
std::vector<RunPoint> expand_plan(const ExperimentPlan& plan);

struct RunSummary {
    std::filesystem::path dir;
    std::vector<SummaryRow> rows;
    double wall_time_s = 0.0;
    int solver_warnings = 0;
};

/// Simulates one point and writes its run directory under plan.output.
RunSummary execute_run(const ExperimentPlan& plan, const RunPoint& point);

/// Every point of the plan, `jobs` runs at a time. Results follow expand_plan order.
std::vector<RunSummary> execute_plan(const ExperimentPlan& plan, int jobs = 1);

/// Reads a slots.csv back into a log.
MetricsLog read_slots_csv(const std::filesystem::path& path);

/// Regenerates summary.csv and plots of a run directory, or of every run directory
/// below `dir` plus a sweep_summary.csv comparing them. Returns the runs reported.
std::vector<std::filesystem::path> report(const std::filesystem::path& dir);

/// "<version> (<git describe>)".
std::string version_string();

}  // namespace slicesim
