// Command-line front end: run, validate, sweep, report.

#include "slicesim/config_io.hpp"
#include "slicesim/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace slicesim;

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> slots;
    std::optional<std::string> scheduler;
    std::optional<std::string> out;
    int jobs = 1;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--seed", f.seed, "Run a single seed instead of the plan's seed list");
    cmd->add_option("--slots", f.slots, "Slots per run");
    cmd->add_option("--scheduler", f.scheduler, "drra | pgacl | sum-rate | sum-log | lmcs | equal");
    cmd->add_option("--out", f.out, "Output directory");
}

ExperimentPlan prepare(const std::string& path, const RunFlags& f) {
    ExperimentPlan plan = load_plan(path);
    for (const auto& key : apply_env_overrides(plan.base, process_environment()))
        std::cerr << "override from environment: " << key << '\n';
    validate(plan.base);
    if (f.seed) plan.seeds = {*f.seed};
    if (f.slots) {
        if (*f.slots < 0) throw ConfigError("--slots", "must be >= 0");
        plan.slots = *f.slots;
    }
    if (f.scheduler) {
        try {
            plan.scheduler = parse_scheduler(*f.scheduler);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--scheduler", e.what());
        }
    }
    if (f.out) plan.output = *f.out;
    return plan;
}

void print_summary(const RunSummary& s) {
    std::cout << s.dir.string() << '\n';
    for (const auto& row : s.rows) std::cout << "  " << row.key << " = " << format_number(row.value) << '\n';
    std::cout << "  wall_time_s = " << format_number(s.wall_time_s) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slot-level eMBB/URLLC puncturing simulator"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string path;
    RunFlags flags;

    auto* run = app.add_subcommand("run", "Simulate the plan's base scenario for one seed");
    run->add_option("plan", path, "Plan file")->required();
    add_run_flags(run, flags);

    auto* sweep = app.add_subcommand("sweep", "Simulate every sweep point and seed of a plan");
    sweep->add_option("plan", path, "Plan file")->required();
    add_run_flags(sweep, flags);
    sweep->add_option("--jobs", flags.jobs, "Runs executed in parallel")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("validate", "Check a config file and print it with defaults filled in");
    check->add_option("config", path, "Config file")->required();

    auto* rep = app.add_subcommand("report", "Rebuild summaries and plots of a run or sweep directory");
    rep->add_option("dir", path, "Run or sweep directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentPlan plan = prepare(path, flags);
            plan.risk_params.clear();
            plan.arrival_rates.clear();
            plan.outage_targets.clear();
            if (plan.seeds.size() > 1) plan.seeds.resize(1);
            print_summary(execute_run(plan, expand_plan(plan).front()));
        } else if (sweep->parsed()) {
            const ExperimentPlan plan = prepare(path, flags);
            const auto results = execute_plan(plan, flags.jobs);
            for (const auto& r : results) print_summary(r);
            report(plan.output);
        } else if (check->parsed()) {
            ScenarioConfig cfg = load_config(path);
            apply_env_overrides(cfg, process_environment());
            validate(cfg);
            std::cout << "# config_hash " << config_hash(cfg) << '\n' << dump_config(cfg);
        } else if (rep->parsed()) {
            for (const auto& dir : report(path)) std::cout << dir.string() << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
