#include "slicesim/experiment.hpp"

#include "slicesim/config_io.hpp"
#include "slicesim/plot.hpp"
#include "slicesim/simulation.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#ifndef SLICESIM_VERSION
#define SLICESIM_VERSION "0.0.0"
#endif
#ifndef SLICESIM_GIT_DESCRIBE
#define SLICESIM_GIT_DESCRIBE "unknown"
#endif

namespace slicesim {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

template <class T>
std::vector<T> scalar_list(const YAML::Node& node, const std::string& path) {
    if (!node) return {};
    try {
        if (node.IsScalar()) return {node.as<T>()};
        if (!node.IsSequence()) throw ConfigError(path, "expected a list");
        std::vector<T> out;
        for (const auto& item : node) out.push_back(item.as<T>());
        return out;
    } catch (const YAML::Exception&) {
        throw ConfigError(path, "malformed list entry");
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path, "malformed value");
    }
}

fs::path resolve(const fs::path& base_dir, const fs::path& p) { return p.is_absolute() ? p : base_dir / p; }

double value_of(const std::vector<SummaryRow>& rows, const std::string& key) {
    for (const auto& r : rows)
        if (r.key == key) return r.value;
    return 0.0;
}

void write_run_plots(const fs::path& dir, const MetricsLog& log, const ScenarioConfig& cfg,
                     const std::vector<double>& r_min) {
    const auto users = log.mean_user_rates();
    std::vector<std::string> names;
    for (std::size_t k = 0; k < users.size(); ++k) names.push_back("e" + std::to_string(k));
    const std::string jain = users.empty() ? "n/a" : format_number(std::round(jain_index(users) * 1e4) / 1e4);
    write_text(dir / "user_rates.svg",
               bar_chart_svg(names, users, {"Mean eMBB rate per user, Jain " + jain, "user", "Mbit/s"}));

    const auto outages = log.outages();
    const auto theta = outage_series(outages, cfg.outage_window);
    Series th{"windowed outage", {}, theta};
    for (std::size_t t = 0; t < theta.size(); ++t) th.x.push_back(static_cast<double>(t));
    Series target{"target", {0.0, static_cast<double>(std::max<std::size_t>(theta.size(), 1))},
                  {cfg.outage_target, cfg.outage_target}};
    write_text(dir / "outage.svg", line_chart_svg({th, target}, {"URLLC outage", "slot", "outage rate"}));

    std::vector<std::string> rel_names;
    std::vector<double> rel;
    for (double r : r_min) {
        rel_names.push_back(format_number(r));
        rel.push_back(embb_reliability(log, r));
    }
    write_text(dir / "reliability.svg",
               bar_chart_svg(rel_names, rel, {"eMBB reliability", "minimum rate (Mbit/s)", "fraction of user-slots"}));

    if (log.size() == 0) return;
    const auto sums = log.sum_rates();
    Series tail{"sum rate", {}, {}};
    for (const auto& [v, p] : ccdf(sums)) {
        tail.x.push_back(v);
        tail.y.push_back(p);
    }
    write_text(dir / "sum_rate_ccdf.svg", line_chart_svg({tail}, {"Sum eMBB rate CCDF", "Mbit/s", "P[X >= x]"}, true));

    const Histogram h = fd_histogram(sums);
    Series pdf{"sum rate", {}, {}};
    for (std::size_t i = 0; i < h.density.size(); ++i) {
        pdf.x.push_back(h.start + h.width * static_cast<double>(i));
        pdf.y.push_back(h.density[i]);
    }
    pdf.x.push_back(h.start + h.width * static_cast<double>(h.density.size()));
    pdf.y.push_back(h.density.back());
    write_text(dir / "sum_rate_pdf.svg", line_chart_svg({pdf}, {"Sum eMBB rate PDF", "Mbit/s", "density"}, true));

    Series rw{"reward", {}, {}};
    double acc = 0.0;
    const auto& recs = log.records();
    const std::size_t w = static_cast<std::size_t>(cfg.outage_window);
    for (std::size_t t = 0; t < recs.size(); ++t) {
        acc += recs[t].reward;
        if (t >= w) acc -= recs[t - w].reward;
        rw.x.push_back(static_cast<double>(t));
        rw.y.push_back(acc / static_cast<double>(std::min(t + 1, w)));
    }
    write_text(dir / "reward.svg", line_chart_svg({rw}, {"Moving-average reward", "slot", "reward"}));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

void report_run(const fs::path& dir) {
    const ScenarioConfig cfg = load_config(dir / "config.yaml");
    std::vector<double> r_min = ExperimentPlan{}.r_min_mbps;
    std::ifstream mf(dir / "manifest.json");
    if (mf) {
        const json manifest = json::parse(mf);
        if (manifest.contains("r_min_mbps")) r_min = manifest["r_min_mbps"].get<std::vector<double>>();
    }
    const MetricsLog log = read_slots_csv(dir / "slots.csv");
    write_summary_csv(summarize(log, cfg.outage_target, cfg.outage_window, r_min), dir / "summary.csv");
    write_run_plots(dir, log, cfg, r_min);
}

}  // namespace

ExperimentPlan parse_plan(const std::string& yaml_text, const fs::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("<plan>", std::string("malformed YAML: ") + e.what());
    }
    ExperimentPlan plan;
    if (!root || root.IsNull()) {
        plan.output = resolve(base_dir, plan.output);
        return plan;
    }
    if (!root.IsMap()) throw ConfigError("<plan>", "expected a mapping");

    static const std::vector<std::string> known = {"name",   "scheduler", "slots",    "seeds", "output",
                                                   "config", "config_file", "geometry", "sweep", "r_min_mbps"};
    for (const auto& entry : root) {
        const auto key = entry.first.as<std::string>();
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown plan key");
    }

    if (root["name"]) plan.name = scalar<std::string>(root["name"], "name");
    if (root["scheduler"]) {
        try {
            plan.scheduler = parse_scheduler(scalar<std::string>(root["scheduler"], "scheduler"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheduler", e.what());
        }
    }
    if (root["slots"]) plan.slots = scalar<std::int64_t>(root["slots"], "slots");
    if (plan.slots < 0) throw ConfigError("slots", "must be >= 0");
    plan.seeds = scalar_list<std::uint64_t>(root["seeds"], "seeds");
    if (root["output"]) plan.output = scalar<std::string>(root["output"], "output");
    plan.output = resolve(base_dir, plan.output);
    if (root["geometry"]) plan.geometry = resolve(base_dir, scalar<std::string>(root["geometry"], "geometry"));
    if (root["r_min_mbps"]) plan.r_min_mbps = scalar_list<double>(root["r_min_mbps"], "r_min_mbps");

    if (root["config_file"]) {
        const fs::path p = resolve(base_dir, scalar<std::string>(root["config_file"], "config_file"));
        std::ifstream in(p);
        if (!in) throw ConfigError("config_file", "cannot open " + p.string());
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            merge_config(plan.base, YAML::Load(ss.str()));
        } catch (const YAML::Exception& e) {
            throw ConfigError("config_file", std::string("malformed YAML: ") + e.what());
        }
    }
    if (root["config"]) {
        try {
            merge_config(plan.base, root["config"]);
        } catch (const ConfigError& e) {
            throw ConfigError("config." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
        }
    }

    if (const auto sweep = root["sweep"]) {
        if (!sweep.IsMap()) throw ConfigError("sweep", "expected a mapping");
        for (const auto& entry : sweep) {
            const auto key = entry.first.as<std::string>();
            const std::string path = "sweep." + key;
            if (key == "risk_param") plan.risk_params = scalar_list<double>(entry.second, path);
            else if (key == "arrival_rate") plan.arrival_rates = scalar_list<double>(entry.second, path);
            else if (key == "outage_target") plan.outage_targets = scalar_list<double>(entry.second, path);
            else throw ConfigError(path, "unknown sweep key");
        }
    }
    validate(plan.base);
    return plan;
}

ExperimentPlan load_plan(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::vector<RunPoint> expand_plan(const ExperimentPlan& plan) {
    auto or_base = [](const std::vector<double>& v, double base) { return v.empty() ? std::vector<double>{base} : v; };
    const auto mus = or_base(plan.risk_params, plan.base.risk_param);
    const auto lambdas = or_base(plan.arrival_rates, plan.base.arrival_rate);
    const auto thetas = or_base(plan.outage_targets, plan.base.outage_target);
    const auto seeds = plan.seeds.empty() ? std::vector<std::uint64_t>{plan.base.seed} : plan.seeds;

    std::vector<RunPoint> points;
    for (double mu : mus) {
        for (double lambda : lambdas) {
            for (double theta : thetas) {
                for (std::uint64_t seed : seeds) {
                    RunPoint p{plan.base, {}};
                    p.cfg.risk_param = mu;
                    p.cfg.arrival_rate = lambda;
                    p.cfg.outage_target = theta;
                    p.cfg.seed = seed;
                    std::string name;
                    if (!plan.risk_params.empty()) name += "mu=" + format_number(mu) + "_";
                    if (!plan.arrival_rates.empty()) name += "lambda=" + format_number(lambda) + "_";
                    if (!plan.outage_targets.empty()) name += "theta=" + format_number(theta) + "_";
                    p.dir_name = name + "seed=" + std::to_string(seed);
                    points.push_back(std::move(p));
                }
            }
        }
    }
    return points;
}

RunSummary execute_run(const ExperimentPlan& plan, const RunPoint& point) {
    const auto start = std::chrono::steady_clock::now();
    validate(point.cfg);
    const fs::path dir = plan.output / point.dir_name;
    fs::create_directories(dir);

    const UserGeometry geo = plan.geometry ? load_geometry(*plan.geometry)
                                           : place_users(point.cfg, RngStreams(point.cfg.seed));
    check_geometry(geo, point.cfg);
    save_geometry(geo, dir / "users.txt");
    write_text(dir / "config.yaml", dump_config(point.cfg));

    std::ofstream reports(dir / "drra.jsonl");
    if (!reports) throw std::runtime_error("cannot write " + (dir / "drra.jsonl").string());
    RunHooks hooks;
    hooks.on_report = [&reports](const SolveReport& r) { reports << to_json_line(r) << '\n'; };
    RunOutput out = run_simulation(point.cfg, plan.scheduler, plan.slots, geo, hooks);
    reports.close();

    LaneResult& lane = out.lanes.front();
    write_slots_csv(lane.log, dir / "slots.csv");
    RunSummary summary{dir, summarize(lane.log, point.cfg.outage_target, point.cfg.outage_window, plan.r_min_mbps), 0.0,
                       out.solver_warnings};
    write_summary_csv(summary.rows, dir / "summary.csv");
    write_run_plots(dir, lane.log, point.cfg, plan.r_min_mbps);
    const std::string hash = config_hash(point.cfg);
    if (lane.agent) save_checkpoint(*lane.agent, hash, dir / "agent.json");
    if (out.solver_warnings > 0)
        std::cerr << "warning: " << dir.string() << ": " << out.solver_warnings
                  << " slot(s) where the DRRA solver hit an iteration cap\n";

    summary.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest = {
        {"name", plan.name},
        {"scheduler", scheduler_name(plan.scheduler)},
        {"seed", point.cfg.seed},
        {"slots", plan.slots},
        {"risk_param", point.cfg.risk_param},
        {"arrival_rate", point.cfg.arrival_rate},
        {"outage_target", point.cfg.outage_target},
        {"r_min_mbps", plan.r_min_mbps},
        {"config_hash", hash},
        {"version", SLICESIM_VERSION},
        {"git_describe", SLICESIM_GIT_DESCRIBE},
        {"wall_time_s", summary.wall_time_s},
        {"solver_warnings", out.solver_warnings},
    };
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

std::vector<RunSummary> execute_plan(const ExperimentPlan& plan, int jobs) {
    const auto points = expand_plan(plan);
    std::vector<RunSummary> results(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                results[i] = execute_run(plan, points[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n = std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

MetricsLog read_slots_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
    const auto header = split_csv_line(line);
    static const std::vector<std::string> fixed = {"t",     "arrivals",      "urllc_rate_bits", "outage", "punctured",
                                                   "sum_rate_mbps", "embb_utility", "reward",          "phi"};
    if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
        throw std::runtime_error(path.string() + ": unexpected header");
    const std::size_t users = header.size() - fixed.size();

    MetricsLog log;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(row) + ": wrong column count");
        SlotRecord r;
        r.t = std::stoll(cells[0]);
        r.arrivals = std::stoi(cells[1]);
        r.urllc_rate_bits = std::stod(cells[2]);
        r.outage = cells[3] == "1";
        r.punctured = std::stoi(cells[4]);
        r.sum_rate_mbps = std::stod(cells[5]);
        r.embb_utility = std::stod(cells[6]);
        r.reward = std::stod(cells[7]);
        r.phi = std::stod(cells[8]);
        for (std::size_t k = 0; k < users; ++k) r.embb_rate_mbps.push_back(std::stod(cells[fixed.size() + k]));
        log.append(std::move(r));
    }
    return log;
}

std::vector<fs::path> report(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    if (fs::exists(dir / "slots.csv")) {
        report_run(dir);
        return {dir};
    }
    std::vector<fs::path> runs;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() == "slots.csv") runs.push_back(entry.path().parent_path());
    std::sort(runs.begin(), runs.end());
    if (runs.empty()) throw std::runtime_error("no run directories below " + dir.string());

    std::ofstream out(dir / "sweep_summary.csv");
    if (!out) throw std::runtime_error("cannot write " + (dir / "sweep_summary.csv").string());
    std::vector<std::string> names;
    std::vector<double> jain, outage;
    bool header = false;
    for (const auto& run : runs) {
        report_run(run);
        const ScenarioConfig cfg = load_config(run / "config.yaml");
        std::vector<double> r_min = ExperimentPlan{}.r_min_mbps;
        std::ifstream mf(run / "manifest.json");
        std::string scheduler = "unknown";
        if (mf) {
            const json manifest = json::parse(mf);
            if (manifest.contains("r_min_mbps")) r_min = manifest["r_min_mbps"].get<std::vector<double>>();
            scheduler = manifest.value("scheduler", scheduler);
        }
        const auto rows = summarize(read_slots_csv(run / "slots.csv"), cfg.outage_target, cfg.outage_window, r_min);
        if (!header) {
            out << "run,scheduler,seed,risk_param,arrival_rate,outage_target";
            for (const auto& r : rows) out << ',' << r.key;
            out << '\n';
            header = true;
        }
        const std::string rel = fs::relative(run, dir).generic_string();
        out << rel << ',' << scheduler << ',' << cfg.seed << ',' << format_number(cfg.risk_param) << ','
            << format_number(cfg.arrival_rate) << ',' << format_number(cfg.outage_target);
        for (const auto& r : rows) out << ',' << format_number(r.value);
        out << '\n';
        names.push_back(rel);
        jain.push_back(value_of(rows, "jain_mean_rates"));
        outage.push_back(value_of(rows, "outage_rate"));
    }
    write_text(dir / "sweep_jain.svg", bar_chart_svg(names, jain, {"Jain index of mean user rates", "run", "Jain"}));
    write_text(dir / "sweep_outage.svg", bar_chart_svg(names, outage, {"URLLC outage rate", "run", "outage"}));
    return runs;
}

std::string version_string() { return std::string(SLICESIM_VERSION) + " (" + SLICESIM_GIT_DESCRIBE + ")"; }

}  // namespace slicesim
