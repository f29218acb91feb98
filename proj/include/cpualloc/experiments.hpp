#pragma once

#include "cpualloc/mdp.hpp"
#include "cpualloc/model_io.hpp"
#include "cpualloc/scenarios.hpp"
#include "cpualloc/simulator.hpp"
#include "cpualloc/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cpualloc {

enum class OutputFormat { Csv, Json };

struct SolverSettings {
    double epsilon = default_epsilon;
    long max_iter = default_max_iter;
};

struct SimulationSettings {
    std::size_t runs = 10'000;
    std::size_t steps = 1'000;
    /// unset: middle load level
    std::optional<std::size_t> init_state;
    std::uint64_t master_seed = 42;
    /// p of the single-run reward curve; unset: 0.1 for SDR, 0.8 for SDN
    std::optional<double> curve_p;
    unsigned threads = 0;
    bool per_run = false;
};

struct OutputSettings {
    std::string directory = "out";
    OutputFormat format = OutputFormat::Csv;
};

struct ExperimentConfig {
    ScenarioSpec scenario;
    RewardRules rewards;
    SolverSettings solver;
    SimulationSettings simulation;
    EnergyModel energy;
    OutputSettings output;
    /// overrides the per-kind sweep list when non-empty
    std::vector<double> sweep_p;
    bool include_p_half = false;
};

inline std::size_t initial_state(const ExperimentConfig& cfg, std::size_t n_states) {
    return cfg.simulation.init_state.value_or(n_states / 2);
}

inline void check_config(const ExperimentConfig& cfg) {
    check_spec(cfg.scenario);
    check_rules(cfg.rewards);
    if (!(cfg.solver.epsilon > 0.0)) throw std::invalid_argument("solver.epsilon must be positive");
    if (cfg.solver.max_iter < 1) throw std::invalid_argument("solver.max_iter must be positive");
    if (cfg.simulation.runs < 1) throw std::invalid_argument("simulation.runs must be positive");
    if (cfg.simulation.steps < 1) throw std::invalid_argument("simulation.steps must be positive");
    if (cfg.simulation.init_state && *cfg.simulation.init_state >= cfg.scenario.n_states)
        throw std::invalid_argument("simulation.init_state out of range");
    if (!(cfg.energy.watts_per_core > 0.0) || !(cfg.energy.hours > 0.0))
        throw std::invalid_argument("energy.watts_per_core and energy.hours must be positive");
    for (double p : cfg.sweep_p)
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sweep p values must lie in (0,1)");
    if (cfg.simulation.curve_p && !(*cfg.simulation.curve_p > 0.0 && *cfg.simulation.curve_p < 1.0))
        throw std::invalid_argument("simulation.curve_p must lie in (0,1)");
}

// *******************************************************
// Configuration document
// *******************************************************

namespace detail {

template <class T>
void read_opt(const nlohmann::json& obj, const char* key, T& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

template <class T>
void read_opt(const nlohmann::json& obj, const char* key, std::optional<T>& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

}  // namespace detail

/// Every field is optional; missing fields keep their defaults.
/// scenario.p_change may be a number or the string "table-default".
inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
    using detail::read_opt;
    ExperimentConfig cfg;
    try {
        if (doc.contains("scenario")) {
            const auto& sc = doc.at("scenario");
            if (sc.contains("kind")) cfg.scenario.kind = parse_kind(sc.at("kind").get<std::string>());
            read_opt(sc, "n_states", cfg.scenario.n_states);
            if (sc.contains("p_change")) {
                const auto& p = sc.at("p_change");
                if (p.is_string()) {
                    if (p.get<std::string>() != "table-default")
                        throw std::invalid_argument("p_change must be a number or \"table-default\"");
                } else if (!p.is_null()) {
                    cfg.scenario.p_change = p.get<double>();
                }
            }
            read_opt(sc, "p_change_add", cfg.scenario.p_change_add);
            read_opt(sc, "p_change_remove", cfg.scenario.p_change_remove);
            read_opt(sc, "gamma", cfg.scenario.gamma);
            if (sc.contains("rewards")) {
                const auto& r = sc.at("rewards");
                read_opt(r, "keep_lowest", cfg.rewards.keep_lowest);
                read_opt(r, "keep_intermediate", cfg.rewards.keep_intermediate);
                read_opt(r, "keep_highest", cfg.rewards.keep_highest);
                read_opt(r, "good_move", cfg.rewards.good_move);
                read_opt(r, "bad_move", cfg.rewards.bad_move);
            }
            read_opt(sc, "sweep_p", cfg.sweep_p);
            read_opt(sc, "include_p_half", cfg.include_p_half);
        }
        if (doc.contains("solver")) {
            read_opt(doc.at("solver"), "epsilon", cfg.solver.epsilon);
            read_opt(doc.at("solver"), "max_iter", cfg.solver.max_iter);
        }
        if (doc.contains("simulation")) {
            const auto& sim = doc.at("simulation");
            read_opt(sim, "runs", cfg.simulation.runs);
            read_opt(sim, "steps", cfg.simulation.steps);
            read_opt(sim, "init_state", cfg.simulation.init_state);
            read_opt(sim, "master_seed", cfg.simulation.master_seed);
            read_opt(sim, "curve_p", cfg.simulation.curve_p);
            read_opt(sim, "threads", cfg.simulation.threads);
            read_opt(sim, "per_run", cfg.simulation.per_run);
        }
        if (doc.contains("energy")) {
            read_opt(doc.at("energy"), "watts_per_core", cfg.energy.watts_per_core);
            read_opt(doc.at("energy"), "hours", cfg.energy.hours);
        }
        if (doc.contains("output")) {
            const auto& out = doc.at("output");
            read_opt(out, "directory", cfg.output.directory);
            if (out.contains("format")) {
                const auto f = out.at("format").get<std::string>();
                if (f == "csv") cfg.output.format = OutputFormat::Csv;
                else if (f == "json") cfg.output.format = OutputFormat::Json;
                else throw std::invalid_argument("output.format must be csv or json");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed configuration: ") + e.what());
    }
    return cfg;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
    auto opt = [](const auto& o) -> nlohmann::json {
        if (o) return *o;
        return nullptr;
    };
    nlohmann::json scenario = {
        {"kind", kind_name(cfg.scenario.kind)},
        {"n_states", cfg.scenario.n_states},
        {"p_change", cfg.scenario.p_change ? nlohmann::json(*cfg.scenario.p_change)
                                           : nlohmann::json("table-default")},
        {"p_change_add", opt(cfg.scenario.p_change_add)},
        {"p_change_remove", opt(cfg.scenario.p_change_remove)},
        {"gamma", cfg.scenario.gamma},
        {"rewards",
         {{"keep_lowest", cfg.rewards.keep_lowest},
          {"keep_intermediate", cfg.rewards.keep_intermediate},
          {"keep_highest", cfg.rewards.keep_highest},
          {"good_move", cfg.rewards.good_move},
          {"bad_move", cfg.rewards.bad_move}}},
        {"sweep_p", cfg.sweep_p},
        {"include_p_half", cfg.include_p_half}};
    return {{"scenario", std::move(scenario)},
            {"solver", {{"epsilon", cfg.solver.epsilon}, {"max_iter", cfg.solver.max_iter}}},
            {"simulation",
             {{"runs", cfg.simulation.runs},
              {"steps", cfg.simulation.steps},
              {"init_state", opt(cfg.simulation.init_state)},
              {"master_seed", cfg.simulation.master_seed},
              {"curve_p", opt(cfg.simulation.curve_p)},
              {"threads", cfg.simulation.threads},
              {"per_run", cfg.simulation.per_run}}},
            {"energy", {{"watts_per_core", cfg.energy.watts_per_core}, {"hours", cfg.energy.hours}}},
            {"output",
             {{"directory", cfg.output.directory},
              {"format", cfg.output.format == OutputFormat::Csv ? "csv" : "json"}}}};
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open configuration " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return config_from_json(doc);
}

// *******************************************************
// Output helpers
// *******************************************************

/// Shortest round-trip-safe rendering is not needed for plots; 10
/// significant digits keeps files small and stable.
inline std::string fmt_num(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : path_(path), out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

inline nlohmann::json policy_json(const Policy& policy) {
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t s = 0; s < policy.size(); ++s) out[state_name(s)] = action_name(policy[s]);
    return out;
}

/// SolveResult document: per-iteration values, policy, iterations, convergence.
inline nlohmann::json to_json(const SolveResult& r) {
    return {{"history", r.history},
            {"optimal_values", r.optimal_values},
            {"policy", policy_json(r.policy)},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"epsilon", r.epsilon}};
}

/// One row per run, then a "mean" summary row.
inline void write_runs_csv(const std::filesystem::path& path, const AggregateStats& agg) {
    CsvWriter csv(path, {"run_id", "discounted_reward", "raw_reward", "net_core_delta",
                         "frac_highest_state"});
    for (const auto& r : agg.per_run)
        csv.row({std::to_string(r.run_id), fmt_num(r.discounted_reward), fmt_num(r.raw_reward),
                 std::to_string(r.net_core_delta), fmt_num(r.frac_highest_state)});
    csv.row({"mean", fmt_num(agg.discounted_reward.mean), fmt_num(agg.raw_reward.mean),
             fmt_num(agg.net_core_delta.mean), fmt_num(agg.frac_highest_state.mean)});
}

inline void write_reward_curve_csv(const std::filesystem::path& path,
                                   const std::vector<CurvePoint>& curve) {
    CsvWriter csv(path, {"step", "cumulative_raw", "cumulative_discounted"});
    for (const auto& c : curve)
        csv.row({std::to_string(c.step), fmt_num(c.cumulative_raw),
                 fmt_num(c.cumulative_discounted)});
}

// *******************************************************
// Commands
// *******************************************************

struct CommandResult {
    bool ok = true;
    std::vector<std::string> files;
    std::vector<std::string> messages;
};

inline std::filesystem::path prepare_output(const ExperimentConfig& cfg) {
    std::filesystem::path dir(cfg.output.directory);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Builds the configured scenario, reporting validation failures into res.
inline MdpModel build_checked(const ScenarioSpec& spec, const RewardRules& rules,
                              CommandResult& res) {
    MdpModel model = build_parameterized(spec, rules);
    const auto report = validate(model);
    if (!report.ok()) {
        res.ok = false;
        for (const auto& v : report.violations) res.messages.push_back(v.message);
    }
    return model;
}

inline std::string convergence_file(ProcessKind kind) {
    return kind == ProcessKind::SDR ? "fig2_sdr_convergence.csv" : "fig3_sdn_convergence.csv";
}

/// Value iteration on the configured scenario; writes the convergence
/// history, policy and summary.
inline CommandResult cmd_solve(const ExperimentConfig& cfg) {
    check_config(cfg);
    CommandResult res;
    const auto dir = prepare_output(cfg);
    const MdpModel model = build_checked(cfg.scenario, cfg.rewards, res);
    const SolveResult sol = value_iteration(model, cfg.solver.epsilon, cfg.solver.max_iter);
    const std::size_t n = model.n_states();

    {
        std::vector<std::string> header{"iteration"};
        for (std::size_t s = 0; s < n; ++s) header.push_back("V(" + state_name(s) + ")");
        CsvWriter csv(dir / convergence_file(cfg.scenario.kind), header);
        for (std::size_t j = 0; j < sol.history.size(); ++j) {
            std::vector<std::string> row{std::to_string(j)};
            for (double v : sol.history[j]) row.push_back(fmt_num(v));
            csv.row(row);
        }
        res.files.push_back(csv.path().string());
    }

    const auto p = cfg.scenario.resolved();
    if (cfg.output.format == OutputFormat::Csv) {
        {
            CsvWriter csv(dir / "solve_policy.csv", {"state", "action", "value"});
            for (std::size_t s = 0; s < n; ++s)
                csv.row({state_name(s), action_name(sol.policy[s]), fmt_num(sol.optimal_values[s])});
            res.files.push_back(csv.path().string());
        }
        CsvWriter csv(dir / "solve_summary.csv",
                      {"kind", "n_states", "p_change_add", "p_change_remove", "gamma", "epsilon",
                       "iterations", "converged", "policy"});
        std::string pol;
        for (std::size_t s = 0; s < n; ++s)
            pol += (s ? " " : "") + state_name(s) + ":" + action_name(sol.policy[s]);
        csv.row({kind_name(cfg.scenario.kind), std::to_string(n), fmt_num(p.add),
                 fmt_num(p.remove), fmt_num(model.gamma()), fmt_num(sol.epsilon),
                 std::to_string(sol.iterations), sol.converged ? "true" : "false", pol});
        res.files.push_back(csv.path().string());
    } else {
        auto doc = to_json(sol);
        doc["kind"] = kind_name(cfg.scenario.kind);
        doc["n_states"] = n;
        doc["p_change_add"] = p.add;
        doc["p_change_remove"] = p.remove;
        write_json(dir / "solve_result.json", doc);
        res.files.push_back((dir / "solve_result.json").string());
    }
    save_model(model, (dir / "model.json").string());
    res.files.push_back((dir / "model.json").string());

    if (!sol.converged) {
        res.ok = false;
        res.messages.push_back("value iteration did not converge within " +
                               std::to_string(cfg.solver.max_iter) + " iterations");
    }
    return res;
}

inline std::vector<double> sweep_list(const ExperimentConfig& cfg, ProcessKind kind) {
    return cfg.sweep_p.empty() ? sweep_probabilities(kind) : cfg.sweep_p;
}

struct SweepRow {
    ProcessKind kind;
    double p_change;
    SolveResult solution;
    double stddev;
};

inline ScenarioSpec spec_at(const ExperimentConfig& cfg, ProcessKind kind, double p) {
    ScenarioSpec spec = cfg.scenario;
    spec.kind = kind;
    spec.p_change = p;
    spec.p_change_add.reset();
    spec.p_change_remove.reset();
    return spec;
}

inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, ProcessKind kind,
                                       CommandResult& res) {
    std::vector<double> ps = sweep_list(cfg, kind);
    if (cfg.include_p_half && std::find(ps.begin(), ps.end(), 0.5) == ps.end()) ps.push_back(0.5);
    std::vector<SweepRow> rows;
    for (double p : ps) {
        const MdpModel model = build_checked(spec_at(cfg, kind, p), cfg.rewards, res);
        SolveResult sol = value_iteration(model, cfg.solver.epsilon, cfg.solver.max_iter);
        if (!sol.converged) {
            res.ok = false;
            res.messages.push_back("value iteration did not converge at p=" + fmt_num(p));
        }
        const double sd = value_stddev(sol.optimal_values);
        rows.push_back({kind, p, std::move(sol), sd});
    }
    return rows;
}

/// Solves every sweep point of each kind; writes V* and its spread per p.
inline CommandResult cmd_sweep(const ExperimentConfig& cfg, const std::vector<ProcessKind>& kinds) {
    check_config(cfg);
    CommandResult res;
    const auto dir = prepare_output(cfg);
    const std::size_t n = cfg.scenario.n_states;

    std::vector<std::string> header{"kind", "p_change"};
    for (std::size_t s = 0; s < n; ++s) header.push_back("V(" + state_name(s) + ")");
    header.insert(header.end(), {"stddev", "iterations", "policy"});
    CsvWriter csv(dir / "fig4_sweep_stddev.csv", header);
    nlohmann::json doc = nlohmann::json::array();
    for (ProcessKind kind : kinds) {
        for (const SweepRow& r : run_sweep(cfg, kind, res)) {
            std::vector<std::string> row{kind_name(kind), fmt_num(r.p_change)};
            for (double v : r.solution.optimal_values) row.push_back(fmt_num(v));
            std::string pol;
            for (std::size_t s = 0; s < n; ++s)
                pol += (s ? " " : "") + state_name(s) + ":" + action_name(r.solution.policy[s]);
            row.insert(row.end(), {fmt_num(r.stddev), std::to_string(r.solution.iterations), pol});
            csv.row(row);
            doc.push_back({{"kind", kind_name(kind)},
                           {"p_change", r.p_change},
                           {"values", r.solution.optimal_values},
                           {"stddev", r.stddev},
                           {"iterations", r.solution.iterations},
                           {"policy", policy_json(r.solution.policy)}});
        }
    }
    res.files.push_back(csv.path().string());
    if (cfg.output.format == OutputFormat::Json) {
        write_json(dir / "sweep_result.json", doc);
        res.files.push_back((dir / "sweep_result.json").string());
    }
    return res;
}

struct ComparePoint {
    ProcessKind kind;
    double p_change;
    Policy policy;
    AggregateStats vi;
    AggregateStats ras;
};

struct CompareData {
    std::vector<ComparePoint> points;
    double curve_p = 0.0;
    TrajectoryStats vi_curve;
    TrajectoryStats ras_curve;
};

inline double default_curve_p(ProcessKind kind) { return kind == ProcessKind::SDR ? 0.1 : 0.8; }

/**
 * Value-iteration policy vs random action selection at every sweep point.
 *
 * Both agents use the same master seed, so run i of each sees the same
 * environment stream. p = 0.5 is never compared.
 */
inline CompareData run_compare(const ExperimentConfig& cfg, ProcessKind kind, CommandResult& res) {
    CompareData data;
    const auto& sim = cfg.simulation;
    auto solve_at = [&](double p) {
        const MdpModel model = build_checked(spec_at(cfg, kind, p), cfg.rewards, res);
        SolveResult sol = value_iteration(model, cfg.solver.epsilon, cfg.solver.max_iter);
        if (!sol.converged) {
            res.ok = false;
            res.messages.push_back("value iteration did not converge at p=" + fmt_num(p));
        }
        return std::pair{model, sol.policy};
    };

    for (double p : sweep_list(cfg, kind)) {
        if (p == 0.5) continue;
        auto [model, policy] = solve_at(p);
        const std::size_t init = initial_state(cfg, model.n_states());
        ComparePoint pt{kind, p, policy, {}, {}};
        pt.vi = monte_carlo(model, FixedPolicyAgent{policy}, sim.runs, sim.steps, init,
                            sim.master_seed, sim.threads);
        pt.ras = monte_carlo(model, RandomActionAgent{}, sim.runs, sim.steps, init,
                             sim.master_seed, sim.threads);
        data.points.push_back(std::move(pt));
    }

    data.curve_p = sim.curve_p.value_or(default_curve_p(kind));
    auto [model, policy] = solve_at(data.curve_p);
    const std::size_t init = initial_state(cfg, model.n_states());
    const auto seed = run_seed(sim.master_seed, 0);
    data.vi_curve = simulate(model, FixedPolicyAgent{policy}, sim.steps, init, seed, true);
    data.ras_curve = simulate(model, RandomActionAgent{}, sim.steps, init, seed, true);
    return data;
}

/// Writes reward curves, core-delta and high-load tables, reward means and
/// the energy summary for each kind.
inline CommandResult cmd_compare(const ExperimentConfig& cfg, const std::vector<ProcessKind>& kinds) {
    check_config(cfg);
    CommandResult res;
    const auto dir = prepare_output(cfg);

    CsvWriter curves(dir / "fig5_reward_curves.csv",
                     {"kind", "p_change", "agent", "step", "cumulative_raw",
                      "cumulative_discounted"});
    const std::vector<std::string> table_header{"kind", "p_change", "vi_mean",
                                                "ras_mean", "vi_std", "ras_std"};
    CsvWriter delta(dir / "fig6_cpu_delta.csv", table_header);
    CsvWriter high(dir / "fig7_high_load_frac.csv", table_header);
    CsvWriter rewards(dir / "reward_summary.csv",
                      {"kind", "p_change", "vi_raw_mean", "ras_raw_mean", "vi_raw_std",
                       "ras_raw_std", "vi_discounted_mean", "ras_discounted_mean",
                       "vi_discounted_std", "ras_discounted_std"});
    CsvWriter energy(dir / "energy_summary.csv",
                     {"kind", "p_change", "vi_mean_delta", "ras_mean_delta", "core_difference",
                      "watts_per_core", "hours", "kwh_per_day"});
    nlohmann::json doc = nlohmann::json::array();

    for (ProcessKind kind : kinds) {
        const CompareData data = run_compare(cfg, kind, res);
        const std::string k = kind_name(kind);
        const std::string cp = fmt_num(data.curve_p);
        for (const auto& [agent, traj] :
             {std::pair{"vi", &data.vi_curve}, std::pair{"ras", &data.ras_curve}})
            for (const auto& c : traj->reward_curve)
                curves.row({k, cp, agent, std::to_string(c.step), fmt_num(c.cumulative_raw),
                            fmt_num(c.cumulative_discounted)});

        for (const ComparePoint& pt : data.points) {
            const std::string p = fmt_num(pt.p_change);
            delta.row({k, p, fmt_num(pt.vi.net_core_delta.mean), fmt_num(pt.ras.net_core_delta.mean),
                       fmt_num(pt.vi.net_core_delta.stddev), fmt_num(pt.ras.net_core_delta.stddev)});
            high.row({k, p, fmt_num(pt.vi.frac_highest_state.mean),
                      fmt_num(pt.ras.frac_highest_state.mean),
                      fmt_num(pt.vi.frac_highest_state.stddev),
                      fmt_num(pt.ras.frac_highest_state.stddev)});
            rewards.row({k, p, fmt_num(pt.vi.raw_reward.mean), fmt_num(pt.ras.raw_reward.mean),
                         fmt_num(pt.vi.raw_reward.stddev), fmt_num(pt.ras.raw_reward.stddev),
                         fmt_num(pt.vi.discounted_reward.mean),
                         fmt_num(pt.ras.discounted_reward.mean),
                         fmt_num(pt.vi.discounted_reward.stddev),
                         fmt_num(pt.ras.discounted_reward.stddev)});
            // positive difference: the value-iteration agent runs fewer cores
            const double diff = pt.ras.net_core_delta.mean - pt.vi.net_core_delta.mean;
            const double kwh = energy_savings(diff, cfg.energy);
            energy.row({k, p, fmt_num(pt.vi.net_core_delta.mean),
                        fmt_num(pt.ras.net_core_delta.mean), fmt_num(diff),
                        fmt_num(cfg.energy.watts_per_core), fmt_num(cfg.energy.hours),
                        fmt_num(kwh)});
            doc.push_back({{"kind", k},
                           {"p_change", pt.p_change},
                           {"policy", policy_json(pt.policy)},
                           {"vi_net_core_delta", {pt.vi.net_core_delta.mean, pt.vi.net_core_delta.stddev}},
                           {"ras_net_core_delta", {pt.ras.net_core_delta.mean, pt.ras.net_core_delta.stddev}},
                           {"vi_frac_highest", {pt.vi.frac_highest_state.mean, pt.vi.frac_highest_state.stddev}},
                           {"ras_frac_highest", {pt.ras.frac_highest_state.mean, pt.ras.frac_highest_state.stddev}},
                           {"core_difference", diff},
                           {"kwh_per_day", kwh}});

            if (cfg.simulation.per_run) {
                const auto stem = "runs_" + k + "_p" + p;
                write_runs_csv(dir / (stem + "_vi.csv"), pt.vi);
                write_runs_csv(dir / (stem + "_ras.csv"), pt.ras);
                res.files.push_back((dir / (stem + "_vi.csv")).string());
                res.files.push_back((dir / (stem + "_ras.csv")).string());
            }
        }
    }
    for (const CsvWriter* w : {&curves, &delta, &high, &rewards, &energy})
        res.files.push_back(w->path().string());
    if (cfg.output.format == OutputFormat::Json) {
        write_json(dir / "compare_result.json", doc);
        res.files.push_back((dir / "compare_result.json").string());
    }
    return res;
}

/// Validates a model document, or the configured scenario when path is empty.
inline CommandResult cmd_validate(const ExperimentConfig& cfg, const std::string& model_path = {}) {
    CommandResult res;
    if (model_path.empty()) {
        check_config(cfg);
        build_checked(cfg.scenario, cfg.rewards, res);
    } else {
        const auto report = validate(load_model(model_path));
        if (!report.ok()) {
            res.ok = false;
            for (const auto& v : report.violations) res.messages.push_back(v.message);
        }
    }
    return res;
}

}  // namespace cpualloc
