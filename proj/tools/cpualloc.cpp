// Command-line driver for the CPU-core allocation experiments.
//
//   cpualloc solve    --kind sdr [--states 4] [--p 0.1]
//   cpualloc sweep    --kind both [--include-p-half]
//   cpualloc compare  --kind sdr --runs 10000 --steps 1000 --seed 42
//   cpualloc validate [--model model.json]
//
// Exit status is 0 on success, 1 on validation failure or non-convergence,
// 2 on usage or input errors.

#include "cpualloc/cpualloc.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Overrides {
    std::string config_path;
    std::string kind;
    std::optional<std::size_t> states;
    std::vector<double> p;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> steps;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
    std::string format;
    bool include_p_half = false;
    bool per_run = false;
    std::string model_path;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration document")->check(CLI::ExistingFile);
    cmd->add_option("--kind", o.kind, "process kind")->check(CLI::IsMember({"sdr", "sdn", "both"}));
    cmd->add_option("--states", o.states, "number of load levels (>= 3)");
    cmd->add_option("--p", o.p, "change probability (repeatable)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--format", o.format, "summary format")->check(CLI::IsMember({"csv", "json"}));
}

void add_simulation(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--runs", o.runs, "Monte Carlo runs per agent and p");
    cmd->add_option("--steps", o.steps, "decisions per trajectory");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    cmd->add_flag("--per-run", o.per_run, "also write one CSV row per run");
}

cpualloc::ExperimentConfig make_config(const Overrides& o, bool single_p) {
    using namespace cpualloc;
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (!o.kind.empty() && o.kind != "both") cfg.scenario.kind = parse_kind(o.kind);
    if (o.states) cfg.scenario.n_states = *o.states;
    if (!o.p.empty()) {
        if (single_p) {
            if (o.p.size() != 1) throw std::invalid_argument("solve takes a single --p");
            cfg.scenario.p_change = o.p.front();
            cfg.scenario.p_change_add.reset();
            cfg.scenario.p_change_remove.reset();
        } else {
            cfg.sweep_p = o.p;
        }
    }
    if (o.runs) cfg.simulation.runs = *o.runs;
    if (o.steps) cfg.simulation.steps = *o.steps;
    if (o.seed) cfg.simulation.master_seed = *o.seed;
    if (o.threads) cfg.simulation.threads = *o.threads;
    if (o.per_run) cfg.simulation.per_run = true;
    if (!o.out.empty()) cfg.output.directory = o.out;
    if (o.format == "csv") cfg.output.format = OutputFormat::Csv;
    if (o.format == "json") cfg.output.format = OutputFormat::Json;
    if (o.include_p_half) cfg.include_p_half = true;
    return cfg;
}

std::vector<cpualloc::ProcessKind> kinds_of(const Overrides& o, const cpualloc::ExperimentConfig& cfg) {
    if (o.kind == "both") return {cpualloc::ProcessKind::SDR, cpualloc::ProcessKind::SDN};
    return {cfg.scenario.kind};
}

int report(const cpualloc::CommandResult& res) {
    for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
    for (const auto& m : res.messages) std::cerr << "error: " << m << '\n';
    return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic CPU-core allocation as a finite MDP: solve, sweep, compare, validate"};
    app.require_subcommand(1);

    Overrides o;
    auto* solve = app.add_subcommand("solve", "value iteration on one scenario");
    auto* sweep = app.add_subcommand("sweep", "solve every change probability of the sweep");
    auto* compare = app.add_subcommand("compare", "value-iteration policy vs random action selection");
    auto* validate = app.add_subcommand("validate", "check a scenario or model document");
    for (auto* cmd : {solve, sweep, compare, validate}) add_common(cmd, o);
    add_simulation(compare, o);
    sweep->add_flag("--include-p-half", o.include_p_half, "add the degenerate p = 0.5 row");
    validate->add_option("--model", o.model_path, "model document to validate")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace cpualloc;
        if (solve->parsed()) {
            if (o.kind == "both") throw std::invalid_argument("solve takes --kind sdr or sdn");
            return report(cmd_solve(make_config(o, true)));
        }
        if (sweep->parsed()) {
            const auto cfg = make_config(o, false);
            return report(cmd_sweep(cfg, kinds_of(o, cfg)));
        }
        if (compare->parsed()) {
            const auto cfg = make_config(o, false);
            return report(cmd_compare(cfg, kinds_of(o, cfg)));
        }
        if (validate->parsed()) {
            const auto res = cmd_validate(make_config(o, true), o.model_path);
            if (res.ok) std::cout << "ok\n";
            return report(res);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
