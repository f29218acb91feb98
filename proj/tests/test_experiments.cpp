#include "cpualloc/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cpualloc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("cpualloc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig cfg;
    cfg.output.directory = dir.string();
    cfg.simulation.runs = 200;
    cfg.simulation.steps = 300;
    return cfg;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CPUALLOC_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
    const auto cfg = config_from_json(nlohmann::json::parse(R"({
        "scenario": {"kind": "sdn", "n_states": 4, "p_change": 0.3, "p_change_add": 0.6,
                     "rewards": {"keep_highest": -8}, "sweep_p": [0.2, 0.4]},
        "solver": {"epsilon": 1e-4},
        "simulation": {"runs": 50, "init_state": 0, "master_seed": 7},
        "energy": {"watts_per_core": 100},
        "output": {"directory": "x", "format": "json"}})"));
    EXPECT_EQ(cfg.scenario.kind, ProcessKind::SDN);
    EXPECT_EQ(cfg.scenario.n_states, 4u);
    EXPECT_EQ(cfg.scenario.resolved().add, 0.6);
    EXPECT_EQ(cfg.scenario.resolved().remove, 0.3);
    EXPECT_EQ(cfg.rewards.keep_highest, -8);
    EXPECT_EQ(cfg.rewards.keep_lowest, -3);
    EXPECT_EQ(cfg.sweep_p, (std::vector<double>{0.2, 0.4}));
    EXPECT_EQ(cfg.solver.epsilon, 1e-4);
    EXPECT_EQ(cfg.solver.max_iter, 10000);
    EXPECT_EQ(cfg.simulation.runs, 50u);
    EXPECT_EQ(cfg.simulation.steps, 1000u);
    EXPECT_EQ(cfg.simulation.init_state, 0u);
    EXPECT_EQ(cfg.simulation.master_seed, 7u);
    EXPECT_EQ(cfg.energy.watts_per_core, 100);
    EXPECT_EQ(cfg.energy.hours, 24);
    EXPECT_EQ(cfg.output.format, OutputFormat::Json);

    const auto defaults = config_from_json(nlohmann::json::object());
    EXPECT_EQ(defaults.scenario.kind, ProcessKind::SDR);
    EXPECT_FALSE(defaults.scenario.p_change.has_value());
    EXPECT_EQ(initial_state(defaults, 3), 1u);
    EXPECT_EQ(initial_state(defaults, 4), 2u);
}

TEST(Config, RoundTripThroughDocument) {
    ExperimentConfig cfg;
    cfg.scenario.kind = ProcessKind::SDN;
    cfg.scenario.p_change_remove = 0.65;
    cfg.rewards.good_move = 7;
    cfg.simulation.curve_p = 0.3;
    cfg.sweep_p = {0.55};
    const auto again = config_from_json(to_json(cfg));
    EXPECT_EQ(to_json(again), to_json(cfg));
    EXPECT_EQ(to_json(cfg)["scenario"]["p_change"], "table-default");
}

TEST(Config, RejectsBadValues) {
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"scenario": {"kind": "x"}})")),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"scenario": {"p_change": "half"}})")),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"output": {"format": "xml"}})")),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"solver": {"epsilon": "tiny"}})")),
                 std::invalid_argument);

    ExperimentConfig cfg;
    cfg.simulation.init_state = 3;
    EXPECT_THROW(check_config(cfg), std::invalid_argument);
    cfg = {};
    cfg.energy.hours = 0;
    EXPECT_THROW(check_config(cfg), std::invalid_argument);
    cfg = {};
    cfg.sweep_p = {1.0};
    EXPECT_THROW(check_config(cfg), std::invalid_argument);
}

TEST(Config, ShippedDefaultLoads) {
    const auto cfg = load_config(CPUALLOC_DEFAULT_CONFIG);
    EXPECT_NO_THROW(check_config(cfg));
    EXPECT_EQ(cfg.simulation.runs, 10000u);
    EXPECT_EQ(cfg.simulation.steps, 1000u);
    EXPECT_EQ(cfg.simulation.master_seed, 42u);
    EXPECT_EQ(cfg.solver.epsilon, 1e-3);
}

TEST(Solve, WritesConvergenceHistoryAndSummary) {
    const auto dir = scratch("solve");
    auto cfg = small_config(dir);
    const auto res = cmd_solve(cfg);
    EXPECT_TRUE(res.ok);

    const auto history = read_csv(dir / "fig2_sdr_convergence.csv");
    ASSERT_GE(history.size(), 2u);
    EXPECT_EQ(history[0], (std::vector<std::string>{"iteration", "V(s0)", "V(s1)", "V(s2)"}));
    EXPECT_EQ(history[1], (std::vector<std::string>{"0", "0", "0", "0"}));
    EXPECT_EQ(history.size(), 1u + 1u + 67u);

    const auto summary = read_csv(dir / "solve_summary.csv");
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[1][6], "67");
    EXPECT_EQ(summary[1][7], "true");
    EXPECT_EQ(summary[1][8], "s0:a2 s1:a2 s2:a1");

    const auto policy = read_csv(dir / "solve_policy.csv");
    ASSERT_EQ(policy.size(), 4u);
    EXPECT_EQ(policy[2][1], "a2");
    EXPECT_TRUE(fs::exists(dir / "model.json"));
    EXPECT_EQ(load_model((dir / "model.json").string()), build_reference_model(ProcessKind::SDR));
}

TEST(Solve, JsonFormatAndSdnFileName) {
    const auto dir = scratch("solve_json");
    auto cfg = small_config(dir);
    cfg.scenario.kind = ProcessKind::SDN;
    cfg.output.format = OutputFormat::Json;
    EXPECT_TRUE(cmd_solve(cfg).ok);
    EXPECT_TRUE(fs::exists(dir / "fig3_sdn_convergence.csv"));
    const auto doc = nlohmann::json::parse(slurp(dir / "solve_result.json"));
    EXPECT_EQ(doc["policy"], nlohmann::json({{"s0", "a2"}, {"s1", "a1"}, {"s2", "a1"}}));
    EXPECT_EQ(doc["iterations"], 57);
    EXPECT_EQ(doc["converged"], true);
    EXPECT_EQ(doc["history"].size(), 58u);
}

TEST(Solve, NonConvergenceFlagsFailure) {
    const auto dir = scratch("solve_nc");
    auto cfg = small_config(dir);
    cfg.solver.max_iter = 3;
    const auto res = cmd_solve(cfg);
    EXPECT_FALSE(res.ok);
    ASSERT_FALSE(res.messages.empty());
}

TEST(Sweep, RowsAndHalfProbability) {
    const auto dir = scratch("sweep");
    auto cfg = small_config(dir);
    cfg.include_p_half = true;
    EXPECT_TRUE(cmd_sweep(cfg, {ProcessKind::SDR, ProcessKind::SDN}).ok);
    const auto rows = read_csv(dir / "fig4_sweep_stddev.csv");
    ASSERT_EQ(rows.size(), 1u + 12u);
    EXPECT_EQ(rows[0][5], "stddev");
    int half_rows = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double sd = std::stod(rows[i][5]);
        if (rows[i][1] == "0.5") {
            ++half_rows;
            EXPECT_EQ(sd, 0.0);
        } else {
            EXPECT_GT(sd, 0.0);
        }
    }
    EXPECT_EQ(half_rows, 2);
}

TEST(Compare, FilesAndDeterminism) {
    const auto a = scratch("compare_a");
    const auto b = scratch("compare_b");
    auto cfg = small_config(a);
    cfg.simulation.per_run = true;
    cfg.sweep_p = {0.1, 0.5};
    cfg.output.format = OutputFormat::Json;
    EXPECT_TRUE(cmd_compare(cfg, {ProcessKind::SDR}).ok);
    cfg.output.directory = b.string();
    cfg.simulation.threads = 3;
    EXPECT_TRUE(cmd_compare(cfg, {ProcessKind::SDR}).ok);

    for (const char* f : {"fig5_reward_curves.csv", "fig6_cpu_delta.csv", "fig7_high_load_frac.csv",
                          "reward_summary.csv", "energy_summary.csv", "compare_result.json",
                          "runs_sdr_p0.1_vi.csv", "runs_sdr_p0.1_ras.csv"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    // p = 0.5 is never compared
    EXPECT_EQ(read_csv(a / "fig6_cpu_delta.csv").size(), 2u);
    const auto curves = read_csv(a / "fig5_reward_curves.csv");
    EXPECT_EQ(curves.size(), 1u + 2u * 300u);
    EXPECT_EQ(curves[1][2], "vi");
    EXPECT_EQ(curves[1][1], "0.1");

    const auto runs = read_csv(a / "runs_sdr_p0.1_vi.csv");
    ASSERT_EQ(runs.size(), 1u + 200u + 1u);
    EXPECT_EQ(runs[0], (std::vector<std::string>{"run_id", "discounted_reward", "raw_reward",
                                                  "net_core_delta", "frac_highest_state"}));
    EXPECT_EQ(runs.back()[0], "mean");
}

TEST(Compare, EnergyColumnUsesConfiguredModel) {
    const auto dir = scratch("compare_energy");
    auto cfg = small_config(dir);
    cfg.sweep_p = {0.01};
    cfg.energy = {100, 10};
    EXPECT_TRUE(cmd_compare(cfg, {ProcessKind::SDR}).ok);
    const auto rows = read_csv(dir / "energy_summary.csv");
    ASSERT_EQ(rows.size(), 2u);
    const double diff = std::stod(rows[1][4]);
    EXPECT_NEAR(std::stod(rows[1][7]), diff * 100 * 10 / 1000, 1e-6 * (1 + std::abs(diff)));
    EXPECT_NEAR(diff, std::stod(rows[1][3]) - std::stod(rows[1][2]), 1e-6);
}

TEST(Validate, ScenarioAndModelDocument) {
    ExperimentConfig cfg;
    EXPECT_TRUE(cmd_validate(cfg).ok);

    const auto dir = scratch("validate");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << R"({"n_states": 2, "gamma": 0.9, "transitions": [
        {"s": 0, "a": "a0", "s'": 0, "p": 0.9, "r": -3},
        {"s": 1, "a": "a0", "s'": 1, "p": 1.0, "r": -5},
        {"s": 1, "a": "a2", "s'": 1, "p": 1.0, "r": 5}]})";
    const auto res = cmd_validate(cfg, (dir / "bad.json").string());
    EXPECT_FALSE(res.ok);
    EXPECT_EQ(res.messages.size(), 2u);
}

TEST(Cli, ExitStatusAndOutputs) {
    const auto dir = scratch("cli");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_cli("solve --kind sdr" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "fig2_sdr_convergence.csv"));
    EXPECT_EQ(run_cli("solve --kind sdn --states 4 --format json" + out), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "solve_result.json"))["n_states"], 4);
    EXPECT_EQ(run_cli("sweep --kind both --include-p-half" + out), 0);
    EXPECT_EQ(read_csv(dir / "fig4_sweep_stddev.csv").size(), 13u);
    EXPECT_EQ(run_cli("compare --kind sdn --p 0.7 --p 0.9 --runs 50 --steps 100 --seed 3" + out), 0);
    EXPECT_EQ(read_csv(dir / "fig6_cpu_delta.csv").size(), 3u);
    EXPECT_EQ(run_cli("validate --kind sdr"), 0);

    std::ofstream(dir / "bad.json") << R"({"n_states": 1, "gamma": 0.9, "transitions": [
        {"s": 0, "a": "a0", "s'": 0, "p": 0.5, "r": 0}]})";
    EXPECT_EQ(run_cli("validate --model " + (dir / "bad.json").string()), 1);

    // unconverged solve
    std::ofstream(dir / "cfg.json") << R"({"solver": {"max_iter": 2}})";
    EXPECT_EQ(run_cli("solve --config " + (dir / "cfg.json").string() + out), 1);

    // usage and input errors
    EXPECT_NE(run_cli("solve --kind cran"), 0);
    EXPECT_EQ(run_cli("solve --p 0 --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("solve --states 2 --out " + dir.string()), 2);
}
