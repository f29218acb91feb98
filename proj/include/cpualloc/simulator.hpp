#pragma once

#include "cpualloc/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

namespace cpualloc {

// *******************************************************
// Agents
// *******************************************************

/// Plays a fixed deterministic policy; consumes no randomness.
struct FixedPolicyAgent {
    Policy policy;
};

/// Random-action-selection baseline: RemoveCore at the lowest level, AddCore
/// at the highest, and a fair coin between the two everywhere else. Never
/// plays Keep.
struct RandomActionAgent {};

using Agent = std::variant<FixedPolicyAgent, RandomActionAgent>;

/// Picks the agent's action at state s. Only RandomActionAgent draws from rng.
inline Action choose_action(const Agent& agent, const MdpModel& model, std::size_t s,
                            std::mt19937_64& rng) {
    if (const auto* fixed = std::get_if<FixedPolicyAgent>(&agent)) return fixed->policy.at(s);
    const std::size_t top = model.n_states() - 1;
    if (s == 0) return Action::RemoveCore;
    if (s == top) return Action::AddCore;
    return uniform01(rng) < 0.5 ? Action::AddCore : Action::RemoveCore;
}

// *******************************************************
// Seeds
// *******************************************************

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Environment seed of run i: splitmix64(master + i * golden gamma).
/// Two agents simulated with the same master seed see the same per-run
/// environment streams.
inline std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t run) {
    return splitmix64(master_seed + run * 0x9E3779B97F4A7C15ULL);
}

/// Agent-side stream, kept apart from the environment stream so random
/// agents do not shift the transition draws.
inline std::uint64_t agent_seed(std::uint64_t env_seed) {
    return splitmix64(env_seed ^ 0xD1B54A32D192ED03ULL);
}

// *******************************************************
// Trajectories
// *******************************************************

struct CurvePoint {
    std::size_t step;
    double cumulative_raw;
    double cumulative_discounted;
};

struct TrajectoryStats {
    std::size_t steps = 0;
    double discounted_reward = 0.0;
    double raw_reward = 0.0;
    long net_core_delta = 0;
    std::size_t cores_added = 0;
    std::size_t cores_removed = 0;
    /// State occupied when each action was chosen.
    std::vector<std::size_t> time_in_state;
    /// Filled only when requested.
    std::vector<CurvePoint> reward_curve;

    double fraction_in_highest() const {
        return steps ? static_cast<double>(time_in_state.back()) / static_cast<double>(steps)
                     : 0.0;
    }
};

/**
 * Runs one trajectory of `steps` decisions from `init`.
 *
 * Step i (from 1) contributes gamma^(i-1) r_i to discounted_reward and r_i
 * to raw_reward. The result is a pure function of the inputs and seed.
 */
inline TrajectoryStats simulate(const MdpModel& model, const Agent& agent, std::size_t steps,
                                std::size_t init, std::uint64_t seed, bool record_curve = false) {
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    if (init >= model.n_states())
        throw std::invalid_argument("initial state " + state_name(init) + " out of range");
    if (const auto* fixed = std::get_if<FixedPolicyAgent>(&agent))
        if (fixed->policy.size() != model.n_states())
            throw std::invalid_argument("policy does not cover every state");

    std::mt19937_64 env_rng(seed);
    std::mt19937_64 agent_rng(agent_seed(seed));

    TrajectoryStats t;
    t.steps = steps;
    t.time_in_state.assign(model.n_states(), 0);
    if (record_curve) t.reward_curve.reserve(steps);

    const double gamma = model.gamma();
    double weight = 1.0;
    std::size_t s = init;
    for (std::size_t i = 1; i <= steps; ++i) {
        const Action a = choose_action(agent, model, s, agent_rng);
        if (!model.allowed(s, a))
            throw MdpError("agent chose disallowed action " + action_name(a) + " at " +
                           state_name(s));
        ++t.time_in_state[s];
        if (a == Action::AddCore) ++t.cores_added;
        if (a == Action::RemoveCore) ++t.cores_removed;

        const Sample next = sample_transition(model, s, a, env_rng);
        t.raw_reward += next.reward;
        t.discounted_reward += weight * next.reward;
        weight *= gamma;
        if (record_curve) t.reward_curve.push_back({i, t.raw_reward, t.discounted_reward});
        s = next.next;
    }
    t.net_core_delta =
        static_cast<long>(t.cores_added) - static_cast<long>(t.cores_removed);
    return t;
}

// *******************************************************
// Monte Carlo aggregation
// *******************************************************

struct Summary {
    double mean = 0.0;
    /// sample standard deviation; 0 for a single run
    double stddev = 0.0;
};

struct RunRecord {
    std::size_t run_id;
    double discounted_reward;
    double raw_reward;
    long net_core_delta;
    double frac_highest_state;
};

struct AggregateStats {
    std::size_t runs = 0;
    Summary discounted_reward;
    Summary raw_reward;
    Summary net_core_delta;
    Summary frac_highest_state;
    std::vector<RunRecord> per_run;
};

template <class Field>
Summary summarize(const std::vector<RunRecord>& rows, Field field) {
    Summary out;
    if (rows.empty()) return out;
    double sum = 0.0;
    for (const auto& r : rows) sum += static_cast<double>(field(r));
    out.mean = sum / static_cast<double>(rows.size());
    if (rows.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = static_cast<double>(field(r)) - out.mean;
            ss += d * d;
        }
        out.stddev = std::sqrt(ss / static_cast<double>(rows.size() - 1));
    }
    return out;
}

/**
 * Runs independent trajectories, optionally on several threads.
 *
 * Run i uses run_seed(master_seed, i). Per-run records are reduced in run
 * order after all workers finish, so the aggregate does not depend on the
 * thread count. threads == 0 uses the hardware concurrency.
 */
inline AggregateStats monte_carlo(const MdpModel& model, const Agent& agent, std::size_t runs,
                                  std::size_t steps, std::size_t init, std::uint64_t master_seed,
                                  unsigned threads = 0) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));

    std::vector<RunRecord> rows(runs);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto t = simulate(model, agent, steps, init, run_seed(master_seed, i));
            rows[i] = {i, t.discounted_reward, t.raw_reward, t.net_core_delta,
                       t.fraction_in_highest()};
        }
    };

    if (threads == 1) {
        work(0, runs);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        const std::size_t chunk = (runs + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(runs, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    AggregateStats agg;
    agg.runs = runs;
    agg.discounted_reward = summarize(rows, [](const RunRecord& r) { return r.discounted_reward; });
    agg.raw_reward = summarize(rows, [](const RunRecord& r) { return r.raw_reward; });
    agg.net_core_delta = summarize(rows, [](const RunRecord& r) { return r.net_core_delta; });
    agg.frac_highest_state =
        summarize(rows, [](const RunRecord& r) { return r.frac_highest_state; });
    agg.per_run = std::move(rows);
    return agg;
}

// *******************************************************
// Energy and value spread
// *******************************************************

struct EnergyModel {
    double watts_per_core = 80.0;
    double hours = 24.0;
};

/// kWh saved over `hours` by running `core_difference` fewer cores.
inline double energy_savings(double core_difference, const EnergyModel& model = {}) {
    if (!(model.watts_per_core > 0.0) || !(model.hours > 0.0))
        throw std::invalid_argument("energy model needs positive watts and hours");
    return core_difference * model.watts_per_core * model.hours / 1000.0;
}

/// Population standard deviation of the state values.
inline double value_stddev(const ValueVector& v) {
    if (v.size() < 2) throw std::invalid_argument("value spread needs at least two states");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace cpualloc
