#pragma once

#include "cpualloc/mdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cpualloc {

inline constexpr double default_epsilon = 1e-3;
inline constexpr long default_max_iter = 10'000;

/// Q(s,a) defined on allowed pairs only.
class QTable {
public:
    explicit QTable(std::size_t n_states) : q_(n_states) {}

    std::size_t n_states() const noexcept { return q_.size(); }

    bool defined(std::size_t s, Action a) const { return q_.at(s)[index(a)].has_value(); }

    double at(std::size_t s, Action a) const {
        const auto& v = q_.at(s)[index(a)];
        if (!v) throw MdpError("Q undefined at (" + state_name(s) + "," + action_name(a) + ")");
        return *v;
    }

    void set(std::size_t s, Action a, double value) { q_.at(s)[index(a)] = value; }

    /// Best allowed action at s; ties go to the lowest action index.
    std::pair<Action, double> best(std::size_t s) const {
        std::optional<std::pair<Action, double>> out;
        for (Action a : all_actions) {
            const auto& v = q_.at(s)[index(a)];
            if (v && (!out || *v > out->second)) out = {a, *v};
        }
        if (!out) throw MdpError("no allowed action at " + state_name(s));
        return *out;
    }

private:
    std::vector<std::array<std::optional<double>, action_count>> q_;
};

/// q(s,a) = sum_s' P(s'|s,a) (r(s,a,s') + gamma v(s')) on every allowed pair.
inline QTable q_values(const MdpModel& model, const ValueVector& v) {
    if (v.size() != model.n_states())
        throw std::invalid_argument("value vector length does not match state count");
    QTable q(model.n_states());
    const double gamma = model.gamma();
    for (std::size_t s = 0; s < model.n_states(); ++s)
        for (Action a : all_actions) {
            if (!model.allowed(s, a)) continue;
            double total = 0.0;
            for (const Outcome& o : model.outcomes(s, a))
                total += o.probability * (o.reward + gamma * v[o.next]);
            q.set(s, a, total);
        }
    return q;
}

/// Argmax over allowed actions of q_values(model, v), lowest index on ties.
inline Policy greedy_policy(const MdpModel& model, const ValueVector& v) {
    const QTable q = q_values(model, v);
    Policy policy(model.n_states());
    for (std::size_t s = 0; s < model.n_states(); ++s) policy[s] = q.best(s).first;
    return policy;
}

inline double max_abs_diff(const ValueVector& a, const ValueVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct SolveResult {
    ValueVector optimal_values;
    Policy policy;
    /// history[0] is V_0 = 0, history[j] is V_j; size is iterations + 1.
    std::vector<ValueVector> history;
    long iterations = 0;
    bool converged = false;
    double epsilon = default_epsilon;
};

/**
 * Synchronous (Jacobi) value iteration from V_0 = 0.
 *
 * Each sweep computes V_{j+1}(s) = max_a Q_j(s,a) entirely from V_j. The
 * iteration stops after the first sweep whose max-norm change is below
 * epsilon, or after max_iter sweeps with converged = false.
 */
inline SolveResult value_iteration(const MdpModel& model, double epsilon = default_epsilon,
                                   long max_iter = default_max_iter) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");

    SolveResult result;
    result.epsilon = epsilon;
    result.history.emplace_back(model.n_states(), 0.0);

    for (long j = 0; j < max_iter; ++j) {
        const ValueVector& current = result.history.back();
        const QTable q = q_values(model, current);
        ValueVector next(model.n_states());
        for (std::size_t s = 0; s < model.n_states(); ++s) next[s] = q.best(s).second;

        const double change = max_abs_diff(next, current);
        result.history.push_back(std::move(next));
        result.iterations = j + 1;
        if (change < epsilon) {
            result.converged = true;
            break;
        }
    }
    result.optimal_values = result.history.back();
    result.policy = greedy_policy(model, result.optimal_values);
    return result;
}

namespace detail {

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14) throw std::runtime_error("singular linear system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

}  // namespace detail

/// Exact value of a fixed policy: solves (I - gamma P_pi) V = R_pi.
inline ValueVector policy_value_exact(const MdpModel& model, const Policy& policy) {
    check_policy(model, policy);
    const std::size_t n = model.n_states();
    const double gamma = model.gamma();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        a[s][s] = 1.0;
        for (const Outcome& o : model.outcomes(s, policy[s])) {
            a[s][o.next] -= gamma * o.probability;
            b[s] += o.probability * o.reward;
        }
    }
    return detail::solve_dense(std::move(a), std::move(b));
}

inline constexpr double max_enumerated_policies = 1e6;

struct BruteForceResult {
    Policy policy;
    ValueVector values;
};

/**
 * Evaluates every deterministic stationary policy exactly and returns the
 * one whose value dominates all others componentwise. Among equal-valued
 * maximizers the lexicographically smallest policy (state 0 most
 * significant, action index order) wins.
 *
 * Throws if the policy space exceeds max_enumerated_policies or if no
 * policy dominates (possible only for malformed models).
 */
inline BruteForceResult brute_force_optimal(const MdpModel& model) {
    const std::size_t n = model.n_states();
    std::vector<std::vector<Action>> choices(n);
    double space = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
        choices[s] = model.allowed_actions(s);
        if (choices[s].empty()) throw MdpError("no allowed action at " + state_name(s));
        space *= static_cast<double>(choices[s].size());
    }
    if (space > max_enumerated_policies)
        throw std::runtime_error("policy space too large to enumerate");

    auto tol = [](double v) { return 1e-9 * (1.0 + std::abs(v)); };

    std::vector<std::size_t> digit(n, 0);
    std::vector<ValueVector> all_values;
    std::optional<BruteForceResult> best;
    Policy policy(n);
    while (true) {
        for (std::size_t s = 0; s < n; ++s) policy[s] = choices[s][digit[s]];
        ValueVector v = policy_value_exact(model, policy);

        bool improves = !best;
        if (best) {
            bool all_ge = true;
            bool some_gt = false;
            for (std::size_t s = 0; s < n; ++s) {
                if (v[s] < best->values[s] - tol(best->values[s])) all_ge = false;
                if (v[s] > best->values[s] + tol(best->values[s])) some_gt = true;
            }
            improves = all_ge && some_gt;
        }
        if (improves) best = BruteForceResult{policy, v};
        all_values.push_back(std::move(v));

        // odometer with the last state as least significant digit
        bool wrapped = true;
        for (std::size_t pos = n; pos-- > 0;) {
            if (++digit[pos] < choices[pos].size()) {
                wrapped = false;
                break;
            }
            digit[pos] = 0;
        }
        if (wrapped) break;
    }

    for (const ValueVector& v : all_values)
        for (std::size_t s = 0; s < n; ++s)
            if (v[s] > best->values[s] + tol(best->values[s]))
                throw std::runtime_error("no policy dominates componentwise; model is malformed");
    return *best;
}

}  // namespace cpualloc
