#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpualloc {

/// Core-allocation actions. The numeric value is the action index used on
/// disk ("a0", "a1", "a2") and for tie-breaking.
enum class Action : std::uint8_t { Keep = 0, AddCore = 1, RemoveCore = 2 };

inline constexpr std::size_t action_count = 3;
inline constexpr std::array<Action, action_count> all_actions{Action::Keep, Action::AddCore,
                                                               Action::RemoveCore};

constexpr std::size_t index(Action a) noexcept { return static_cast<std::size_t>(a); }

inline std::string action_name(Action a) { return "a" + std::to_string(index(a)); }

inline Action parse_action(std::string_view name) {
    if (name == "a0") return Action::Keep;
    if (name == "a1") return Action::AddCore;
    if (name == "a2") return Action::RemoveCore;
    throw std::invalid_argument("unknown action name '" + std::string(name) + "'");
}

inline std::string state_name(std::size_t s) { return "s" + std::to_string(s); }

/// Raised on queries that the model does not define (disallowed action,
/// unreachable transition, out-of-range state).
class MdpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One reachable successor of a state-action pair.
struct Outcome {
    std::size_t next;
    double probability;
    double reward;
};

using ValueVector = std::vector<double>;

/// Deterministic stationary policy: one action per state.
using Policy = std::vector<Action>;

/**
 * Finite MDP over load-ordered states (index 0 = lowest CPU load) with three core-allocation actions.
 *
 * Only allowed (state, action) pairs carry a transition row, and each row
 * stores only outcomes with positive probability. The model is immutable
 * once built; use MdpModel::Builder to assemble one. Builders do not check
 * stochasticity, see validate() for that.
 */
class MdpModel {
public:
    class Builder;

    std::size_t n_states() const noexcept { return n_states_; }
    double gamma() const noexcept { return gamma_; }

    bool allowed(std::size_t s, Action a) const {
        check_state(s);
        return rows_[s * action_count + index(a)].has_value();
    }

    std::vector<Action> allowed_actions(std::size_t s) const {
        std::vector<Action> out;
        for (Action a : all_actions)
            if (allowed(s, a)) out.push_back(a);
        return out;
    }

    /// Outcomes of (s, a) sorted by ascending next-state index.
    const std::vector<Outcome>& outcomes(std::size_t s, Action a) const {
        check_state(s);
        const auto& row = rows_[s * action_count + index(a)];
        if (!row)
            throw MdpError("action " + action_name(a) + " is not allowed at " + state_name(s));
        return *row;
    }

    double probability(std::size_t s, Action a, std::size_t next) const {
        check_state(next);
        for (const Outcome& o : outcomes(s, a))
            if (o.next == next) return o.probability;
        return 0.0;
    }

    /// Reward of a reachable transition; unreachable transitions have none.
    double reward(std::size_t s, Action a, std::size_t next) const {
        check_state(next);
        for (const Outcome& o : outcomes(s, a))
            if (o.next == next) return o.reward;
        throw MdpError("no reward defined for unreachable transition (" + state_name(s) + ", " +
                       action_name(a) + ", " + state_name(next) + ")");
    }

    friend bool operator==(const MdpModel& a, const MdpModel& b) {
        if (a.n_states_ != b.n_states_ || a.gamma_ != b.gamma_) return false;
        for (std::size_t i = 0; i < a.rows_.size(); ++i) {
            const auto& x = a.rows_[i];
            const auto& y = b.rows_[i];
            if (x.has_value() != y.has_value()) return false;
            if (!x) continue;
            if (x->size() != y->size()) return false;
            for (std::size_t k = 0; k < x->size(); ++k) {
                const Outcome& p = (*x)[k];
                const Outcome& q = (*y)[k];
                if (p.next != q.next || p.probability != q.probability || p.reward != q.reward)
                    return false;
            }
        }
        return true;
    }

private:
    MdpModel(std::size_t n, double gamma) : n_states_(n), gamma_(gamma), rows_(n * action_count) {}

    void check_state(std::size_t s) const {
        if (s >= n_states_)
            throw MdpError("state index " + std::to_string(s) + " out of range (n_states = " +
                           std::to_string(n_states_) + ")");
    }

    std::size_t n_states_;
    double gamma_;
    std::vector<std::optional<std::vector<Outcome>>> rows_;
};

class MdpModel::Builder {
public:
    Builder(std::size_t n_states, double gamma) : model_(n_states, gamma) {
        if (n_states == 0) throw std::invalid_argument("an MDP needs at least one state");
    }

    /// Marks (s, a) allowed with an empty row.
    Builder& allow(std::size_t s, Action a) {
        model_.check_state(s);
        auto& row = model_.rows_[s * action_count + index(a)];
        if (!row) row.emplace();
        return *this;
    }

    /// Adds P(next|s,a) = p with reward r and marks (s, a) allowed.
    /// Zero-probability records are dropped: they carry no reward.
    Builder& transition(std::size_t s, Action a, std::size_t next, double p, double r) {
        model_.check_state(next);
        allow(s, a);
        if (p == 0.0) return *this;
        auto& row = *model_.rows_[s * action_count + index(a)];
        auto pos = std::lower_bound(row.begin(), row.end(), next,
                                    [](const Outcome& o, std::size_t n) { return o.next < n; });
        if (pos != row.end() && pos->next == next)
            throw std::invalid_argument("duplicate transition (" + state_name(s) + ", " +
                                        action_name(a) + ", " + state_name(next) + ")");
        row.insert(pos, Outcome{next, p, r});
        return *this;
    }

    MdpModel build() const { return model_; }

private:
    MdpModel model_;
};

// *******************************************************
// Validation
// *******************************************************

inline constexpr double row_sum_tolerance = 1e-9;

struct Violation {
    std::optional<std::size_t> state;
    std::optional<Action> action;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    std::string to_string() const {
        std::ostringstream os;
        for (const auto& v : violations) os << v.message << '\n';
        return os.str();
    }
};

/// Checks every model invariant and reports all violations; never throws.
inline ValidationReport validate(const MdpModel& model) {
    ValidationReport report;
    auto add = [&](std::optional<std::size_t> s, std::optional<Action> a, std::string msg) {
        report.violations.push_back({s, a, std::move(msg)});
    };
    auto at = [](std::size_t s, Action a) {
        return "(" + state_name(s) + "," + action_name(a) + ")";
    };

    const double gamma = model.gamma();
    if (!(gamma > 0.0 && gamma < 1.0))
        add(std::nullopt, std::nullopt, "discount factor outside (0,1)");

    const std::size_t n = model.n_states();
    for (std::size_t s = 0; s < n; ++s) {
        bool any = false;
        for (Action a : all_actions) {
            if (!model.allowed(s, a)) continue;
            any = true;
            double sum = 0.0;
            for (const Outcome& o : model.outcomes(s, a)) {
                if (!(o.probability >= 0.0 && o.probability <= 1.0))
                    add(s, a, "probability outside [0,1] at " + at(s, a) + " -> " +
                                  state_name(o.next));
                if (!std::isfinite(o.reward))
                    add(s, a, "non-finite reward at " + at(s, a) + " -> " + state_name(o.next));
                sum += o.probability;
            }
            if (!(std::abs(sum - 1.0) <= row_sum_tolerance)) {
                std::ostringstream os;
                os.precision(12);
                os << "row sum ≠ 1 at " << at(s, a) << " (sum = " << sum << ")";
                add(s, a, os.str());
            }
        }
        if (!any) add(s, std::nullopt, "no allowed action at " + state_name(s));
    }
    if (model.allowed(n - 1, Action::RemoveCore))
        add(n - 1, Action::RemoveCore, "RemoveCore allowed at highest state " + state_name(n - 1));
    return report;
}

// *******************************************************
// Primitive queries
// *******************************************************

/// Expected immediate reward: sum over s' of P(s'|s,a) r(s,a,s').
inline double expected_reward(const MdpModel& model, std::size_t s, Action a) {
    double total = 0.0;
    for (const Outcome& o : model.outcomes(s, a)) total += o.probability * o.reward;
    return total;
}

/// Uniform double in [0,1) from the top 53 bits of one 64-bit draw.
/// Unlike std::uniform_real_distribution this is identical on every
/// standard library.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Sample {
    std::size_t next;
    double reward;
};

/// Draws a successor by inverse CDF over outcomes in ascending state order.
/// Consumes exactly one draw from rng.
inline Sample sample_transition(const MdpModel& model, std::size_t s, Action a,
                                std::mt19937_64& rng) {
    const auto& row = model.outcomes(s, a);
    if (row.empty())
        throw MdpError("empty transition row at (" + state_name(s) + "," + action_name(a) + ")");
    const double u = uniform01(rng);
    double cdf = 0.0;
    for (const Outcome& o : row) {
        cdf += o.probability;
        if (u < cdf) return {o.next, o.reward};
    }
    // u landed in the rounding gap above the accumulated sum
    return {row.back().next, row.back().reward};
}

/// Throws MdpError if the policy does not cover every state with an allowed action.
inline void check_policy(const MdpModel& model, const Policy& policy) {
    if (policy.size() != model.n_states())
        throw MdpError("policy covers " + std::to_string(policy.size()) + " states, model has " +
                       std::to_string(model.n_states()));
    for (std::size_t s = 0; s < policy.size(); ++s)
        if (!model.allowed(s, policy[s]))
            throw MdpError("policy picks disallowed action " + action_name(policy[s]) + " at " +
                           state_name(s));
}

inline std::string to_string(const Policy& policy) {
    std::string out = "{";
    for (std::size_t s = 0; s < policy.size(); ++s) {
        if (s) out += ", ";
        out += state_name(s) + ":" + action_name(policy[s]);
    }
    return out + "}";
}

}  // namespace cpualloc
