#pragma once

#include "cpualloc/mdp.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpualloc {

/// SDR processes are heavy and hard to parallelize, so core changes rarely
/// move the load level; SDN processes are light and move it often.
enum class ProcessKind { SDR, SDN };

inline std::string kind_name(ProcessKind k) { return k == ProcessKind::SDR ? "sdr" : "sdn"; }

inline ProcessKind parse_kind(std::string_view name) {
    if (name == "sdr" || name == "SDR") return ProcessKind::SDR;
    if (name == "sdn" || name == "SDN") return ProcessKind::SDN;
    throw std::invalid_argument("unknown process kind '" + std::string(name) + "'");
}

struct RewardRules {
    double keep_lowest = -3.0;
    double keep_intermediate = -1.0;
    double keep_highest = -5.0;
    /// remove-and-stay, or add-and-drop-a-level
    double good_move = 5.0;
    /// add-and-stay, or remove-and-climb-a-level
    double bad_move = -5.0;
};

inline constexpr double default_gamma = 0.9;

/// Per-action change probabilities of the measured 3-state models.
struct ChangeProbabilities {
    double add;     // P(drop one level | AddCore)
    double remove;  // P(climb one level | RemoveCore)
};

inline ChangeProbabilities table_probabilities(ProcessKind k) {
    return k == ProcessKind::SDR ? ChangeProbabilities{0.2, 0.3} : ChangeProbabilities{0.8, 0.7};
}

/**
 * Scenario description that compiles to an MdpModel.
 *
 * p_change applies to both AddCore and RemoveCore rows; unset means the
 * table defaults for the kind. p_change_add / p_change_remove override one
 * side each.
 */
struct ScenarioSpec {
    ProcessKind kind = ProcessKind::SDR;
    std::size_t n_states = 3;
    std::optional<double> p_change;
    std::optional<double> p_change_add;
    std::optional<double> p_change_remove;
    double gamma = default_gamma;

    ChangeProbabilities resolved() const {
        ChangeProbabilities p = table_probabilities(kind);
        if (p_change) p = {*p_change, *p_change};
        if (p_change_add) p.add = *p_change_add;
        if (p_change_remove) p.remove = *p_change_remove;
        return p;
    }
};

inline void check_spec(const ScenarioSpec& spec) {
    auto open_unit = [](double p) { return p > 0.0 && p < 1.0; };
    if (spec.n_states < 3) throw std::invalid_argument("n_states must be at least 3");
    if (!open_unit(spec.gamma)) throw std::invalid_argument("gamma must lie in (0,1)");
    for (const auto& p : {spec.p_change, spec.p_change_add, spec.p_change_remove})
        if (p && !open_unit(*p))
            throw std::invalid_argument("change probabilities must lie strictly in (0,1)");
}

inline void check_rules(const RewardRules& r) {
    for (double v : {r.keep_lowest, r.keep_intermediate, r.keep_highest, r.good_move, r.bad_move})
        if (!std::isfinite(v)) throw std::invalid_argument("reward rules must be finite");
}

/// The measured 3-state SDR/SDN models, transcribed row by row.
inline MdpModel build_reference_model(ProcessKind kind) {
    const bool sdr = kind == ProcessKind::SDR;
    const double p0_s0a2 = sdr ? 0.7 : 0.3, p1_s0a2 = sdr ? 0.3 : 0.7;
    const double p0_s1a1 = sdr ? 0.2 : 0.8, p1_s1a1 = sdr ? 0.8 : 0.2;
    const double p1_s1a2 = sdr ? 0.7 : 0.3, p2_s1a2 = sdr ? 0.3 : 0.7;
    const double p1_s2a1 = sdr ? 0.2 : 0.8, p2_s2a1 = sdr ? 0.8 : 0.2;

    using A = Action;
    return MdpModel::Builder(3, default_gamma)
        .transition(0, A::Keep, 0, 1.0, -3)
        .transition(0, A::AddCore, 0, 1.0, -5)
        .transition(0, A::RemoveCore, 0, p0_s0a2, +5)
        .transition(0, A::RemoveCore, 1, p1_s0a2, -5)
        .transition(1, A::Keep, 1, 1.0, -1)
        .transition(1, A::AddCore, 0, p0_s1a1, +5)
        .transition(1, A::AddCore, 1, p1_s1a1, -5)
        .transition(1, A::RemoveCore, 1, p1_s1a2, +5)
        .transition(1, A::RemoveCore, 2, p2_s1a2, -5)
        .transition(2, A::Keep, 2, 1.0, -5)
        .transition(2, A::AddCore, 1, p1_s2a1, +5)
        .transition(2, A::AddCore, 2, p2_s2a1, -5)
        .build();
}

/// 1 - p rounded to 12 decimals, so decimal inputs give the same double as
/// the written complement (1 - 0.7 yields 0.3, not 0.30000000000000004).
inline double complement(double p) { return std::round((1.0 - p) * 1e12) / 1e12; }

/**
 * Load-ladder model with n_states levels.
 *
 * Keep is a deterministic self-loop. AddCore drops one level with
 * probability p.add (deterministic self-loop at the lowest level);
 * RemoveCore climbs one level with probability p.remove and is not allowed
 * at the highest level. Only the extreme levels get the strong Keep
 * penalties; every intermediate level gets keep_intermediate.
 */
inline MdpModel build_parameterized(const ScenarioSpec& spec, const RewardRules& rules = {}) {
    check_spec(spec);
    check_rules(rules);
    const auto p = spec.resolved();
    const std::size_t n = spec.n_states;
    const std::size_t top = n - 1;

    MdpModel::Builder b(n, spec.gamma);
    for (std::size_t s = 0; s < n; ++s) {
        const double keep = s == 0 ? rules.keep_lowest
                          : s == top ? rules.keep_highest
                                     : rules.keep_intermediate;
        b.transition(s, Action::Keep, s, 1.0, keep);

        if (s == 0) {
            b.transition(s, Action::AddCore, s, 1.0, rules.bad_move);
        } else {
            b.transition(s, Action::AddCore, s - 1, p.add, rules.good_move);
            b.transition(s, Action::AddCore, s, complement(p.add), rules.bad_move);
        }

        if (s < top) {
            b.transition(s, Action::RemoveCore, s, complement(p.remove), rules.good_move);
            b.transition(s, Action::RemoveCore, s + 1, p.remove, rules.bad_move);
        }
    }
    return b.build();
}

inline std::vector<double> sweep_probabilities(ProcessKind kind) {
    if (kind == ProcessKind::SDR) return {0.01, 0.1, 0.2, 0.3, 0.4};
    return {0.6, 0.7, 0.8, 0.9, 0.99};
}

inline std::vector<ScenarioSpec> sweep_specs(ProcessKind kind) {
    std::vector<ScenarioSpec> out;
    for (double p : sweep_probabilities(kind)) {
        ScenarioSpec spec;
        spec.kind = kind;
        spec.p_change = p;
        out.push_back(spec);
    }
    return out;
}

}  // namespace cpualloc
