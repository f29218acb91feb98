#pragma once

#include "cpualloc/mdp.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace cpualloc {

/**
 * Model document layout:
 *
 *   {
 *     "n_states": 3,
 *     "gamma": 0.9,
 *     "allowed": [["a0","a1","a2"], ["a0","a1","a2"], ["a0","a1"]],
 *     "transitions": [{"s": 0, "a": "a2", "s'": 1, "p": 0.3, "r": -5}, ...]
 *   }
 *
 * Transitions are emitted in (s, a, s') order.
 */
inline nlohmann::json to_json(const MdpModel& model) {
    nlohmann::json allowed = nlohmann::json::array();
    nlohmann::json transitions = nlohmann::json::array();
    for (std::size_t s = 0; s < model.n_states(); ++s) {
        nlohmann::json acts = nlohmann::json::array();
        for (Action a : model.allowed_actions(s)) {
            acts.push_back(action_name(a));
            for (const Outcome& o : model.outcomes(s, a))
                transitions.push_back({{"s", s},
                                       {"a", action_name(a)},
                                       {"s'", o.next},
                                       {"p", o.probability},
                                       {"r", o.reward}});
        }
        allowed.push_back(std::move(acts));
    }
    return {{"n_states", model.n_states()},
            {"gamma", model.gamma()},
            {"allowed", std::move(allowed)},
            {"transitions", std::move(transitions)}};
}

/// Parses a model document. Structural problems (missing fields, bad
/// indices or action names) throw; stochasticity is left to validate().
inline MdpModel model_from_json(const nlohmann::json& doc) {
    try {
        const auto n = doc.at("n_states").get<std::size_t>();
        MdpModel::Builder builder(n, doc.at("gamma").get<double>());
        if (doc.contains("allowed")) {
            const auto& allowed = doc.at("allowed");
            if (allowed.size() != n)
                throw std::invalid_argument("'allowed' must list actions for every state");
            for (std::size_t s = 0; s < n; ++s)
                for (const auto& name : allowed[s])
                    builder.allow(s, parse_action(name.get<std::string>()));
        }
        for (const auto& t : doc.at("transitions"))
            builder.transition(t.at("s").get<std::size_t>(),
                               parse_action(t.at("a").get<std::string>()),
                               t.at("s'").get<std::size_t>(), t.at("p").get<double>(),
                               t.at("r").get<double>());
        return builder.build();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed model document: ") + e.what());
    } catch (const MdpError& e) {
        throw std::invalid_argument(std::string("malformed model document: ") + e.what());
    }
}

inline MdpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return model_from_json(doc);
}

inline void save_model(const MdpModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file " + path);
    out << to_json(model).dump(2) << '\n';
}

}  // namespace cpualloc
