#pragma once

#include "rmdp/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace rmdp {

using nlohmann::json;

namespace detail {

inline std::vector<std::string> default_labels(const char* prefix, int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline int label_index(const std::vector<std::string>& labels, const std::string& label,
                       const char* what) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        throw validation_error(std::string(what) + " label not found: " + label);
    return static_cast<int>(it - labels.begin());
}

/// Parses a probability vector, enforcing the simplex invariants. Entries are
/// kept bit-exact so serialization round-trips; off-simplex input is rejected
/// rather than repaired.
inline Distribution parse_distribution(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw validation_error(where + ": expected an array of " + std::to_string(dim) + " reals");
    Distribution d;
    d.probs.reserve(dim);
    for (const auto& v : j) d.probs.push_back(v.get<double>());
    if (!d.is_simplex())
        throw validation_error(where + ": entries do not form a probability distribution");
    return d;
}

} // namespace detail

// ---------------------------------------------------------------------------
// RMDP
// ---------------------------------------------------------------------------

inline json to_json(const Rmdp& m) {
    json j;
    j["states"] = m.state_labels.empty() ? detail::default_labels("s", m.n_states)
                                         : m.state_labels;
    j["actions"] = m.action_labels.empty() ? detail::default_labels("a", m.n_actions)
                                           : m.action_labels;
    j["initial"] = j["states"][m.initial];
    j["rewards"] = m.rewards;
    json polys = json::array();
    for (const auto& row : m.polytopes) {
        json prow = json::array();
        for (const auto& p : row) {
            json verts = json::array();
            for (const auto& v : p.vertices) verts.push_back(v.probs);
            prow.push_back(std::move(verts));
        }
        polys.push_back(std::move(prow));
    }
    j["polytopes"] = std::move(polys);
    return j;
}

inline Rmdp rmdp_from_json(const json& j) {
    Rmdp m;
    m.state_labels = j.at("states").get<std::vector<std::string>>();
    m.action_labels = j.at("actions").get<std::vector<std::string>>();
    m.n_states = static_cast<int>(m.state_labels.size());
    m.n_actions = static_cast<int>(m.action_labels.size());
    m.initial = detail::label_index(m.state_labels, j.at("initial").get<std::string>(), "initial state");

    m.rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
    const json& polys = j.at("polytopes");
    if (static_cast<int>(polys.size()) != m.n_states)
        throw validation_error("polytopes: expected one row per state");
    m.polytopes.resize(m.n_states);
    for (int s = 0; s < m.n_states; ++s) {
        if (static_cast<int>(polys[s].size()) != m.n_actions)
            throw validation_error("polytopes: row " + std::to_string(s) +
                                   " must cover every action");
        m.polytopes[s].resize(m.n_actions);
        for (int a = 0; a < m.n_actions; ++a) {
            for (const auto& vj : polys[s][a]) {
                const std::string where = "polytope (" + std::to_string(s) + "," +
                                          std::to_string(a) + ")";
                m.polytopes[s][a].vertices.push_back(
                    detail::parse_distribution(vj, m.n_states, where));
            }
        }
    }
    auto violations = validate_rmdp(m);
    if (!violations.empty()) throw validation_error("invalid RMDP: " + violations.front());
    return m;
}

// ---------------------------------------------------------------------------
// TBSG
// ---------------------------------------------------------------------------

inline json to_json(const Tbsg& g) {
    json j;
    std::vector<std::string> states = g.state_labels.empty()
                                          ? detail::default_labels("g", g.n_states())
                                          : g.state_labels;
    j["max_states"] = std::vector<std::string>(states.begin(), states.begin() + g.n_max);
    j["min_states"] = std::vector<std::string>(states.begin() + g.n_max, states.end());
    j["initial"] = states[g.initial];
    j["discount_mode"] =
        g.discount_mode == DiscountMode::AlternateStep ? "alternate_step" : "every_step";
    json moves = json::array();
    for (int s = 0; s < g.n_states(); ++s) {
        json row = json::array();
        for (int a = 0; a < g.n_moves(s); ++a) {
            json mj;
            mj["action"] = g.action_labels.empty() ? ("m" + std::to_string(a))
                                                   : g.action_labels[s][a];
            mj["reward"] = g.moves[s][a].reward;
            mj["next"] = g.moves[s][a].next.probs;
            row.push_back(std::move(mj));
        }
        moves.push_back(std::move(row));
    }
    j["moves"] = std::move(moves);
    return j;
}

inline Tbsg tbsg_from_json(const json& j) {
    Tbsg g;
    auto max_states = j.at("max_states").get<std::vector<std::string>>();
    auto min_states = j.at("min_states").get<std::vector<std::string>>();
    g.n_max = static_cast<int>(max_states.size());
    g.n_min = static_cast<int>(min_states.size());
    g.state_labels = max_states;
    g.state_labels.insert(g.state_labels.end(), min_states.begin(), min_states.end());
    g.initial = detail::label_index(g.state_labels, j.at("initial").get<std::string>(),
                                    "initial state");
    g.discount_mode = j.value("discount_mode", std::string("every_step")) == "alternate_step"
                          ? DiscountMode::AlternateStep
                          : DiscountMode::EveryStep;
    const json& moves = j.at("moves");
    if (static_cast<int>(moves.size()) != g.n_states())
        throw validation_error("moves: expected one row per state");
    g.moves.resize(g.n_states());
    g.action_labels.resize(g.n_states());
    for (int s = 0; s < g.n_states(); ++s) {
        for (const auto& mj : moves[s]) {
            TbsgMove mv;
            mv.reward = mj.at("reward").get<double>();
            mv.next = detail::parse_distribution(mj.at("next"), g.n_states(),
                                                 "move at state " + std::to_string(s));
            g.moves[s].push_back(std::move(mv));
            g.action_labels[s].push_back(mj.at("action").get<std::string>());
        }
    }
    auto violations = validate_tbsg(g);
    if (!violations.empty()) throw validation_error("invalid TBSG: " + violations.front());
    return g;
}

// ---------------------------------------------------------------------------
// SolveReport and policies
// ---------------------------------------------------------------------------

inline json to_json(const SolveReport& r) {
    json j;
    j["algorithm"] = algorithm_name(r.algorithm);
    j["value_at_initial"] = r.value_at_initial;
    if (r.values) j["values"] = *r.values;
    j["agent_policy"] = r.agent_policy.choice;
    if (r.env_policy) j["env_policy"] = r.env_policy->choice;
    j["outer_iterations"] = r.outer_iterations;
    j["inner_iterations"] = r.inner_iterations;
    if (r.final_gamma) j["final_gamma"] = *r.final_gamma;
    j["wall_clock_seconds"] = r.wall_clock_seconds;
    return j;
}

inline SolveReport report_from_json(const json& j) {
    SolveReport r;
    const std::string alg = j.at("algorithm").get<std::string>();
    if (alg == "rppi") r.algorithm = Algorithm::Rppi;
    else if (alg == "rvi") r.algorithm = Algorithm::Rvi;
    else if (alg == "rrvi") r.algorithm = Algorithm::Rrvi;
    else if (alg == "brute") r.algorithm = Algorithm::Brute;
    else throw validation_error("unknown algorithm: " + alg);
    r.value_at_initial = j.at("value_at_initial").get<double>();
    if (j.contains("values")) r.values = j.at("values").get<std::vector<double>>();
    r.agent_policy.choice = j.at("agent_policy").get<std::vector<int>>();
    if (j.contains("env_policy"))
        r.env_policy = PurePolicy{j.at("env_policy").get<std::vector<int>>()};
    r.outer_iterations = j.at("outer_iterations").get<long>();
    r.inner_iterations = j.at("inner_iterations").get<long>();
    if (j.contains("final_gamma")) r.final_gamma = j.at("final_gamma").get<double>();
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    return r;
}

/// Agent policy file: either a bare array of action indices, one per state,
/// or an object with an "agent_policy" member in the same shape.
inline PurePolicy policy_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("agent_policy");
    return PurePolicy{arr.get<std::vector<int>>()};
}

} // namespace rmdp
