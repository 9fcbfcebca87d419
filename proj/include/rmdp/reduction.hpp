#pragma once

#include "rmdp/model.hpp"

#include <string>
#include <vector>

namespace rmdp {

enum class Objective { LimAvg, Discounted };

/// Correspondence between RMDP states/actions/vertices and the induced game.
/// Max states copy the RMDP states in order; Min states enumerate (s, a)
/// pairs row-major; the Min actions of state (s, a) enumerate the vertices of
/// the polytope at (s, a) in order.
struct ReductionMap {
    int n_states = 0;
    int n_actions = 0;

    int max_state_of(int s) const { return s; }
    int min_state_of(int s, int a) const { return n_states + s * n_actions + a; }
    int vertex_action_of(int /*s*/, int /*a*/, int vertex) const { return vertex; }

    int rmdp_state_of_max(int gs) const { return gs; }
    int rmdp_state_of_min(int gs) const { return (gs - n_states) / n_actions; }
    int rmdp_action_of_min(int gs) const { return (gs - n_states) % n_actions; }
    int vertex_of_min_action(int action) const { return action; }
};

struct ReductionSize {
    long n_states_g = 0;
    long n_actions_g = 0;
    long n_transition_entries_g = 0;
};

/// Closed-form size of the induced game: |S| + |S||A| states, |A| + sum of
/// vertex counts actions, one Dirac entry per Max pair plus a full row per
/// vertex.
inline ReductionSize reduction_size(const Rmdp& m) {
    require_valid(m);
    ReductionSize sz;
    sz.n_states_g = m.n_states + static_cast<long>(m.n_states) * m.n_actions;
    long vertices = 0;
    for (const auto& row : m.polytopes)
        for (const auto& p : row) vertices += static_cast<long>(p.vertices.size());
    sz.n_actions_g = m.n_actions + vertices;
    sz.n_transition_entries_g =
        static_cast<long>(m.n_states) * m.n_actions + vertices * m.n_states;
    return sz;
}

/// Builds the induced turn-based game: Max plays the agent's actions and is
/// forwarded deterministically to the (s, a) Min state; Min picks a polytope
/// vertex whose distribution decides the next Max state. Under the long-run
/// average objective Max rewards are doubled to compensate for the reward-free
/// Min half-steps; under the discounted objective rewards are kept as-is and
/// the game is tagged for alternate-step discounting.
inline std::pair<Tbsg, ReductionMap> reduce(const Rmdp& m, Objective objective) {
    require_valid(m);
    ReductionMap map{m.n_states, m.n_actions};

    Tbsg g;
    g.n_max = m.n_states;
    g.n_min = m.n_states * m.n_actions;
    g.moves.resize(g.n_states());
    g.action_labels.resize(g.n_states());
    g.initial = map.max_state_of(m.initial);
    g.discount_mode = objective == Objective::Discounted ? DiscountMode::AlternateStep
                                                         : DiscountMode::EveryStep;

    const double reward_scale = objective == Objective::LimAvg ? 2.0 : 1.0;
    const auto state_label = [&](int s) {
        return m.state_labels.empty() ? "s" + std::to_string(s) : m.state_labels[s];
    };
    const auto action_label = [&](int a) {
        return m.action_labels.empty() ? "a" + std::to_string(a) : m.action_labels[a];
    };

    for (int s = 0; s < m.n_states; ++s) {
        g.state_labels.push_back(state_label(s));
        for (int a = 0; a < m.n_actions; ++a) {
            TbsgMove mv;
            mv.next = Distribution::dirac(g.n_states(), map.min_state_of(s, a));
            mv.reward = reward_scale * m.reward(s, a);
            g.moves[map.max_state_of(s)].push_back(std::move(mv));
            g.action_labels[map.max_state_of(s)].push_back(action_label(a));
        }
    }
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            const int gs = map.min_state_of(s, a);
            g.state_labels.push_back(state_label(s) + "*" + action_label(a));
            const Polytope& p = m.polytope(s, a);
            for (std::size_t v = 0; v < p.vertices.size(); ++v) {
                TbsgMove mv;
                mv.next.probs.assign(g.n_states(), 0.0);
                for (int t = 0; t < m.n_states; ++t)
                    mv.next.probs[map.max_state_of(t)] = p.vertices[v].probs[t];
                mv.reward = 0.0;
                g.moves[gs].push_back(std::move(mv));
                g.action_labels[gs].push_back("v" + std::to_string(v));
            }
        }
    }
    return {std::move(g), map};
}

// ---------------------------------------------------------------------------
// Policy mappings (pure positional restrictions)
// ---------------------------------------------------------------------------

/// RMDP agent policy -> Max player policy in the induced game.
inline PurePolicy lift_agent_policy(const PurePolicy& agent, const ReductionMap& map) {
    if (static_cast<int>(agent.choice.size()) != map.n_states)
        throw validation_error("agent policy not total over states");
    PurePolicy out;
    out.choice.resize(map.n_states);
    for (int s = 0; s < map.n_states; ++s) {
        if (agent(s) < 0 || agent(s) >= map.n_actions)
            throw validation_error("agent policy picks illegal action at state " +
                                   std::to_string(s));
        out.choice[map.max_state_of(s)] = agent(s);
    }
    return out;
}

/// Max player policy -> RMDP agent policy.
inline PurePolicy lower_agent_policy(const PurePolicy& max_policy, const ReductionMap& map) {
    if (static_cast<int>(max_policy.choice.size()) != map.n_states)
        throw validation_error("Max policy not total over Max states");
    PurePolicy out;
    out.choice.resize(map.n_states);
    for (int s = 0; s < map.n_states; ++s)
        out.choice[s] = max_policy(map.max_state_of(s));
    return out;
}

/// Vertex-selection table (flattened by s * n_actions + a) -> Min player
/// policy in the induced game.
inline PurePolicy lift_env_policy(const PurePolicy& selection, const ReductionMap& map) {
    const int pairs = map.n_states * map.n_actions;
    if (static_cast<int>(selection.choice.size()) != pairs)
        throw validation_error("vertex selection not total over state-action pairs");
    PurePolicy out;
    out.choice.resize(pairs);
    for (int s = 0; s < map.n_states; ++s)
        for (int a = 0; a < map.n_actions; ++a) {
            const int pair = s * map.n_actions + a;
            out.choice[map.min_state_of(s, a) - map.n_states] =
                map.vertex_action_of(s, a, selection(pair));
        }
    return out;
}

/// Min player policy -> vertex-selection table.
inline PurePolicy lower_env_policy(const PurePolicy& min_policy, const ReductionMap& map) {
    const int pairs = map.n_states * map.n_actions;
    if (static_cast<int>(min_policy.choice.size()) != pairs)
        throw validation_error("Min policy not total over Min states");
    PurePolicy out;
    out.choice.resize(pairs);
    for (int local = 0; local < pairs; ++local) {
        const int gs = map.n_states + local;
        const int pair = map.rmdp_state_of_min(gs) * map.n_actions + map.rmdp_action_of_min(gs);
        out.choice[pair] = map.vertex_of_min_action(min_policy(local));
    }
    return out;
}

} // namespace rmdp
