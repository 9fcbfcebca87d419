#pragma once

#include "rmdp/detail/linalg.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace rmdp {

struct EnumerationBudget {
    long max_agent_policies = 1'000'000;
    long max_env_policies = 1'000'000;
};

namespace oracle_detail {

/// Exact per-state long-run average value of a fixed Markov chain.
/// Deliberately kept separate from the solver-side gain/bias machinery:
/// recurrence detection is done via a reachability closure rather than an
/// SCC pass, so the two paths can cross-check each other.
inline std::vector<double> chain_gain(const std::vector<std::vector<double>>& p,
                                      const std::vector<double>& r) {
    const int n = static_cast<int>(p.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int s = 0; s < n; ++s) {
        reach[s][s] = 1;
        for (int t = 0; t < n; ++t)
            if (p[s][t] > 0.0) reach[s][t] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = 1;

    // s is recurrent iff every state it reaches can reach it back.
    std::vector<int> class_of(n, -1);
    std::vector<std::vector<int>> classes;
    for (int s = 0; s < n; ++s) {
        if (class_of[s] != -1) continue;
        bool recurrent = true;
        for (int t = 0; t < n && recurrent; ++t)
            if (reach[s][t] && !reach[t][s]) recurrent = false;
        if (!recurrent) continue;
        std::vector<int> members;
        for (int t = 0; t < n; ++t)
            if (reach[s][t] && reach[t][s]) {
                class_of[t] = static_cast<int>(classes.size());
                members.push_back(t);
            }
        classes.push_back(std::move(members));
    }

    std::vector<double> gain(n, 0.0);
    std::vector<double> class_gain(classes.size(), 0.0);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& states = classes[c];
        const std::size_t k = states.size();
        detail::Matrix a(k);
        std::vector<double> b(k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                a(i, j) = p[states[j]][states[i]] - (i == j ? 1.0 : 0.0);
        for (std::size_t j = 0; j < k; ++j) a(k - 1, j) = 1.0;
        b[k - 1] = 1.0;
        const auto q = detail::solve_linear(std::move(a), std::move(b), "oracle stationary");
        for (std::size_t i = 0; i < k; ++i) class_gain[c] += q[i] * r[states[i]];
        for (int s : states) gain[s] = class_gain[c];
    }

    std::vector<int> transient;
    for (int s = 0; s < n; ++s)
        if (class_of[s] == -1) transient.push_back(s);
    if (!transient.empty()) {
        const std::size_t k = transient.size();
        std::vector<int> idx(n, -1);
        for (std::size_t i = 0; i < k; ++i) idx[transient[i]] = static_cast<int>(i);
        detail::Matrix a(k);
        std::vector<double> b(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const int s = transient[i];
            for (int t = 0; t < n; ++t) {
                if (p[s][t] == 0.0) continue;
                if (idx[t] >= 0)
                    a(i, idx[t]) -= p[s][t];
                else
                    b[i] += p[s][t] * class_gain[class_of[t]];
            }
            a(i, i) += 1.0;
        }
        const auto gt = detail::solve_linear(std::move(a), std::move(b), "oracle absorption");
        for (std::size_t i = 0; i < k; ++i) gain[transient[i]] = gt[i];
    }
    return gain;
}

/// Odometer over per-slot cardinalities; returns false once exhausted.
inline bool advance(std::vector<int>& digits, const std::vector<int>& radix) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < radix[i]) return true;
        digits[i] = 0;
    }
    return false;
}

inline long policy_count(const std::vector<int>& radix, long cap) {
    long count = 1;
    for (int r : radix) {
        if (count > cap / std::max(r, 1)) return cap + 1;
        count *= r;
    }
    return count;
}

} // namespace oracle_detail

/// Long-run average value of a fixed RMDP policy pair (agent policy plus a
/// vertex selection flattened by s * n_actions + a), at every state.
inline std::vector<double> policy_pair_limavg(const Rmdp& m, const PurePolicy& agent,
                                              const PurePolicy& selection) {
    require_valid(m);
    std::vector<std::vector<double>> p(m.n_states);
    std::vector<double> r(m.n_states);
    for (int s = 0; s < m.n_states; ++s) {
        const int a = agent(s);
        const int v = selection(s * m.n_actions + a);
        p[s] = m.polytope(s, a).vertices[v].probs;
        r[s] = m.reward(s, a);
    }
    return oracle_detail::chain_gain(p, r);
}

struct BruteForceResult {
    double maxmin = 0.0;
    std::optional<double> minmax; // absent when env enumeration is over budget
    PurePolicy argmax_policy;
    bool hybrid = false;
};

/// Exhaustive max-min and min-max over pure positional pairs. Falls back to
/// hybrid mode (enumerate agent policies, environment best response via
/// long-run average policy iteration) when the env policy space is over
/// budget.
inline BruteForceResult brute_force_value(const Rmdp& m, const EnumerationBudget& budget = {}) {
    require_valid(m);
    std::vector<int> agent_radix(m.n_states, m.n_actions);
    std::vector<int> env_radix(m.n_states * m.n_actions);
    for (int s = 0; s < m.n_states; ++s)
        for (int a = 0; a < m.n_actions; ++a)
            env_radix[s * m.n_actions + a] =
                static_cast<int>(m.polytope(s, a).vertices.size());

    const long n_agent = oracle_detail::policy_count(agent_radix, budget.max_agent_policies);
    const long n_env = oracle_detail::policy_count(env_radix, budget.max_env_policies);
    if (n_agent > budget.max_agent_policies)
        throw validation_error("brute_force_value: agent policy space over budget");
    const bool full = n_env <= budget.max_env_policies;

    BruteForceResult res;
    res.hybrid = !full;
    res.maxmin = -std::numeric_limits<double>::infinity();

    PurePolicy agent{std::vector<int>(m.n_states, 0)};
    do {
        double worst;
        if (full) {
            worst = std::numeric_limits<double>::infinity();
            PurePolicy sel{std::vector<int>(env_radix.size(), 0)};
            do {
                worst = std::min(worst, policy_pair_limavg(m, agent, sel)[m.initial]);
            } while (oracle_detail::advance(sel.choice, env_radix));
        } else {
            // Environment best response: a Min MDP whose actions at s are the
            // vertices of the polytope at (s, agent(s)).
            Mdp env;
            env.n_states = m.n_states;
            env.optimize = Optimize::Min;
            env.moves.resize(m.n_states);
            for (int s = 0; s < m.n_states; ++s)
                for (const auto& v : m.polytope(s, agent(s)).vertices)
                    env.moves[s].push_back({v, m.reward(s, agent(s))});
            worst = solve_lra_mdp(env, kLinsolveTol).first.gain[m.initial];
        }
        if (worst > res.maxmin) {
            res.maxmin = worst;
            res.argmax_policy = agent;
        }
    } while (oracle_detail::advance(agent.choice, agent_radix));

    if (full) {
        double minmax = std::numeric_limits<double>::infinity();
        PurePolicy sel{std::vector<int>(env_radix.size(), 0)};
        do {
            double best = -std::numeric_limits<double>::infinity();
            PurePolicy agent2{std::vector<int>(m.n_states, 0)};
            do {
                best = std::max(best, policy_pair_limavg(m, agent2, sel)[m.initial]);
            } while (oracle_detail::advance(agent2.choice, agent_radix));
            minmax = std::min(minmax, best);
        } while (oracle_detail::advance(sel.choice, env_radix));
        res.minmax = minmax;
    }
    return res;
}

struct TbsgBruteForceResult {
    double maxmin = 0.0;
    double minmax = 0.0;
};

/// Exhaustive mean-payoff enumeration over pure positional pairs of a TBSG.
inline TbsgBruteForceResult brute_force_tbsg_value(const Tbsg& g,
                                                   const EnumerationBudget& budget = {}) {
    auto violations = validate_tbsg(g);
    if (!violations.empty()) throw validation_error("invalid TBSG: " + violations.front());

    std::vector<int> max_radix, min_radix;
    for (int s = 0; s < g.n_max; ++s) max_radix.push_back(g.n_moves(s));
    for (int s = g.n_max; s < g.n_states(); ++s) min_radix.push_back(g.n_moves(s));
    if (oracle_detail::policy_count(max_radix, budget.max_agent_policies) >
            budget.max_agent_policies ||
        oracle_detail::policy_count(min_radix, budget.max_env_policies) >
            budget.max_env_policies)
        throw validation_error("brute_force_tbsg_value: policy space over budget");

    const auto pair_value = [&](const PurePolicy& sigma, const PurePolicy& pi) {
        std::vector<std::vector<double>> p(g.n_states());
        std::vector<double> r(g.n_states());
        for (int s = 0; s < g.n_states(); ++s) {
            const int a = g.is_max_state(s) ? sigma(s) : pi(s - g.n_max);
            p[s] = g.moves[s][a].next.probs;
            r[s] = g.moves[s][a].reward;
        }
        return oracle_detail::chain_gain(p, r)[g.initial];
    };

    TbsgBruteForceResult res;
    res.maxmin = -std::numeric_limits<double>::infinity();
    PurePolicy sigma{std::vector<int>(g.n_max, 0)};
    do {
        double worst = std::numeric_limits<double>::infinity();
        PurePolicy pi{std::vector<int>(g.n_min, 0)};
        do {
            worst = std::min(worst, pair_value(sigma, pi));
        } while (oracle_detail::advance(pi.choice, min_radix));
        res.maxmin = std::max(res.maxmin, worst);
    } while (oracle_detail::advance(sigma.choice, max_radix));

    res.minmax = std::numeric_limits<double>::infinity();
    PurePolicy pi{std::vector<int>(g.n_min, 0)};
    do {
        double best = -std::numeric_limits<double>::infinity();
        PurePolicy sigma2{std::vector<int>(g.n_max, 0)};
        do {
            best = std::max(best, pair_value(sigma2, pi));
        } while (oracle_detail::advance(sigma2.choice, max_radix));
        res.minmax = std::min(res.minmax, best);
    } while (oracle_detail::advance(pi.choice, min_radix));
    return res;
}

} // namespace rmdp
