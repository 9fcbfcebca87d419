#pragma once

#include "rmdp/mdp.hpp"
#include "rmdp/model.hpp"
#include "rmdp/reduction.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rmdp {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

inline void check_deadline(const Deadline& deadline, const char* where) {
    if (deadline && Clock::now() > *deadline)
        throw timeout_error(std::string(where) + ": deadline exceeded");
}

/// Pure positional policies of both players of a TBSG. The Max policy is
/// indexed by Max state, the Min policy by local Min state (global id minus
/// n_max).
struct PolicyPair {
    PurePolicy max_policy;
    PurePolicy min_policy;
};

struct PpeResult {
    bool is_optimal = false;
    std::vector<double> values; // Max-response gains, per game state
    double gap = 0.0;           // largest per-state disagreement of the two responses
};

namespace detail {

/// Per-state discount factors: applied on every step, or only when leaving
/// Min states (the alternate-step discounting of the discounted-mode
/// reduction).
inline std::vector<double> step_discounts(const Tbsg& g, double gamma, DiscountMode mode) {
    std::vector<double> d(g.n_states(), gamma);
    if (mode == DiscountMode::AlternateStep)
        for (int s = 0; s < g.n_max; ++s) d[s] = 1.0;
    return d;
}

/// MDP over the full game state space with the Min player's policy fixed.
inline Mdp fix_min_policy(const Tbsg& g, const PurePolicy& min_policy) {
    Mdp m;
    m.n_states = g.n_states();
    m.optimize = Optimize::Max;
    m.moves.resize(m.n_states);
    for (int s = 0; s < g.n_states(); ++s) {
        if (g.is_max_state(s)) {
            for (const auto& mv : g.moves[s]) m.moves[s].push_back({mv.next, mv.reward});
        } else {
            const auto& mv = g.moves[s][min_policy(s - g.n_max)];
            m.moves[s].push_back({mv.next, mv.reward});
        }
    }
    return m;
}

inline Mdp fix_max_policy(const Tbsg& g, const PurePolicy& max_policy) {
    Mdp m;
    m.n_states = g.n_states();
    m.optimize = Optimize::Min;
    m.moves.resize(m.n_states);
    for (int s = 0; s < g.n_states(); ++s) {
        if (g.is_max_state(s)) {
            const auto& mv = g.moves[s][max_policy(s)];
            m.moves[s].push_back({mv.next, mv.reward});
        } else {
            for (const auto& mv : g.moves[s]) m.moves[s].push_back({mv.next, mv.reward});
        }
    }
    return m;
}

/// Full-MDP warm-start policy: the free player's choices on their states,
/// action 0 on the fixed player's single-action states.
inline PurePolicy embed_max_policy(const Tbsg& g, const PurePolicy& max_policy) {
    PurePolicy p{std::vector<int>(g.n_states(), 0)};
    for (int s = 0; s < g.n_max; ++s) p.choice[s] = max_policy(s);
    return p;
}

} // namespace detail

/// Discounted-sum strategy iteration: fix Min's pure positional policy,
/// compute Max's exact discounted best response, then apply every improving
/// single-state switch for Min; stops when no Min state improves beyond tol.
inline std::pair<PolicyPair, std::vector<double>>
strategy_iteration_discounted(const Tbsg& g, double gamma, DiscountMode mode, double tol,
                              std::optional<PolicyPair> warm = std::nullopt,
                              long* inner_rounds = nullptr) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw validation_error("discount factor must lie in (0, 1)");
    auto violations = validate_tbsg(g);
    if (!violations.empty()) throw validation_error("invalid TBSG: " + violations.front());

    const auto discounts = detail::step_discounts(g, gamma, mode);
    PolicyPair pair = warm.value_or(PolicyPair{PurePolicy{std::vector<int>(g.n_max, 0)},
                                               PurePolicy{std::vector<int>(g.n_min, 0)}});
    long total_rounds = 0;

    for (int round = 0; round < kPolicyIterationCap; ++round) {
        const Mdp response_mdp = detail::fix_min_policy(g, pair.min_policy);
        long rounds = 0;
        auto [values, mdp_policy] = detail::solve_discounted_weighted(
            response_mdp, discounts, tol, detail::embed_max_policy(g, pair.max_policy),
            &rounds);
        total_rounds += rounds;
        for (int s = 0; s < g.n_max; ++s) pair.max_policy.choice[s] = mdp_policy(s);

        bool improved = false;
        for (int s = g.n_max; s < g.n_states(); ++s) {
            double best = std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < g.n_moves(s); ++a) {
                const double q =
                    g.moves[s][a].reward + discounts[s] * g.moves[s][a].next.dot(values);
                if (q < best) {
                    best = q;
                    best_a = a;
                }
            }
            if (best < values[s] - tol) {
                pair.min_policy.choice[s - g.n_max] = best_a;
                improved = true;
            }
        }
        if (!improved) {
            if (inner_rounds) *inner_rounds = total_rounds;
            return {std::move(pair), std::move(values)};
        }
    }
    throw iteration_limit_error("strategy iteration: Min improvement cap exceeded", gamma);
}

/// Policy profile evaluation: the pair is optimal for the long-run average
/// objective iff the Max best response against pi and the Min best response
/// against sigma have equal gains at every state, up to ppe_tol.
inline PpeResult ppe(const Tbsg& g, const PolicyPair& pair, double ppe_tol) {
    const double lra_tol = kLinsolveTol;
    auto [max_gb, max_pol] = solve_lra_mdp(detail::fix_min_policy(g, pair.min_policy), lra_tol,
                                           detail::embed_max_policy(g, pair.max_policy));
    auto [min_gb, min_pol] = solve_lra_mdp(detail::fix_max_policy(g, pair.max_policy), lra_tol);

    PpeResult res;
    res.values = max_gb.gain;
    for (int s = 0; s < g.n_states(); ++s)
        res.gap = std::max(res.gap, std::abs(max_gb.gain[s] - min_gb.gain[s]));
    res.is_optimal = res.gap <= ppe_tol;
    return res;
}

struct RppiOptions {
    double ppe_tol = kDefaultPpeTol;
    int max_outer = 64;
    Deadline deadline;
    std::vector<double>* gamma_trace = nullptr; // observed discount ladder, for tests
};

/// Robust polytopic policy iteration: reduce to the induced game, then solve
/// discounted games along the ladder gamma = 1/2, 3/4, 7/8, ... until policy
/// profile evaluation certifies the pair as long-run average optimal.
inline SolveReport rppi(const Rmdp& m, const RppiOptions& opt = {}) {
    const auto start = Clock::now();
    auto [g, map] = reduce(m, Objective::LimAvg);

    double gamma = 0.5;
    std::optional<PolicyPair> warm;
    long inner_total = 0;
    double last_gap = std::numeric_limits<double>::quiet_NaN();

    for (int outer = 0; outer < opt.max_outer; ++outer) {
        check_deadline(opt.deadline, "rppi");
        if (opt.gamma_trace) opt.gamma_trace->push_back(gamma);
        const double inner_tol = std::min(1e-9, (1.0 - gamma) * 1e-6);
        long rounds = 0;
        auto [pair, values] = strategy_iteration_discounted(g, gamma, DiscountMode::EveryStep,
                                                            inner_tol, warm, &rounds);
        inner_total += rounds;
        warm = pair;

        const PpeResult res = ppe(g, pair, opt.ppe_tol);
        last_gap = res.gap;
        if (res.is_optimal) {
            SolveReport report;
            report.algorithm = Algorithm::Rppi;
            std::vector<double> state_values(m.n_states);
            for (int s = 0; s < m.n_states; ++s)
                state_values[s] = res.values[map.max_state_of(s)];
            report.value_at_initial = state_values[m.initial];
            report.values = std::move(state_values);
            report.agent_policy = lower_agent_policy(pair.max_policy, map);
            report.env_policy = lower_env_policy(pair.min_policy, map);
            report.outer_iterations = outer + 1;
            report.inner_iterations = inner_total;
            report.final_gamma = gamma;
            report.wall_clock_seconds =
                std::chrono::duration<double>(Clock::now() - start).count();
            return report;
        }
        gamma = (1.0 + gamma) / 2.0;
    }
    throw iteration_limit_error("rppi: outer iteration cap exceeded at gamma " +
                                    std::to_string(gamma) + " with PPE gap " +
                                    std::to_string(last_gap),
                                last_gap);
}

struct VerifyResult {
    bool holds = false;
    double inf_value = 0.0;
};

/// NP-side certificate check: fixing the agent policy in the induced game
/// leaves a Min MDP over vertex actions whose optimal gain at the initial
/// state is the policy's guaranteed long-run average value.
inline VerifyResult verify_agent_policy(const Rmdp& m, const PurePolicy& agent, double threshold,
                                        double tol = kDefaultPpeTol) {
    auto [g, map] = reduce(m, Objective::LimAvg);
    const PurePolicy max_policy = lift_agent_policy(agent, map);
    auto [gb, pol] = solve_lra_mdp(detail::fix_max_policy(g, max_policy), kLinsolveTol);
    VerifyResult res;
    res.inf_value = gb.gain[map.max_state_of(m.initial)];
    res.holds = res.inf_value >= threshold - tol;
    return res;
}

} // namespace rmdp
