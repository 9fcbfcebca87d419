#pragma once

#include "rmdp/game.hpp"
#include "rmdp/model.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rmdp {

/// One application of the robust Bellman operator
///   (T V)(s) = max_a [ r(s,a) + gamma * min_{v in vertices(s,a)} <v, V> ]
/// together with the greedy policy (lowest action index on ties). The inner
/// minimum ranges over polytope vertices only; linearity makes that exact.
inline std::pair<std::vector<double>, PurePolicy>
robust_bellman(const Rmdp& m, const std::vector<double>& values, double gamma) {
    if (static_cast<int>(values.size()) != m.n_states)
        throw validation_error("robust_bellman: value vector has wrong dimension");
    std::vector<double> out(m.n_states);
    PurePolicy greedy{std::vector<int>(m.n_states, 0)};
    for (int s = 0; s < m.n_states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.n_actions; ++a) {
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& v : m.polytope(s, a).vertices)
                worst = std::min(worst, v.dot(values));
            const double q = m.reward(s, a) + gamma * worst;
            if (q > best) {
                best = q;
                greedy.choice[s] = a;
            }
        }
        out[s] = best;
    }
    return {std::move(out), std::move(greedy)};
}

/// Robust value iteration for the discounted objective, stopping when
/// successive iterates are within tol*(1-gamma)/(2*gamma) in max-norm (the
/// standard contraction bound giving a value error of at most tol/2).
inline SolveReport solve_discounted_rmdp(const Rmdp& m, double gamma, double tol,
                                         std::vector<double> initial_values = {},
                                         const Deadline& deadline = {}) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw validation_error("discount factor must lie in (0, 1)");
    require_valid(m);
    const auto start = Clock::now();

    std::vector<double> values =
        initial_values.empty() ? std::vector<double>(m.n_states, 0.0) : std::move(initial_values);
    const double stop = tol * (1.0 - gamma) / (2.0 * gamma);
    PurePolicy greedy;
    long iters = 0;
    while (true) {
        if (++iters % 256 == 0) check_deadline(deadline, "solve_discounted_rmdp");
        auto [next, pol] = robust_bellman(m, values, gamma);
        double diff = 0.0;
        for (int s = 0; s < m.n_states; ++s) diff = std::max(diff, std::abs(next[s] - values[s]));
        values = std::move(next);
        greedy = std::move(pol);
        if (diff <= stop) break;
    }

    SolveReport report;
    report.algorithm = Algorithm::Rvi;
    report.value_at_initial = values[m.initial];
    report.values = std::move(values);
    report.agent_policy = std::move(greedy);
    report.inner_iterations = iters;
    report.final_gamma = gamma;
    report.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

/// Robust value iteration baseline: walk the discount ladder
/// gamma_k = 1 - 2^-(k+1), report the Abel mean (1-gamma)*V_gamma(s0) as the
/// long-run average estimate, and stop once it is within stop_gap of the
/// reference value. Convergence requires a unichain RMDP; this is the
/// caller's responsibility and is not checked.
inline SolveReport rvi(const Rmdp& m, double reference_value, double stop_gap, int max_outer,
                       const Deadline& deadline = {}) {
    require_valid(m);
    const auto start = Clock::now();

    double gamma = 0.5;
    std::vector<double> warm;
    long inner_total = 0;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    for (int outer = 0; outer < max_outer; ++outer) {
        check_deadline(deadline, "rvi");
        SolveReport inner = solve_discounted_rmdp(m, gamma, stop_gap / 10.0, warm, deadline);
        inner_total += inner.inner_iterations;
        warm = *inner.values;
        estimate = (1.0 - gamma) * inner.value_at_initial;
        if (std::abs(estimate - reference_value) <= stop_gap) {
            SolveReport report;
            report.algorithm = Algorithm::Rvi;
            report.value_at_initial = estimate;
            report.values = std::vector<double>(m.n_states);
            for (int s = 0; s < m.n_states; ++s)
                (*report.values)[s] = (1.0 - gamma) * (*inner.values)[s];
            report.agent_policy = inner.agent_policy;
            report.outer_iterations = outer + 1;
            report.inner_iterations = inner_total;
            report.final_gamma = gamma;
            report.wall_clock_seconds =
                std::chrono::duration<double>(Clock::now() - start).count();
            return report;
        }
        gamma = (1.0 + gamma) / 2.0;
    }
    throw iteration_limit_error("rvi: discount ladder cap exceeded, last estimate " +
                                    std::to_string(estimate),
                                estimate);
}

/// Robust relative value iteration baseline: undiscounted robust Bellman
/// updates normalized at the initial state. Requires a unichain, aperiodic
/// RMDP (unchecked, caller's responsibility).
inline SolveReport rrvi(const Rmdp& m, double reference_value, double stop_gap, long max_iters,
                        const Deadline& deadline = {}) {
    require_valid(m);
    const auto start = Clock::now();

    std::vector<double> h(m.n_states, 0.0);
    double estimate = std::numeric_limits<double>::quiet_NaN();
    for (long iter = 1; iter <= max_iters; ++iter) {
        if (iter % 256 == 0) check_deadline(deadline, "rrvi");
        auto [th, greedy] = robust_bellman(m, h, 1.0);
        estimate = th[m.initial];
        for (int s = 0; s < m.n_states; ++s) h[s] = th[s] - estimate;
        if (std::abs(estimate - reference_value) <= stop_gap) {
            SolveReport report;
            report.algorithm = Algorithm::Rrvi;
            report.value_at_initial = estimate;
            report.agent_policy = std::move(greedy);
            report.inner_iterations = iter;
            report.wall_clock_seconds =
                std::chrono::duration<double>(Clock::now() - start).count();
            return report;
        }
    }
    throw iteration_limit_error("rrvi: iteration cap exceeded, last estimate " +
                                    std::to_string(estimate),
                                estimate);
}

} // namespace rmdp
