#pragma once

#include "rmdp/detail/linalg.hpp"
#include "rmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rmdp {

enum class Optimize { Max, Min };

/// One legal move of a standard MDP.
struct MdpMove {
    Distribution next;
    double reward = 0.0;
};

/// Standard MDP with per-state action lists and an optimization direction.
/// Min-mode instances arise from fixing the Max player's policy in a game.
struct Mdp {
    int n_states = 0;
    std::vector<std::vector<MdpMove>> moves; // [state][local action]
    Optimize optimize = Optimize::Max;

    int n_moves(int s) const { return static_cast<int>(moves[s].size()); }
};

/// Gain (per-state long-run average reward) and bias of a fixed policy.
struct GainBias {
    std::vector<double> gain;
    std::vector<double> bias;
};

/// Recurrent classes and transient states of a fixed-policy chain.
struct ChainDecomposition {
    std::vector<std::vector<int>> recurrent_classes;
    std::vector<int> transient;
    std::vector<int> class_of; // -1 for transient states
};

inline constexpr int kPolicyIterationCap = 10000;

namespace detail {

inline void require_legal(const Mdp& m, const PurePolicy& pi) {
    if (static_cast<int>(pi.choice.size()) != m.n_states)
        throw validation_error("policy not total over states");
    for (int s = 0; s < m.n_states; ++s)
        if (pi(s) < 0 || pi(s) >= m.n_moves(s))
            throw validation_error("policy picks illegal action at state " + std::to_string(s));
}

} // namespace detail

/// Recurrent classes are the bottom strongly connected components of the
/// fixed-policy support graph; everything else is transient.
inline ChainDecomposition chain_decompose(const Mdp& m, const PurePolicy& pi) {
    detail::require_legal(m, pi);
    const int n = m.n_states;
    std::vector<std::vector<int>> succ(n), pred(n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (m.moves[s][pi(s)].next.probs[t] > 0.0) {
                succ[s].push_back(t);
                pred[t].push_back(s);
            }

    // Kosaraju with explicit stacks.
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        seen[root] = 1;
        while (!stack.empty()) {
            auto& [s, i] = stack.back();
            if (i < succ[s].size()) {
                const int t = succ[s][i++];
                if (!seen[t]) {
                    seen[t] = 1;
                    stack.emplace_back(t, 0);
                }
            } else {
                order.push_back(s);
                stack.pop_back();
            }
        }
    }

    ChainDecomposition cd;
    cd.class_of.assign(n, -1);
    std::vector<int> comp(n, -1);
    int n_comps = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] != -1) continue;
        std::vector<int> stack{*it};
        comp[*it] = n_comps;
        while (!stack.empty()) {
            const int s = stack.back();
            stack.pop_back();
            for (int t : pred[s])
                if (comp[t] == -1) {
                    comp[t] = n_comps;
                    stack.push_back(t);
                }
        }
        ++n_comps;
    }

    std::vector<std::vector<int>> members(n_comps);
    std::vector<char> bottom(n_comps, 1);
    for (int s = 0; s < n; ++s) {
        members[comp[s]].push_back(s);
        for (int t : succ[s])
            if (comp[t] != comp[s]) bottom[comp[s]] = 0;
    }
    for (int c = 0; c < n_comps; ++c) {
        if (!bottom[c]) continue;
        const int id = static_cast<int>(cd.recurrent_classes.size());
        for (int s : members[c]) cd.class_of[s] = id;
        cd.recurrent_classes.push_back(members[c]);
    }
    for (int s = 0; s < n; ++s)
        if (cd.class_of[s] == -1) cd.transient.push_back(s);
    return cd;
}

/// Exact gain/bias of a fixed policy. Per recurrent class the gain comes from
/// the stationary distribution; transient gains solve the absorption system;
/// the bias system is pinned to 0 at the lowest-index state of each class.
inline GainBias evaluate_policy_lra(const Mdp& m, const PurePolicy& pi) {
    detail::require_legal(m, pi);
    const int n = m.n_states;
    const ChainDecomposition cd = chain_decompose(m, pi);

    const auto p = [&](int s, int t) { return m.moves[s][pi(s)].next.probs[t]; };
    const auto r = [&](int s) { return m.moves[s][pi(s)].reward; };

    GainBias gb;
    gb.gain.assign(n, 0.0);

    std::vector<double> class_gain(cd.recurrent_classes.size(), 0.0);
    for (std::size_t c = 0; c < cd.recurrent_classes.size(); ++c) {
        const auto& states = cd.recurrent_classes[c];
        const std::size_t k = states.size();
        // Stationary distribution: q P = q with the last equation replaced by
        // sum(q) = 1.
        detail::Matrix a(k);
        std::vector<double> b(k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                a(i, j) = p(states[j], states[i]) - (i == j ? 1.0 : 0.0);
        for (std::size_t j = 0; j < k; ++j) a(k - 1, j) = 1.0;
        b[k - 1] = 1.0;
        const auto q = detail::solve_linear(std::move(a), std::move(b), "stationary distribution");
        double g = 0.0;
        for (std::size_t i = 0; i < k; ++i) g += q[i] * r(states[i]);
        class_gain[c] = g;
        for (int s : states) gb.gain[s] = g;
    }

    if (!cd.transient.empty()) {
        const std::size_t k = cd.transient.size();
        std::vector<int> idx(n, -1);
        for (std::size_t i = 0; i < k; ++i) idx[cd.transient[i]] = static_cast<int>(i);
        detail::Matrix a(k);
        std::vector<double> b(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const int s = cd.transient[i];
            for (int t = 0; t < n; ++t) {
                const double pt = p(s, t);
                if (pt == 0.0) continue;
                if (idx[t] >= 0)
                    a(i, idx[t]) -= pt;
                else
                    b[i] += pt * class_gain[cd.class_of[t]];
            }
            a(i, i) += 1.0;
        }
        const auto gt = detail::solve_linear(std::move(a), std::move(b), "transient gains");
        for (std::size_t i = 0; i < k; ++i) gb.gain[cd.transient[i]] = gt[i];
    }

    // Bias: (I - P) h = r - g, one row per recurrent class replaced by the
    // normalization h(lowest-index state) = 0.
    detail::Matrix a(n);
    std::vector<double> b(n, 0.0);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) a(s, t) = (s == t ? 1.0 : 0.0) - p(s, t);
        b[s] = r(s) - gb.gain[s];
    }
    for (const auto& states : cd.recurrent_classes) {
        const int pin = *std::min_element(states.begin(), states.end());
        for (int t = 0; t < n; ++t) a(pin, t) = (t == pin ? 1.0 : 0.0);
        b[pin] = 0.0;
    }
    gb.bias = detail::solve_linear(std::move(a), std::move(b), "bias system");

    // Residual check of the evaluation equations.
    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
        double pg = 0.0, ph = 0.0;
        for (int t = 0; t < n; ++t) {
            pg += p(s, t) * gb.gain[t];
            ph += p(s, t) * gb.bias[t];
        }
        residual = std::max(residual, std::abs(gb.gain[s] - pg));
        residual = std::max(residual, std::abs(gb.gain[s] + gb.bias[s] - r(s) - ph));
    }
    if (residual > kLinsolveTol)
        throw numerical_error("gain/bias evaluation residual " + std::to_string(residual) +
                              " exceeds tolerance");
    return gb;
}

/// Multichain Howard policy iteration for long-run average reward: improve
/// the gain first, then the bias among gain-ties; lowest improving action
/// index wins; switches require strict improvement beyond tol (anti-cycling).
inline std::pair<GainBias, PurePolicy>
solve_lra_mdp(const Mdp& m, double tol, std::optional<PurePolicy> initial = std::nullopt) {
    const double sign = m.optimize == Optimize::Max ? 1.0 : -1.0;
    PurePolicy pi = initial.value_or(PurePolicy{std::vector<int>(m.n_states, 0)});
    detail::require_legal(m, pi);

    GainBias gb;
    for (int round = 0; round < kPolicyIterationCap; ++round) {
        gb = evaluate_policy_lra(m, pi);
        bool improved = false;
        PurePolicy next = pi;
        for (int s = 0; s < m.n_states; ++s) {
            const int k = m.n_moves(s);
            std::vector<double> gain_value(k);
            for (int a = 0; a < k; ++a)
                gain_value[a] = sign * m.moves[s][a].next.dot(gb.gain);
            const double best_gain = *std::max_element(gain_value.begin(), gain_value.end());

            if (best_gain > sign * gb.gain[s] + tol) {
                for (int a = 0; a < k; ++a)
                    if (gain_value[a] == best_gain) {
                        next.choice[s] = a;
                        break;
                    }
                improved = true;
                continue;
            }
            // Bias stage over gain-ties.
            const double cur = sign * (gb.gain[s] + gb.bias[s]);
            double best = -std::numeric_limits<double>::infinity();
            int best_a = -1;
            for (int a = 0; a < k; ++a) {
                if (gain_value[a] < best_gain - tol) continue;
                const double w =
                    sign * (m.moves[s][a].reward + m.moves[s][a].next.dot(gb.bias));
                if (w > best) {
                    best = w;
                    best_a = a;
                }
            }
            if (best > cur + tol) {
                next.choice[s] = best_a;
                improved = true;
            }
        }
        if (!improved) return {std::move(gb), std::move(pi)};
        pi = std::move(next);
    }
    throw iteration_limit_error("solve_lra_mdp: improvement cap exceeded",
                                gb.gain.empty() ? 0.0 : gb.gain[0]);
}

namespace detail {

/// Policy iteration for discounted MDPs with a per-state discount factor
/// (applied when leaving the state). Evaluation is an exact linear solve, so
/// the returned values satisfy the fixed-point equations of the final policy
/// to machine precision.
inline std::pair<std::vector<double>, PurePolicy>
solve_discounted_weighted(const Mdp& m, const std::vector<double>& discount, double tol,
                          std::optional<PurePolicy> initial, long* rounds_out = nullptr) {
    const double sign = m.optimize == Optimize::Max ? 1.0 : -1.0;
    PurePolicy pi = initial.value_or(PurePolicy{std::vector<int>(m.n_states, 0)});
    require_legal(m, pi);
    const int n = m.n_states;

    std::vector<double> v(n, 0.0);
    for (int round = 0; round < kPolicyIterationCap; ++round) {
        Matrix a(n);
        std::vector<double> b(n);
        for (int s = 0; s < n; ++s) {
            const MdpMove& mv = m.moves[s][pi(s)];
            for (int t = 0; t < n; ++t)
                a(s, t) = (s == t ? 1.0 : 0.0) - discount[s] * mv.next.probs[t];
            b[s] = mv.reward;
        }
        v = solve_linear(std::move(a), std::move(b), "discounted evaluation");

        bool improved = false;
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a2 = 0; a2 < m.n_moves(s); ++a2) {
                const double q = sign * (m.moves[s][a2].reward +
                                         discount[s] * m.moves[s][a2].next.dot(v));
                if (q > best) {
                    best = q;
                    best_a = a2;
                }
            }
            if (best > sign * v[s] + tol) {
                pi.choice[s] = best_a;
                improved = true;
            }
        }
        if (!improved) {
            if (rounds_out) *rounds_out = round + 1;
            return {std::move(v), std::move(pi)};
        }
    }
    throw iteration_limit_error("discounted policy iteration: improvement cap exceeded",
                                v.empty() ? 0.0 : v[0]);
}

} // namespace detail

/// Optimal discounted values and greedy policy.
inline std::pair<std::vector<double>, PurePolicy>
solve_discounted_mdp(const Mdp& m, double gamma, double tol,
                     std::optional<PurePolicy> initial = std::nullopt) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw validation_error("discount factor must lie in (0, 1)");
    return detail::solve_discounted_weighted(m, std::vector<double>(m.n_states, gamma), tol,
                                             std::move(initial));
}

} // namespace rmdp
