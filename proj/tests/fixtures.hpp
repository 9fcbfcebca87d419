#pragma once

#include "rmdp/model.hpp"

#include <vector>

namespace fixtures {

inline rmdp::Distribution dist(std::vector<double> p) {
    return rmdp::Distribution{std::move(p)};
}

/// Single state, single action, Dirac self-loop, reward 5.
inline rmdp::Rmdp make_m1() {
    rmdp::Rmdp m;
    m.n_states = 1;
    m.n_actions = 1;
    m.initial = 0;
    m.polytopes = {{rmdp::Polytope{{dist({1.0})}}}};
    m.rewards = {{5.0}};
    return m;
}

/// Two states, one action, two vertices per pair, rewards (1, 0).
/// The adversary's optimal selection is (0.5, 0.5) at s0 and (0.3, 0.7) at
/// s1, giving long-run average 0.3 / 0.8 = 0.375 everywhere.
inline rmdp::Rmdp make_m2() {
    rmdp::Rmdp m;
    m.n_states = 2;
    m.n_actions = 1;
    m.initial = 0;
    m.polytopes = {{rmdp::Polytope{{dist({0.9, 0.1}), dist({0.5, 0.5})}}},
                   {rmdp::Polytope{{dist({0.3, 0.7}), dist({0.7, 0.3})}}}};
    m.rewards = {{1.0}, {0.0}};
    return m;
}

/// Degenerate RMDP (singleton polytopes): a chooser state that commits to one
/// of two absorbing loops with rewards 3 and 1. Optimal value 3 via action 0.
inline rmdp::Rmdp make_chooser() {
    rmdp::Rmdp m;
    m.n_states = 3;
    m.n_actions = 2;
    m.initial = 0;
    const auto loop = [](int s) { return rmdp::Polytope{{rmdp::Distribution::dirac(3, s)}}; };
    m.polytopes = {{loop(1), loop(2)}, {loop(1), loop(1)}, {loop(2), loop(2)}};
    m.rewards = {{0.0, 0.0}, {3.0, 3.0}, {1.0, 1.0}};
    return m;
}

} // namespace fixtures
