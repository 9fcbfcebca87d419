#pragma once

#include "rmdp/detail/rng.hpp"
#include "rmdp/model.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rmdp {

/// Contamination benchmark: a random base MDP whose uncertainty set at each
/// pair is {(1-R)*nominal + R*p : p in Delta(S)}, represented by its Dirac
/// corners.
struct ContaminationSpec {
    int n = 3;
    double contamination = 0.4; // R
    std::uint64_t seed = 0;
};

enum class LakeVariant { Unichain, Multichain };

struct FrozenLakeSpec {
    int n = 4;
    std::vector<std::pair<int, int>> holes; // (row, col)
    double perturbation = 0.2;              // d
    LakeVariant variant = LakeVariant::Unichain;
    std::uint64_t seed = 0;
};

namespace detail {

inline void push_vertex_dedup(Polytope& p, Distribution v) {
    for (const auto& existing : p.vertices)
        if (existing.approx_equal(v)) return;
    p.vertices.push_back(std::move(v));
}

} // namespace detail

inline Rmdp gen_contamination(const ContaminationSpec& spec) {
    if (spec.n < 1 || spec.contamination < 0.0 || spec.contamination > 1.0)
        throw validation_error("gen_contamination: invalid spec");
    detail::SplitMix64 rng(spec.seed);

    Rmdp m;
    m.n_states = spec.n;
    m.n_actions = spec.n + 10;
    m.initial = 0;
    m.polytopes.assign(m.n_states, std::vector<Polytope>(m.n_actions));
    m.rewards.assign(m.n_states, std::vector<double>(m.n_actions, 0.0));

    const double r = spec.contamination;
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            const auto nominal = rng.simplex(spec.n);
            const double sigma = rng.uniform01();
            m.rewards[s][a] = sigma * rng.normal();
            Polytope& p = m.polytopes[s][a];
            for (int corner = 0; corner < spec.n; ++corner) {
                Distribution v;
                v.probs.resize(spec.n);
                for (int t = 0; t < spec.n; ++t)
                    v.probs[t] = (1.0 - r) * nominal[t] + (corner == t ? r : 0.0);
                detail::push_vertex_dedup(p, std::move(v));
            }
        }
    }
    return m;
}

inline std::vector<std::pair<int, int>> default_frozen_lake_holes(int n) {
    if (n == 2) return {{0, 1}};
    std::vector<std::pair<int, int>> holes;
    for (int i = 1; i <= n - 2; ++i) holes.emplace_back(i, i);
    return holes;
}

inline Rmdp gen_frozen_lake(const FrozenLakeSpec& spec) {
    const int n = spec.n;
    if (n < 1 || spec.perturbation < 0.0 || spec.perturbation >= 1.0)
        throw validation_error("gen_frozen_lake: invalid spec");
    std::vector<std::vector<char>> hole(n, std::vector<char>(n, 0));
    for (auto [row, col] : spec.holes) {
        if (row < 0 || row >= n || col < 0 || col >= n)
            throw validation_error("gen_frozen_lake: hole outside the grid");
        if ((row == 0 && col == 0) || (row == n - 1 && col == n - 1))
            throw validation_error("gen_frozen_lake: hole covers start or goal");
        hole[row][col] = 1;
    }

    // State indexing: multichain keeps every cell, unichain drops holes.
    std::vector<int> state_of(n * n, -1);
    std::vector<std::pair<int, int>> cell_of;
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) {
            if (spec.variant == LakeVariant::Unichain && hole[row][col]) continue;
            state_of[row * n + col] = static_cast<int>(cell_of.size());
            cell_of.emplace_back(row, col);
        }
    const int n_states = static_cast<int>(cell_of.size());

    Rmdp m;
    m.n_states = n_states;
    m.n_actions = 4; // left, right, up, down
    m.initial = state_of[0];
    m.action_labels = {"left", "right", "up", "down"};
    for (auto [row, col] : cell_of)
        m.state_labels.push_back("c" + std::to_string(row) + "_" + std::to_string(col));
    m.polytopes.assign(n_states, std::vector<Polytope>(4));
    m.rewards.assign(n_states, std::vector<double>(4, 0.0));

    static constexpr int kDr[4] = {0, 0, -1, 1};
    static constexpr int kDc[4] = {-1, 1, 0, 0};
    // Slip: the chosen direction and each perpendicular direction with
    // probability 1/3; moves off the grid (or into a hole-as-wall in the
    // unichain variant) stay in place.
    const auto target = [&](int row, int col, int dir) {
        const int tr = row + kDr[dir];
        const int tc = col + kDc[dir];
        if (tr < 0 || tr >= n || tc < 0 || tc >= n) return state_of[row * n + col];
        if (spec.variant == LakeVariant::Unichain && hole[tr][tc])
            return state_of[row * n + col];
        return state_of[tr * n + tc];
    };

    for (int s = 0; s < n_states; ++s) {
        const auto [row, col] = cell_of[s];
        const bool absorbing = spec.variant == LakeVariant::Multichain && hole[row][col];
        const double dist =
            static_cast<double>(std::abs(row - (n - 1)) + std::abs(col - (n - 1)));
        for (int a = 0; a < 4; ++a) {
            m.rewards[s][a] = absorbing ? 0.0 : 1.0 / (1.0 + dist);
            Polytope& p = m.polytopes[s][a];
            if (absorbing) {
                p.vertices.push_back(Distribution::dirac(n_states, s));
                continue;
            }
            Distribution nominal;
            nominal.probs.assign(n_states, 0.0);
            for (int dir : {a, a < 2 ? 2 : 0, a < 2 ? 3 : 1})
                nominal.probs[target(row, col, dir)] += 1.0 / 3.0;
            p.vertices.push_back(nominal);

            // One perturbed vertex per nominal target: push up to d extra
            // mass onto it, removed uniformly from the other targets.
            for (int t = 0; t < n_states; ++t) {
                if (nominal.probs[t] == 0.0 || nominal.probs[t] >= 1.0) continue;
                Distribution v = nominal;
                double remaining = std::min(spec.perturbation, 1.0 - v.probs[t]);
                v.probs[t] += remaining;
                while (remaining > 1e-15) {
                    std::vector<int> active;
                    for (int u = 0; u < n_states; ++u)
                        if (u != t && v.probs[u] > 0.0) active.push_back(u);
                    if (active.empty()) break;
                    const double share = remaining / static_cast<double>(active.size());
                    for (int u : active) {
                        const double take = std::min(v.probs[u], share);
                        v.probs[u] -= take;
                        remaining -= take;
                    }
                }
                detail::push_vertex_dedup(p, std::move(v));
            }
        }
    }
    return m;
}

/// Small random instances for oracle testing. Fully determined by the seed.
inline Rmdp gen_random_tiny(int n_states, int n_actions, int max_vertices, std::uint64_t seed) {
    if (n_states < 1 || n_actions < 1 || max_vertices < 1)
        throw validation_error("gen_random_tiny: invalid bounds");
    detail::SplitMix64 rng(seed);

    Rmdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.initial = 0;
    m.polytopes.assign(n_states, std::vector<Polytope>(n_actions));
    m.rewards.assign(n_states, std::vector<double>(n_actions, 0.0));
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) {
            m.rewards[s][a] = rng.uniform(-1.0, 1.0);
            const int n_vertices = 1 + static_cast<int>(rng.next() % max_vertices);
            for (int v = 0; v < n_vertices; ++v)
                detail::push_vertex_dedup(m.polytopes[s][a],
                                          Distribution{rng.simplex(n_states)});
        }
    return m;
}

} // namespace rmdp
