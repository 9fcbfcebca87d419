#include "rmdp/benchgen.hpp"
#include "rmdp/oracle.hpp"
#include "rmdp/reduction.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace rmdp;

TEST_CASE("reduce on M1: shapes and doubled reward") {
    const auto m = fixtures::make_m1();
    auto [g, map] = reduce(m, Objective::LimAvg);
    CHECK(g.n_max == 1);
    CHECK(g.n_min == 1);
    CHECK(g.n_moves(0) == 1);
    CHECK(g.n_moves(1) == 1);
    CHECK(g.moves[0][0].reward == 10.0);
    CHECK(g.moves[1][0].reward == 0.0);
    CHECK(g.discount_mode == DiscountMode::EveryStep);
    CHECK(validate_tbsg(g).empty());

    auto [gd, mapd] = reduce(m, Objective::Discounted);
    CHECK(gd.moves[0][0].reward == 5.0);
    CHECK(gd.discount_mode == DiscountMode::AlternateStep);
}

TEST_CASE("reduce on M2: Min action sets are the vertex lists") {
    const auto m = fixtures::make_m2();
    auto [g, map] = reduce(m, Objective::LimAvg);
    CHECK(g.n_max == 2);
    CHECK(g.n_min == 2);
    CHECK(g.moves[0][0].reward == 2.0);
    CHECK(g.moves[1][0].reward == 0.0);
    CHECK(g.n_moves(map.min_state_of(0, 0)) + g.n_moves(map.min_state_of(1, 0)) == 4);

    // Min transition for vertex v is v itself, on the Max-state copies.
    const auto& mv = g.moves[map.min_state_of(0, 0)][1];
    CHECK(mv.next.probs[map.max_state_of(0)] == 0.5);
    CHECK(mv.next.probs[map.max_state_of(1)] == 0.5);
    CHECK(mv.reward == 0.0);

    // Max transitions are Dirac onto the matching Min state.
    CHECK(g.moves[map.max_state_of(0)][0].next.probs[map.min_state_of(0, 0)] == 1.0);
}

TEST_CASE("reduction alternates players structurally") {
    const auto m = gen_random_tiny(3, 2, 3, 7);
    auto [g, map] = reduce(m, Objective::LimAvg);
    for (int s = 0; s < g.n_states(); ++s)
        for (int a = 0; a < g.n_moves(s); ++a)
            for (int t = 0; t < g.n_states(); ++t)
                if (g.moves[s][a].next.probs[t] > 0.0)
                    CHECK(g.is_max_state(s) != g.is_max_state(t));
}

TEST_CASE("reduction_size closed forms") {
    const auto m2 = fixtures::make_m2();
    auto sz = reduction_size(m2);
    CHECK(sz.n_states_g == 4);
    CHECK(sz.n_actions_g == 5);

    auto sz1 = reduction_size(fixtures::make_m1());
    CHECK(sz1.n_states_g == 2);
    CHECK(sz1.n_actions_g == 2);

    // Fixed vertex counts: |S|=3, |A|=2, 3 vertices each.
    Rmdp m;
    m.n_states = 3;
    m.n_actions = 2;
    m.initial = 0;
    m.rewards.assign(3, std::vector<double>(2, 0.0));
    m.polytopes.assign(3, std::vector<Polytope>(2));
    for (auto& row : m.polytopes)
        for (auto& p : row)
            p.vertices = {fixtures::dist({1, 0, 0}), fixtures::dist({0, 1, 0}),
                          fixtures::dist({0, 0, 1})};
    auto sz3 = reduction_size(m);
    CHECK(sz3.n_states_g == 9);
    CHECK(sz3.n_actions_g == 20);
}

TEST_CASE("reduction_size matches counted sizes of reduce output") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = gen_random_tiny(1 + seed % 4, 1 + seed % 3, 3, 100 + seed);
        const auto sz = reduction_size(m);
        auto [g, map] = reduce(m, Objective::LimAvg);
        CHECK(g.n_states() == sz.n_states_g);
        long min_actions = 0;
        for (int s = g.n_max; s < g.n_states(); ++s) min_actions += g.n_moves(s);
        CHECK(min_actions + m.n_actions == sz.n_actions_g);
        long entries = 0;
        for (int s = 0; s < g.n_states(); ++s)
            entries += static_cast<long>(g.n_moves(s)) * (g.is_max_state(s) ? 1 : m.n_states);
        CHECK(entries == sz.n_transition_entries_g);
    }
}

TEST_CASE("agent policy lift/lower round-trips") {
    const auto m = gen_random_tiny(4, 3, 2, 42);
    auto [g, map] = reduce(m, Objective::LimAvg);
    detail::SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        PurePolicy sigma;
        for (int s = 0; s < m.n_states; ++s)
            sigma.choice.push_back(static_cast<int>(rng.next() % m.n_actions));
        CHECK(lower_agent_policy(lift_agent_policy(sigma, map), map) == sigma);
    }
}

TEST_CASE("env policy lift/lower is a bijection on G_M2") {
    const auto m = fixtures::make_m2();
    auto [g, map] = reduce(m, Objective::LimAvg);
    for (int v0 = 0; v0 < 2; ++v0)
        for (int v1 = 0; v1 < 2; ++v1) {
            const PurePolicy sel{{v0, v1}};
            const PurePolicy lifted = lift_env_policy(sel, map);
            CHECK(lower_env_policy(lifted, map) == sel);
        }
    // Lowering the unique Min policy of G_M1 yields the unique selection.
    auto [g1, map1] = reduce(fixtures::make_m1(), Objective::LimAvg);
    CHECK(lower_env_policy(PurePolicy{{0}}, map1) == PurePolicy{{0}});
}

TEST_CASE("policy-pair values are preserved by the reduction") {
    // LimAvg value of (sigma, pi) in M equals the value of the lifted pair in
    // G_M at every state copy.
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto m = gen_random_tiny(1 + seed % 3, 1 + seed % 2, 3, 500 + seed);
        auto [g, map] = reduce(m, Objective::LimAvg);
        detail::SplitMix64 rng(seed);
        for (int trial = 0; trial < 6; ++trial) {
            PurePolicy sigma, sel;
            for (int s = 0; s < m.n_states; ++s)
                sigma.choice.push_back(static_cast<int>(rng.next() % m.n_actions));
            for (int s = 0; s < m.n_states; ++s)
                for (int a = 0; a < m.n_actions; ++a)
                    sel.choice.push_back(static_cast<int>(
                        rng.next() % m.polytope(s, a).vertices.size()));

            const auto values_m = policy_pair_limavg(m, sigma, sel);

            // Evaluate the lifted pair's chain directly in the game.
            const PurePolicy max_pol = lift_agent_policy(sigma, map);
            const PurePolicy min_pol = lift_env_policy(sel, map);
            std::vector<std::vector<double>> p(g.n_states());
            std::vector<double> r(g.n_states());
            for (int s = 0; s < g.n_states(); ++s) {
                const int a = g.is_max_state(s) ? max_pol(s) : min_pol(s - g.n_max);
                p[s] = g.moves[s][a].next.probs;
                r[s] = g.moves[s][a].reward;
            }
            const auto values_g = oracle_detail::chain_gain(p, r);
            for (int s = 0; s < m.n_states; ++s)
                CHECK_THAT(values_g[map.max_state_of(s)],
                           Catch::Matchers::WithinAbs(values_m[s], 1e-9));
        }
    }
}
