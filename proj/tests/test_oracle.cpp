#include "rmdp/benchgen.hpp"
#include "rmdp/game.hpp"
#include "rmdp/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fixtures.hpp"

using namespace rmdp;
using Catch::Matchers::WithinAbs;

TEST_CASE("policy_pair_limavg on M2") {
    const auto m = fixtures::make_m2();
    // Selection (0.9, 0.1) at s0 and (0.3, 0.7) at s1: gain 0.3/0.4 = 0.75.
    const auto v0 = policy_pair_limavg(m, PurePolicy{{0, 0}}, PurePolicy{{0, 0}});
    CHECK_THAT(v0[0], WithinAbs(0.75, 1e-12));
    CHECK_THAT(v0[1], WithinAbs(0.75, 1e-12));
    // Selection (0.5, 0.5) and (0.3, 0.7): gain 0.3/0.8 = 0.375.
    const auto v1 = policy_pair_limavg(m, PurePolicy{{0, 0}}, PurePolicy{{1, 0}});
    CHECK_THAT(v1[0], WithinAbs(0.375, 1e-12));
}

TEST_CASE("policy_pair_limavg handles transient states") {
    const auto m = fixtures::make_chooser();
    const auto v = policy_pair_limavg(m, PurePolicy{{1, 0, 0}}, PurePolicy{{0, 0, 0, 0, 0, 0}});
    CHECK_THAT(v[0], WithinAbs(1.0, 1e-12)); // action 1 commits to the reward-1 loop
    CHECK_THAT(v[1], WithinAbs(3.0, 1e-12));
    CHECK_THAT(v[2], WithinAbs(1.0, 1e-12));
}

TEST_CASE("brute force on the fixture models") {
    const auto r1 = brute_force_value(fixtures::make_m1());
    CHECK_FALSE(r1.hybrid);
    CHECK_THAT(r1.maxmin, WithinAbs(5.0, 1e-12));
    REQUIRE(r1.minmax.has_value());
    CHECK_THAT(*r1.minmax, WithinAbs(5.0, 1e-12));

    const auto r2 = brute_force_value(fixtures::make_m2());
    CHECK_THAT(r2.maxmin, WithinAbs(0.375, 1e-12));
    CHECK_THAT(*r2.minmax, WithinAbs(0.375, 1e-12));

    const auto r3 = brute_force_value(fixtures::make_chooser());
    CHECK_THAT(r3.maxmin, WithinAbs(3.0, 1e-12));
    CHECK(r3.argmax_policy.choice[0] == 0);
}

TEST_CASE("pure positional determinacy on a random tiny suite") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = gen_random_tiny(1 + seed % 3, 1 + seed % 2, 2, 8000 + seed);
        const auto r = brute_force_value(m);
        REQUIRE(r.minmax.has_value());
        CHECK_THAT(r.maxmin, WithinAbs(*r.minmax, 1e-9));
    }
}

TEST_CASE("hybrid mode agrees with full enumeration") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = gen_random_tiny(3, 2, 3, 8100 + seed);
        const auto full = brute_force_value(m);
        REQUIRE_FALSE(full.hybrid);
        // Squeeze the env budget to force the best-response fallback.
        const auto hybrid = brute_force_value(m, {.max_env_policies = 1});
        CHECK(hybrid.hybrid);
        CHECK_FALSE(hybrid.minmax.has_value());
        CHECK_THAT(hybrid.maxmin, WithinAbs(full.maxmin, 1e-9));
    }
}

TEST_CASE("agent budget overflow throws") {
    const auto m = gen_random_tiny(8, 6, 2, 1);
    CHECK_THROWS_AS(brute_force_value(m, {.max_agent_policies = 10}), validation_error);
}

TEST_CASE("TBSG brute force matches the RMDP value through the reduction") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = gen_random_tiny(1 + seed % 2, 1 + seed % 2, 2, 8200 + seed);
        auto [g, map] = reduce(m, Objective::LimAvg);
        const auto game = brute_force_tbsg_value(g);
        const auto direct = brute_force_value(m);
        CHECK_THAT(game.maxmin, WithinAbs(direct.maxmin, 1e-9));
        CHECK_THAT(game.minmax, WithinAbs(*direct.minmax, 1e-9));
        CHECK_THAT(game.maxmin, WithinAbs(game.minmax, 1e-9));
    }
}

TEST_CASE("brute force agrees with rppi on a random tiny suite") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto m = gen_random_tiny(1 + seed % 3, 1 + seed % 3, 3, 8300 + seed);
        const auto brute = brute_force_value(m);
        const auto report = rppi(m);
        CHECK_THAT(report.value_at_initial, WithinAbs(brute.maxmin, 1e-5));
    }
}

TEST_CASE("oracle chain_gain cross-checks the solver-side evaluation") {
    // Same fixed chains through two independent recurrence decompositions.
    detail::SplitMix64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        std::vector<std::vector<double>> p(n);
        std::vector<double> r(n);
        Mdp m;
        m.n_states = n;
        m.moves.resize(n);
        for (int s = 0; s < n; ++s) {
            Distribution d{rng.simplex(n)};
            if (trial % 2) { // sparsify to exercise multichain structure
                d = Distribution::dirac(n, rng.next() % n);
            }
            r[s] = rng.uniform(-2.0, 2.0);
            p[s] = d.probs;
            m.moves[s].push_back({std::move(d), r[s]});
        }
        const auto oracle = oracle_detail::chain_gain(p, r);
        const auto solver = evaluate_policy_lra(m, PurePolicy{std::vector<int>(n, 0)});
        for (int s = 0; s < n; ++s) CHECK_THAT(oracle[s], WithinAbs(solver.gain[s], 1e-9));
    }
}
