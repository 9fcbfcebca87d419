#include "rmdp/benchgen.hpp"
#include "rmdp/model.hpp"
#include "rmdp/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace rmdp;
using fixtures::dist;

TEST_CASE("validate_rmdp accepts the minimal valid model") {
    CHECK(validate_rmdp(fixtures::make_m1()).empty());
    CHECK(validate_rmdp(fixtures::make_m2()).empty());
    CHECK(validate_rmdp(fixtures::make_chooser()).empty());
}

TEST_CASE("validate_rmdp reports simplex violations") {
    auto m = fixtures::make_m1();
    m.polytopes[0][0].vertices[0] = dist({0.6});
    const auto violations = validate_rmdp(m);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("simplex") != std::string::npos);
}

TEST_CASE("validate_rmdp reports empty polytopes") {
    auto m = fixtures::make_m1();
    m.polytopes[0][0].vertices.clear();
    const auto violations = validate_rmdp(m);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("empty polytope") != std::string::npos);
}

TEST_CASE("validate_rmdp reports duplicate vertices and bad dimensions") {
    auto m = fixtures::make_m2();
    m.polytopes[0][0].vertices[1] = m.polytopes[0][0].vertices[0];
    CHECK(validate_rmdp(m).size() == 1);

    auto m2 = fixtures::make_m2();
    m2.polytopes[1][0].vertices[0] = dist({1.0});
    CHECK_FALSE(validate_rmdp(m2).empty());
}

TEST_CASE("validate_tbsg flags missing actions and off-simplex transitions") {
    Tbsg g;
    g.n_max = 1;
    g.n_min = 1;
    g.initial = 0;
    g.moves.resize(2);
    g.moves[1].push_back({dist({0.0, 1.0}), 0.0});
    CHECK(validate_tbsg(g).size() == 1); // Max state without actions

    g.moves[0].push_back({dist({0.6, 0.5}), 1.0}); // mass 1.1
    const auto violations = validate_tbsg(g);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("simplex") != std::string::npos);
}

TEST_CASE("trajectory_limavg") {
    CHECK(trajectory_limavg(std::vector<double>{5, 5, 5}) == 5.0);
    CHECK(trajectory_limavg(std::vector<double>{2, 0, 2, 0}) == 1.0);
    CHECK(trajectory_limavg(std::vector<double>{1, 0, 0, 0}) == 0.25);
    CHECK_THROWS_AS(trajectory_limavg(std::vector<double>{}), validation_error);
}

TEST_CASE("trajectory_limavg of periodic sequences equals the period mean") {
    detail::SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int period = 1 + static_cast<int>(rng.next() % 6);
        const int repeats = 1 + static_cast<int>(rng.next() % 8);
        std::vector<double> base(period);
        for (auto& v : base) v = rng.uniform(-10.0, 10.0);
        std::vector<double> seq;
        for (int t = 0; t < repeats; ++t) seq.insert(seq.end(), base.begin(), base.end());
        CHECK_THAT(trajectory_limavg(seq),
                   Catch::Matchers::WithinAbs(trajectory_limavg(base), 1e-12));
    }
}

TEST_CASE("RMDP serialization round-trips exactly") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto m = gen_random_tiny(1 + seed % 4, 1 + seed % 3, 3, seed);
        m.state_labels = rmdp::detail::default_labels("s", m.n_states);
        m.action_labels = rmdp::detail::default_labels("a", m.n_actions);
        const json j = to_json(m);
        const Rmdp back = rmdp_from_json(json::parse(j.dump()));
        CHECK(back == m);
    }
}

TEST_CASE("deserialization rejects off-simplex data") {
    json j = to_json(fixtures::make_m1());
    j["polytopes"][0][0][0][0] = 0.6;
    CHECK_THROWS_AS(rmdp_from_json(j), validation_error);

    json j2 = to_json(fixtures::make_m1());
    j2["polytopes"][0][0][0][0] = 1.0 + 0.5e-9; // within tolerance: accepted verbatim
    const Rmdp m = rmdp_from_json(j2);
    CHECK(m.polytopes[0][0].vertices[0].probs[0] == 1.0 + 0.5e-9);
}

TEST_CASE("validate_rmdp catches random single-field mutations") {
    detail::SplitMix64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = gen_random_tiny(2 + trial % 3, 1 + trial % 3, 2, 1000 + trial);
        REQUIRE(validate_rmdp(m).empty());
        const int s = static_cast<int>(rng.next() % m.n_states);
        const int a = static_cast<int>(rng.next() % m.n_actions);
        switch (rng.next() % 3) {
        case 0: m.polytopes[s][a].vertices[0].probs[0] += 0.5; break;
        case 1: m.polytopes[s][a].vertices.clear(); break;
        default: m.polytopes[s][a].vertices[0].probs.push_back(0.0); break;
        }
        CHECK_FALSE(validate_rmdp(m).empty());
    }
}
