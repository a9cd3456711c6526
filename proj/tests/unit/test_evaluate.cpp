#include "lrcvar/chains.hpp"
#include "lrcvar/errors.hpp"
#include "lrcvar/evaluate.hpp"
#include "lrcvar/solver.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lrcvar;

TEST_SUITE("evaluate") {

TEST_CASE("schedule blocks") {
    CHECK(example1_block(0) == 0);
    for (std::uint64_t t = 1; t <= 3; ++t) CHECK(example1_block(t) == 1);
    for (std::uint64_t t = 4; t <= 12; ++t) CHECK(example1_block(t) == 2);
    CHECK(example1_block(13) == 3);
    for (int n = 1; n < 8; ++n) {
        const auto start = static_cast<std::uint64_t>((std::pow(3.0, 2 * n) - 1) / 2);
        CHECK(example1_block(start) % 2 == 0);
        CHECK(example1_block(start - 1) % 2 == 1);
    }
}

TEST_CASE("schedule rules") {
    const auto u = example1_policy(100);
    CHECK(u.rule(0)(0, 1) == 1.0); // leave s1 after one period
    for (std::size_t t = 1; t <= 2; ++t) CHECK(u.rule(t)(1, 1) == 1.0);
    CHECK(u.rule(3)(1, 0) == 1.0); // back to s1 for block 2
    const auto e1 = builtin("example1");
    const auto p1 = t_step_distribution(e1, u, 0, 1);
    CHECK(p1[e1.pair(1, 1)] == 1.0);
}

TEST_CASE("example1 sequence follows the blocks") {
    const auto e1 = builtin("example1");
    const std::size_t horizon = (59049 - 1) / 2; // (3^10 - 1) / 2
    const auto seq = cvar_sequence(e1, example1_policy(horizon), 0, horizon, 0.5);
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        REQUIRE(seq.per_step[t] == (example1_block(t) % 2 == 0 ? 2.0 : -2.0));
        sum += seq.per_step[t];
        REQUIRE(sum == example1_cumulative(t));
        REQUIRE(seq.cesaro[t] == doctest::Approx(sum / static_cast<double>(t + 1)));
    }
    // at the end of block k the average is (1 - (-3)^(k+1)) / (3^(k+1) - 1), near +-1
    CHECK(seq.cesaro.back() == doctest::Approx((1 - std::pow(-3.0, 10)) / (std::pow(3.0, 10) - 1)));
    const auto est = limsup_liminf_estimate(seq, horizon / 2);
    CHECK(est.limsup < 1.0 + 1e-9);
    CHECK(est.liminf > -1.0 - 1e-9);
    CHECK_THROWS_AS(cvar_sequence(e1, example1_policy(10), 0, 11, 0.5), InputError);
}

TEST_CASE("stationary policies converge") {
    const auto mdp = random_instance(21, 4, 2);
    const auto d = StationaryPolicy::uniform(mdp);
    const double target = cvar_right(reward_distribution(mdp, stationary_distribution(mdp, d)), 0.6);
    const auto seq = cvar_sequence(mdp, d, 0, 40001, 0.6);
    CHECK(seq.per_step[1000] == doctest::Approx(target).epsilon(1e-9));
    // the averages approach the limit like 1/t
    const auto est = limsup_liminf_estimate(seq, 20000);
    CHECK(std::abs(est.limsup - target) < 1e-3);
    CHECK(std::abs(est.liminf - target) < 1e-3);
}

TEST_CASE("constant sequences") {
    const auto mdp = fixtures::one_state({3.0, 3.0});
    const auto seq = cvar_sequence(mdp, StationaryPolicy::uniform(mdp), 0, 50, 0.9);
    for (double v : seq.per_step) CHECK(v == 3.0);
    const auto est = limsup_liminf_estimate(seq, 50);
    CHECK(est.limsup == 3.0);
    CHECK(est.liminf == 3.0);
    CHECK_THROWS_AS(limsup_liminf_estimate(seq, 51), InputError);
    CHECK_THROWS_AS(limsup_liminf_estimate(seq, 0), InputError);
}

TEST_CASE("Monte Carlo against the exact sequence") {
    const auto cst = fixtures::one_state({4.0});
    const auto exact = monte_carlo_eval(cst, StationaryPolicy::uniform(cst), 0, 10, 50, 1, 0.5);
    for (double v : exact.cvar) CHECK(v == 4.0);

    const auto e2 = builtin("example2");
    const auto d = solve_cvar(e2, {0.7, 0.0}).policy;
    const auto seq = cvar_sequence(e2, d, 0, 200, 0.7);
    const auto mc = monte_carlo_eval(e2, d, 0, 200, 100000, 2024, 0.7);
    // sampling error of one step is about 0.2 here
    double worst = 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
        worst = std::max(worst, std::abs(mc.cvar[t] - seq.per_step[t]));
        total += std::abs(mc.cvar[t] - seq.per_step[t]);
    }
    CHECK(worst < 1.0);
    CHECK(total / 200 < 0.25);

    const auto a = monte_carlo_eval(e2, d, 1, 30, 2000, 9, 0.7, 1);
    const auto b = monte_carlo_eval(e2, d, 1, 30, 2000, 9, 0.7, 4);
    CHECK(a.counts == b.counts);
    CHECK(a.cvar == b.cvar);
}

TEST_CASE("gap bound") {
    const auto e2 = builtin("example2");
    const auto d = solve_cvar(e2, {0.7, 0.0}).policy;
    CHECK(lemma2_gap(e2, d, 0, 5, 0.7).holds());
    const auto far = lemma2_gap(e2, d, 0, 400, 0.7);
    CHECK(far.gap < 1e-9);
    CHECK(far.bound < 1e-9);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mdp = random_instance(seed, 3, 2);
        const auto g = lemma2_gap(mdp, StationaryPolicy::uniform(mdp), 0, 0, 0.5);
        CHECK(g.holds());
    }
}

TEST_CASE("sequence CSV") {
    const auto mdp = fixtures::one_state({1.5});
    std::ostringstream out;
    write_sequence_csv(cvar_sequence(mdp, StationaryPolicy::uniform(mdp), 0, 2, 0.5), out);
    CHECK(out.str() == "t,cvar_t,cesaro_t\n0,1.5,1.5\n1,1.5,1.5\n");
}

}
