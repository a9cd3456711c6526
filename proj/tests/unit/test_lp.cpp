#include "lrcvar/errors.hpp"
#include "lrcvar/lp.hpp"
#include "lrcvar/lp_builders.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

using namespace lrcvar;

TEST_SUITE("lp") {

TEST_CASE("tiny programs") {
    LinearProgram lp;
    const auto z = lp.add_variable("z", -kInfinity, kInfinity);
    lp.set_sense(Sense::maximize);
    lp.set_objective(z, 1.0);
    lp.add_constraint("cap", {{z, 1.0}}, Relation::le, 3.0);
    const auto s = solve(lp);
    CHECK(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(3.0));

    LinearProgram free;
    const auto f = free.add_variable("z", 0.0, kInfinity);
    free.set_sense(Sense::maximize);
    free.set_objective(f, 1.0);
    CHECK(solve(free).status == LpStatus::unbounded);

    LinearProgram inf;
    const auto v = inf.add_variable("v");
    inf.add_constraint("low", {{v, 1.0}}, Relation::ge, 2.0);
    inf.add_constraint("high", {{v, 1.0}}, Relation::le, 1.0);
    CHECK(solve(inf).status == LpStatus::infeasible);
}

TEST_CASE("a textbook program") {
    // max 3a + 5b, a <= 4, 2b <= 12, 3a + 2b <= 18 -> (2, 6), 36
    LinearProgram lp;
    const auto a = lp.add_variable("a"), b = lp.add_variable("b");
    lp.set_sense(Sense::maximize);
    lp.set_objective(a, 3);
    lp.set_objective(b, 5);
    lp.add_constraint("c1", {{a, 1}}, Relation::le, 4);
    lp.add_constraint("c2", {{b, 2}}, Relation::le, 12);
    lp.add_constraint("c3", {{a, 3}, {b, 2}}, Relation::le, 18);
    const auto s = solve(lp);
    CHECK(s.objective == doctest::Approx(36));
    CHECK(s.values[a] == doctest::Approx(2));
    CHECK(s.values[b] == doctest::Approx(6));
    CHECK(s.vertex);
    CHECK(s.max_violation < 1e-9);
}

TEST_CASE("bounds, equalities and redundant rows") {
    // min x + y with x in [1, 3], y <= 2 free below, x + y = 2 written twice
    LinearProgram lp;
    const auto x = lp.add_variable("x", 1.0, 3.0);
    const auto y = lp.add_variable("y", -kInfinity, 2.0);
    lp.set_objective(x, 2.0);
    lp.set_objective(y, 1.0);
    lp.add_constraint("sum", {{x, 1}, {y, 1}}, Relation::eq, 2);
    lp.add_constraint("sum2", {{x, 2}, {y, 2}}, Relation::eq, 4);
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.values[x] == doctest::Approx(1.0));
    CHECK(s.values[y] == doctest::Approx(1.0));
    CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("model checks") {
    LinearProgram lp;
    lp.add_variable("x");
    CHECK_THROWS_AS(lp.add_variable("x"), InputError);
    CHECK_THROWS_AS(lp.add_constraint("c", {{5, 1.0}}, Relation::le, 1), InputError);
    CHECK_THROWS_AS(lp.variable("nope"), InputError);
}

TEST_CASE("LP file format") {
    LinearProgram lp;
    const auto a = lp.add_variable("x_0_0");
    const auto y = lp.add_variable("y", -5, 7);
    const auto z = lp.add_variable("z2", -kInfinity, kInfinity);
    lp.set_sense(Sense::maximize);
    lp.set_objective(z, 1);
    lp.add_constraint("tail_0", {{a, 2.5}, {y, -1}, {z, -1}}, Relation::ge, 0);
    const auto text = to_lp_format(lp);
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("tail_0: 2.5 x_0_0 - 1 y - 1 z2 >= 0") != std::string::npos);
    CHECK(text.find("-5 <= y <= 7") != std::string::npos);
    CHECK(text.find("z2 free") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
    const auto counts = constraint_counts(lp);
    CHECK(counts.structural == 1);
    CHECK(counts.bound_rows == 3); // x >= 0 plus both bounds of y
}

TEST_CASE("dual program on example2") {
    const auto e2 = builtin("example2");
    const auto dual = build_dual_lp(e2, {0.7, 0.0});
    const auto s = solve(dual.lp);
    CHECK(s.objective == doctest::Approx(93.24).epsilon(1e-4));
    // 9 tail rows + 3 balance + 1 normalization, the same with per-pair rows (rewards are distinct)
    CHECK(constraint_counts(dual.lp).structural == 13);
    CHECK(build_dual_lp(e2, {0.7, 0.0}, true).lp.n_constraints() == 13);
    CHECK(dual.endpoints.size() == 9);
    CHECK(build_dual_lp(builtin("endowment"), {0.9, 0.5}, true).lp.n_constraints() == 36 + 7);
}

TEST_CASE("forced one-state programs") {
    const auto mdp = fixtures::one_state({6.0});
    const RiskParams p{0.4, 0.5};
    CHECK(solve(build_dual_lp(mdp, p).lp).objective == doctest::Approx(9.0));
    const auto primal = build_primal_lp(mdp, polytope_vertices(mdp), {0.4, 0.0});
    const auto ps = solve(primal.lp);
    CHECK(ps.objective == doctest::Approx(6.0));
    CHECK(ps.values[primal.y] == doctest::Approx(6.0));
    const auto sp = build_sparsify_lp(mdp, 6.0, p, 0.0);
    const auto ss = solve(sp.lp);
    CHECK(ss.values[sp.x0] == doctest::Approx(0.4));
    CHECK(ss.values[sp.x[0]] == doctest::Approx(1.0));
}

TEST_CASE("primal program") {
    const auto e2 = builtin("example2");
    const auto primal = build_primal_lp(e2, polytope_vertices(e2), {0.7, 0.0});
    const auto s = solve(primal.lp);
    CHECK(s.objective == doctest::Approx(93.24).epsilon(1e-4));
    const double y = s.values[primal.y];
    const auto o = reward_outcomes(e2);
    for (std::size_t q = 0; q < o.size(); ++q) CHECK(s.values[primal.w[q]] == doctest::Approx(std::max(o.reward[q] - y, 0.0)));
}

TEST_CASE("sparsification program on example2") {
    const auto e2 = builtin("example2");
    const auto dual = build_dual_lp(e2, {0.7, 0.0});
    const auto ds = solve(dual.lp);
    std::vector<double> x;
    for (auto i : dual.x) x.push_back(ds.values[i]);
    const double y = var(reward_distribution(e2, x), 0.7, 1e-9);
    const auto sp = build_sparsify_lp(e2, y, {0.7, 0.0}, 1.0);
    const auto s = solve(sp.lp);
    CHECK(s.objective == doctest::Approx(93.24).epsilon(1e-4));
    int nonzero = 0;
    for (auto i : sp.x) nonzero += s.values[i] > 1e-9;
    CHECK(nonzero <= 4);
}

TEST_CASE("average-reward program") {
    const auto e2 = builtin("example2");
    CHECK(solve(build_average_lp(e2, 94.0, {0.7, 0.0}).lp).objective == doctest::Approx(94.0));
    double best = 1e300;
    for (double y : breakpoints(e2).values) best = std::min(best, solve(build_average_lp(e2, y, {0.7, 0.0}).lp).objective);
    CHECK(best == doctest::Approx(93.24).epsilon(1e-4));
    // alpha = 0 at the lowest reward: the classical average-reward optimum
    const auto avg = solve(build_average_lp(e2, 4.0, {0.0, 0.0}).lp).objective;
    double mean_best = 0.0;
    for_each_deterministic_policy(e2, [&](const DeterministicPolicy& d) {
        std::vector<std::vector<double>> rule(3, std::vector<double>(3, 0.0));
        for (std::size_t i = 0; i < 3; ++i) rule[i][d.choice[i]] = 1.0;
        mean_best = std::max(mean_best, fixtures::mean_of(fixtures::stationary_reward_atoms(e2, rule)));
        return true;
    });
    CHECK(avg == doctest::Approx(mean_best).epsilon(1e-9));
}

TEST_CASE("envelope program is convex along the breakpoints") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto mdp = random_instance(seed, 3, 2);
        const auto bp = breakpoints(mdp).values;
        std::vector<double> v;
        for (double y : bp) v.push_back(solve(build_average_lp(mdp, y, {0.6, 0.2}).lp).objective);
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const double t = (bp[i] - bp[i - 1]) / (bp[i + 1] - bp[i - 1]);
            CHECK(v[i] <= (1 - t) * v[i - 1] + t * v[i + 1] + 1e-7);
        }
        const auto env = build_envelope_lp(mdp, bp[0], bp[1], {0.6, 0.2});
        CHECK(solve(env.lp).objective <= std::min(v[0], v[1]) + 1e-7);
    }
}

}
