#include "lrcvar/errors.hpp"
#include "lrcvar/risk.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace lrcvar;

namespace {

const DiscreteDistribution kCoin({{-2.0, 0.5}, {2.0, 0.5}});

std::vector<std::pair<double, double>> pairs_of(const DiscreteDistribution& d) {
    std::vector<std::pair<double, double>> out;
    for (const auto& a : d.atoms()) out.emplace_back(a.value, a.prob);
    return out;
}

} // namespace

TEST_SUITE("risk") {

TEST_CASE("canonical form") {
    const DiscreteDistribution d({{3.0, 0.25}, {1.0, 0.5}, {3.0, 0.25}, {7.0, 0.0}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0] == Atom{1.0, 0.5});
    CHECK(d.atoms()[1] == Atom{3.0, 0.5});
    CHECK(DiscreteDistribution({{1.0, 1.0}, {2.0, -1e-12}}).size() == 1);
    CHECK_THROWS_AS(DiscreteDistribution({{1.0, 0.5}}), InputError);
    CHECK_THROWS_AS(DiscreteDistribution({{1.0, 1.1}, {2.0, -0.1}}), InputError);
    CHECK(d.cdf(1.0) == 0.5);
    CHECK(d.cdf(0.9) == 0.0);
}

TEST_CASE("value at risk") {
    CHECK(var(kCoin, 0.5) == -2.0);
    CHECK(var(kCoin, 0.0) == -2.0);
    CHECK(var(kCoin, 0.51) == 2.0);
    CHECK(var(DiscreteDistribution::dirac(7.0), 0.3) == 7.0);
    // within tolerance the lower value is kept
    CHECK(var(DiscreteDistribution({{0.0, 0.5 - 1e-12}, {1.0, 0.5 + 1e-12}}), 0.5, 1e-9) == 0.0);
}

TEST_CASE("right and left CVaR") {
    CHECK(cvar_right(kCoin, 0.5) == 2.0);
    CHECK(cvar_left(kCoin, 0.5) == -2.0);
    CHECK(cvar_right(kCoin, 0.0) == 0.0);
    CHECK(cvar_right(DiscreteDistribution::dirac(4.5), 0.9) == 4.5);
    CHECK(cvar_left(DiscreteDistribution::dirac(4.5), 0.2) == 4.5);
    CHECK(cvar_right(kCoin, 0.75) == 2.0);
    CHECK(cvar_right(kCoin, 0.25) == doctest::Approx((0.25 * -2 + 0.5 * 2) / 0.75));
    CHECK_THROWS_AS(cvar_right(kCoin, 1.0), InputError);
}

TEST_CASE("Rockafellar-Uryasev objective") {
    const auto two = DiscreteDistribution::dirac(2.0);
    CHECK(ru_objective(two, 0.0, 0.5) == 4.0);
    CHECK(ru_objective(two, 2.0, 0.5) == 2.0);
    CHECK(ru_objective(kCoin, -2.0, 0.5) == 2.0);
    const auto m = cvar_via_ru(kCoin, 0.5);
    CHECK(m.value == 2.0);
    CHECK(m.argmin == -2.0);
    CHECK(cvar_via_ru(DiscreteDistribution::dirac(3.0), 0.4).argmin == 3.0);
}

TEST_CASE("random distributions agree with the quantile integral") {
    std::mt19937_64 rng(99);
    for (int n = 0; n < 300; ++n) {
        const auto d = fixtures::random_distribution(rng, 1 + n % 9);
        for (double alpha : {0.0, 0.1, 0.33, 0.5, 0.8, 0.95}) {
            const double ref = fixtures::cvar_by_quantiles(pairs_of(d), alpha);
            CHECK(cvar_right(d, alpha) == doctest::Approx(ref).epsilon(1e-12));
            CHECK(cvar_via_ru(d, alpha).value == doctest::Approx(ref).epsilon(1e-10));
            if (alpha > 0.0) {
                CHECK((1 - alpha) * cvar_right(d, alpha) + alpha * cvar_left(d, alpha) ==
                      doctest::Approx(d.mean()).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("reward laws of occupation measures") {
    const auto mdp = fixtures::one_state({5.0, 9.0});
    const auto d = reward_distribution(mdp, OccupationMeasure{{1.0, 0.0}});
    CHECK(d.atoms() == std::vector<Atom>{{5.0, 1.0}});
    const auto en = builtin("endowment");
    const auto o = reward_outcomes(en);
    CHECK(o.size() == 36); // two reachable next states per pair
    const auto mixed = reward_distribution(mdp, OccupationMeasure{{0.25, 0.75}});
    CHECK(mixed.mean() == doctest::Approx(8.0));
}

TEST_CASE("saddle function") {
    const auto mdp = fixtures::one_state({5.0, 9.0});
    const RiskParams p{0.6, 0.0};
    CHECK(saddle_value(mdp, OccupationMeasure{{1.0, 0.0}}, 5.0, p) == 5.0);
    const OccupationMeasure x{{0.5, 0.5}};
    const double lo = 5.0;
    CHECK(saddle_value(mdp, x, lo, p) == doctest::Approx(lo + (7.0 - lo) / 0.4));
    // minimum over the support equals the CVaR of the law
    double best = 1e300;
    for (double y : breakpoints(mdp).values) best = std::min(best, saddle_value(mdp, x, y, p));
    CHECK(best == doctest::Approx(cvar_right(reward_distribution(mdp, x), 0.6)));
    CHECK(saddle_value(mdp, x, 9.0, {0.6, 0.5}) == doctest::Approx(9.0 + 0.5 * 7.0));
}

TEST_CASE("breakpoints") {
    const auto bp = breakpoints(builtin("example2"));
    CHECK(bp.values == std::vector<double>{4, 5, 13, 39, 69, 70, 71, 77, 94});
    CHECK(bp.delta == 1.0);
    CHECK(bp.lower == 4.0);
    CHECK(bp.upper == 94.0);
    CHECK(breakpoints(fixtures::one_state({3.0, 3.0})).values.size() == 1);

    // endowment: enumerate the reward formula directly
    const double level[] = {0.2, 0.5, 0.8}, ret[] = {-0.05, 0.1};
    std::vector<double> expected;
    for (double w : level) {
        for (double a : level) {
            for (double r : ret) {
                double v = 1000.0 * ((1 - a) * 0.02 + a * r - 0.005 * std::abs(a - w));
                expected.push_back(std::round(v * 1e6) / 1e6);
            }
        }
    }
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    const auto eb = breakpoints(builtin("endowment"));
    CHECK(eb.values == expected);
    CHECK(std::binary_search(eb.values.begin(), eb.values.end(), 84.0));
    CHECK(std::binary_search(eb.values.begin(), eb.values.end(), -36.0));
    CHECK_FALSE(std::binary_search(eb.values.begin(), eb.values.end(), -34.0));
}

TEST_CASE("parameter checks") {
    CHECK_THROWS_AS((RiskParams{1.0, 0.0}.check()), InputError);
    CHECK_THROWS_AS((RiskParams{-0.1, 0.0}.check()), InputError);
    CHECK_THROWS_AS((RiskParams{0.5, -1.0}.check()), InputError);
    CHECK_NOTHROW((RiskParams{0.0, 0.0}.check()));
}

}
