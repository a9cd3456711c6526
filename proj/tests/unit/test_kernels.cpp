#include "lrcvar/errors.hpp"
#include "lrcvar/kernels.hpp"

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

using namespace lrcvar::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::vector<Isa> available() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (supported(isa)) out.push_back(isa);
    }
    return out;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels match plain loops") {
    const auto& t = table(Isa::scalar);
    std::vector<double> x = {1, 2, 3, 4, 5}, y = {10, 20, 30, 40, 50};
    t.axpy(2.0, x.data(), y.data(), x.size());
    CHECK(y == std::vector<double>{12, 24, 36, 48, 60});
    CHECK(t.dot(x.data(), x.data(), 5) == doctest::Approx(55.0));
    std::vector<double> r = {1, 5, 2, 8, 3};
    CHECK(t.hinge_dot(x.data(), r.data(), 2.5, 5) == doctest::Approx(2 * 2.5 + 4 * 5.5 + 5 * 0.5));
    CHECK(t.dot(x.data(), y.data(), 0) == 0.0);
}

TEST_CASE("every available variant is bit-identical to the scalar reference") {
    std::mt19937_64 rng(11);
    const auto& ref = table(Isa::scalar);
    for (Isa isa : available()) {
        CAPTURE(isa_name(isa));
        const auto& t = table(isa);
        for (std::size_t n = 0; n < 70; ++n) {
            const auto x = random_vector(rng, n);
            const auto r = random_vector(rng, n);
            auto y1 = random_vector(rng, n);
            auto y2 = y1;
            ref.axpy(-0.37, x.data(), y1.data(), n);
            t.axpy(-0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(y1[i], y2[i]));
            REQUIRE(same_bits(ref.dot(x.data(), r.data(), n), t.dot(x.data(), r.data(), n)));
            REQUIRE(same_bits(ref.hinge_dot(x.data(), r.data(), 12.5, n), t.hinge_dot(x.data(), r.data(), 12.5, n)));
        }
    }
}

TEST_CASE("selection") {
    const Isa before = active_isa();
    select_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (!supported(isa)) CHECK_THROWS_AS(select_isa(isa), lrcvar::InputError);
    }
    select_isa(before);
    CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("wrappers dispatch to the active variant") {
    const Isa before = active_isa();
    std::mt19937_64 rng(5);
    const auto x = random_vector(rng, 33), w = random_vector(rng, 33);
    select_isa(Isa::scalar);
    const double ref = hinge_dot(w, x, 0.0);
    for (Isa isa : available()) {
        select_isa(isa);
        CHECK(same_bits(hinge_dot(w, x, 0.0), ref));
    }
    select_isa(before);
}

}
