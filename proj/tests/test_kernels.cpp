#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "xicor/kernels.hpp"

using namespace xicor;

namespace {

RankData from_y_prime(std::vector<double> y) {
    std::vector<std::pair<double, double>> pairs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) pairs[i] = {static_cast<double>(i), y[i]};
    return reorder_by_x(Sample(std::move(pairs)), 0);
}

}  // namespace

TEST_CASE("kernel_h1 value table") {
    CHECK(kernel_h1({0, 1}, {0.5, 0}) == 1);
    CHECK(kernel_h1({1, 1}, {0.5, 0}) == 0);
    CHECK(kernel_h1({1, 0}, {0.5, 0}) == 1);
    CHECK(kernel_h1({1, 0}, {2.0, 0}) == 0);
    CHECK(kernel_h1({0, 1}, {0.0, 0}) == 0);   // t1 <= both
}

TEST_CASE("kernel_h2 value table") {
    CHECK(kernel_h2(0, 1, -1) == 1);
    CHECK(kernel_h2(0, -1, -1) == 0);
    CHECK(kernel_h2(0, 1, 0) == 0);
}

TEST_CASE("constant kernel normalizes to its value") {
    PairKernel ones{2, 1.0, [](const YPair*) { return 1.0; }};
    const auto res = v_statistic(ones, from_y_prime({3, 1, 4, 1, 5}));
    CHECK(res.value == Catch::Approx(1.0));
    CHECK(res.terms == 16);
}

TEST_CASE("h1 V-statistic on monotone n = 3") {
    // pairs (1,2), (2,3): only (s,t) = ((1,2),(2,3)) contributes
    const auto rd = from_y_prime({1, 2, 3});
    CHECK(v_statistic(h1_kernel(), rd).value == Catch::Approx(0.25));
    CHECK(v_statistic_h1(rd).value == Catch::Approx(0.25));
}

TEST_CASE("lifted h2 matches the brute-force triple sum") {
    const auto rd = from_y_prime({1, 2, 3, 4});
    const double brute = oracle::v_statistic_brute(
        [](const YPair* a) {
            return static_cast<double>(kernel_h2(a[0].first, a[1].first, a[2].first));
        },
        3, rd.y_prime);
    CHECK(v_statistic(h2_lifted_kernel(), rd).value == Catch::Approx(brute));
    CHECK(v_statistic_h2(rd).value == Catch::Approx(brute));
}

TEST_CASE("fast V-statistics agree with direct summation on random data") {
    Rng rng(31);
    for (int rep = 0; rep < 25; ++rep) {
        const Sample s = oracle::random_tied_sample(rng, 3 + rng.index(27));
        const RankData rd = reorder_by_x(s, rng.u64());
        const double h1_brute = oracle::v_statistic_brute(
            [](const YPair* a) { return static_cast<double>(kernel_h1(a[0], a[1])); }, 2,
            rd.y_prime);
        const double h2_brute = oracle::v_statistic_brute(
            [](const YPair* a) {
                return static_cast<double>(kernel_h2(a[0].first, a[1].first, a[2].first));
            },
            3, rd.y_prime);
        CHECK(v_statistic_h1(rd).value == Catch::Approx(h1_brute).margin(1e-12));
        CHECK(v_statistic_h2(rd).value == Catch::Approx(h2_brute).margin(1e-12));
        CHECK(v_statistic(h1_kernel(), rd).value == Catch::Approx(h1_brute).margin(1e-12));
        CHECK(v_statistic(h2_lifted_kernel(), rd).value == Catch::Approx(h2_brute).margin(1e-12));
    }
}

TEST_CASE("generic summation guard for high arity") {
    std::vector<double> y(500);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 7);
    try {
        v_statistic(h2_lifted_kernel(), from_y_prime(y));
        FAIL("expected ArityTooLargeForN");
    } catch (const Error& e) {
        CHECK(e.name() == "ArityTooLargeForN");
    }
}

TEST_CASE("decompose_xi identities hold exactly on random tied samples") {
    Rng rng(77);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + rng.index(48);
        const Sample s = oracle::random_tied_sample(rng, n);
        const RankData rd = reorder_by_x(s, rng.u64());
        try {
            const XiDecomposition d = decompose_xi(rd);
            CHECK(d.num_direct == d.num_kernel);
            CHECK(d.den_equal);
            CHECK(static_cast<std::int64_t>(d.den_direct) ==
                  oracle::denominator_brute(rd.y_prime));
        } catch (const Error& e) {
            CHECK(e.name() == "AllYEqual");
        }
    }
}

TEST_CASE("decompose_xi residual on monotone n = 100") {
    std::vector<double> y(100);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i);
    const XiDecomposition d = decompose_xi(from_y_prime(y));
    CHECK(d.residual <= 10.0 / 100.0);
}

TEST_CASE("denominator identity on constant-pairs edge case") {
    const auto rd = from_y_prime({5, 5, 7});
    const XiDecomposition d = decompose_xi(rd);
    CHECK(d.den_equal);
    CHECK(static_cast<std::int64_t>(d.den_direct) == oracle::denominator_brute({5, 5, 7}));
}
