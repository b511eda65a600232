#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbk/mc_oracle.hpp"
#include "sbk/subordinated_kernel.hpp"

using namespace sbk;

TEST_CASE("stable samples are positive and reproducible") {
    const auto a = sample_positive_stable(0.6, 10000, 42);
    const auto b = sample_positive_stable(0.6, 10000, 42);
    const auto c = sample_positive_stable(0.6, 10000, 43);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(std::all_of(a.begin(), a.end(), [](double x) { return x > 0.0 && std::isfinite(x); }));
    CHECK_THROWS_AS(sample_positive_stable(1.0, 10, 1), DomainError);
}

TEST_CASE("beta = 1/2 samples follow the Levy law") {
    // P(S <= x) = erfc(1/(2√x)); median ≈ 1.0990
    auto v = sample_positive_stable(0.5, 200000, 7);
    const double x = 1.0990;
    const double frac = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double y) { return y <= x; })) /
                        static_cast<double>(v.size());
    const double p = std::erfc(1.0 / (2.0 * std::sqrt(x)));
    CHECK(std::abs(p - 0.5) < 1e-4);
    CHECK(std::abs(frac - p) < 4.0 * std::sqrt(0.25 / v.size()));
}

TEST_CASE("Laplace transform estimates") {
    for (double beta : {0.25, 0.5, 0.9}) {
        const auto e = mc_laplace(beta, 1.0, 100000, 11);
        CHECK(e.status == McStatus::ok);
        CHECK(std::abs(e.mean - std::exp(-1.0)) < 4.0 * e.std_error);
    }
    const auto scaled = mc_laplace(0.5, 2.0, 100000, 12, std::pow(3.0, 2.0));
    CHECK(std::abs(scaled.mean - std::exp(-3.0 * std::sqrt(2.0))) < 4.0 * scaled.std_error);
}

TEST_CASE("kernel estimates agree with the alpha = 1 closed form") {
    const double pi = std::numbers::pi;
    const auto a = mc_kernel({0.0, 1.0}, 1.0, 1.0, 1.0, 200000, 20261016);
    CHECK(std::abs(a.mean - 6.0 / (5.0 * pi)) < 3.0 * a.std_error);
    const auto b = mc_kernel({1.0, 1.0}, 1.0, 1.0, 1.0, 200000, 20261016);
    CHECK(std::abs(b.mean - 4.0 / (5.0 * pi)) < 3.0 * b.std_error);
    CHECK(b.n == 200000);
    CHECK(b.seed == 20261016u);
}

TEST_CASE("thread count does not change the estimate") {
    const KernelParams p{0.5, 1.3};
    const auto one = mc_kernel(p, 1.0, 0.5, 1.5, 3 * kMcChunk + 17, 5, 1);
    const auto four = mc_kernel(p, 1.0, 0.5, 1.5, 3 * kMcChunk + 17, 5, 4);
    CHECK(one.mean == four.mean);
    CHECK(one.std_error == four.std_error);
}

TEST_CASE("tiny samples are flagged") {
    const auto e = mc_kernel({0.5, 1.0}, 1.0, 1.0, 1.0, 1, 3);
    CHECK(e.status == McStatus::insufficient_precision);
    CHECK(mc_status_name(e.status) == "insufficient-precision");
    CHECK_THROWS_AS(mc_kernel({0.5, 2.0}, 1.0, 1.0, 1.0, 10, 3), DomainError);
    CHECK_THROWS_AS(mc_kernel({0.5, 1.0}, 1.0, 1.0, 1.0, 0, 3), DomainError);
}
