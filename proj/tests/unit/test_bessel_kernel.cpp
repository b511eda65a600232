#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbk/bessel_kernel.hpp"
#include "support.hpp"

using namespace sbk;

TEST_CASE("p2 against the Bessel definition") {
    // mpmath, tests/oracles/mpmath_oracles.py
    CHECK(rel_err(p2(0.3, 1.0, 1.0, 2.0), 0.21672563741315598272) <= 1e-13);
    CHECK(rel_err(p2(1.0, 0.5, 2.0, 3.0), 0.040328206299938102583) <= 1e-13);
    CHECK(rel_err(p2(1.0, 1.0, 1.0, 1.0), 0.17831791741872946764) <= 1e-13);
    CHECK(rel_err(p2(3.0, 0.01, 50.0, 50.1), 1.3976159702761285747e-10) <= 1e-11);
}

TEST_CASE("p2 at zeta = 1 is the elementary closed form") {
    const double expected = (1.0 - std::exp(-1.0)) / (2.0 * std::sqrt(std::numbers::pi));
    CHECK(rel_err(p2(1.0, 1.0, 1.0, 1.0), expected) <= 1e-14);
    CHECK(rel_err(p2(1.0, 1.0, 1.0, 1.0), 0.1783179174187295) <= 1e-14);
    for (double t : {0.01, 0.3, 1.0, 7.0})
        for (double r : {0.05, 1.0, 4.0})
            for (double s : {0.02, 0.9, 6.0}) {
                CAPTURE(t);
                CAPTURE(r);
                CAPTURE(s);
                const double a = p2(1.0, t, r, s);
                const double b = p2_zeta1_closed(t, r, s);
                if (std::isnormal(a) && std::isnormal(b)) CHECK(rel_err(a, b) <= 1e-11);
            }
}

TEST_CASE("p2 at zeta = 0 is the reflected Gaussian") {
    const double t = 0.7, r = 0.4, s = 1.3;
    const double g = (std::exp(-(r - s) * (r - s) / (4 * t)) + std::exp(-(r + s) * (r + s) / (4 * t))) /
                     std::sqrt(4 * std::numbers::pi * t);
    CHECK(rel_err(p2(0.0, t, r, s), g) <= 1e-13);
}

TEST_CASE("p2 symmetry and log consistency") {
    for (double zeta : {-0.4, 0.0, 0.5, 2.5})
        for (double r : {1e-3, 0.7, 20.0})
            for (double s : {2e-3, 1.1, 25.0}) {
                CHECK(p2(zeta, 0.9, r, s) == p2(zeta, 0.9, s, r));
                CHECK(log_p2(zeta, 0.9, r, s) == log_p2(zeta, 0.9, s, r));
                const double v = p2(zeta, 0.9, r, s);
                if (std::isnormal(v)) CHECK(rel_err(std::log(v), log_p2(zeta, 0.9, r, s)) <= 1e-12);
            }
    CHECK(p2(1.0, 1e-4, 1.0, 100.0) == 0.0);
    CHECK(std::isfinite(log_p2(1.0, 1e-4, 1.0, 100.0)));
}

TEST_CASE("p2 domain errors") {
    CHECK_THROWS_AS(p2(-0.5, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(p2(1.0, 0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(p2(1.0, 1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(p2(1.0, 1.0, 1.0, std::nan("")), DomainError);
}

TEST_CASE("Gaussian envelope forms") {
    CHECK(p2_gaussian_envelope(1.0, 1.0, 1.0, 1.0, 4.0, GaussianForm::factored_rate) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p2_gaussian_envelope(1.0, 1.0, 1.0, 1.0, 4.0, GaussianForm::product_rate) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p2_gaussian_envelope(3.0, 1.0, 1.0, 1.0, 4.0, GaussianForm::product_rate) ==
          doctest::Approx(0.125).epsilon(1e-15));
    CHECK(p2_gaussian_envelope(0.0, 4.0, 1.0, 5.0, 4.0, GaussianForm::product_rate) ==
          doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(parse_gaussian_form("product-rate") == GaussianForm::product_rate);
    CHECK(parse_gaussian_form("factored") == GaussianForm::factored_rate);
    CHECK_THROWS_AS(parse_gaussian_form("other"), DomainError);
    CHECK_THROWS_AS(p2_gaussian_envelope(1.0, 1.0, 1.0, 1.0, 0.0, GaussianForm::product_rate),
                    DomainError);
}

TEST_CASE("p2 normalization and Chapman-Kolmogorov") {
    for (double zeta : {-0.4, 0.0, 0.5, 1.0, 3.0})
        for (double r : {1e-3, 1.0, 30.0}) {
            CAPTURE(zeta);
            CAPTURE(r);
            CHECK(normalization_residual(zeta, 1.0, r) <= 1e-8);
        }
    CHECK(chapman_residual(1.0, 0.5, 1.5, 1.0, 2.0) <= 1e-8);
    CHECK(chapman_residual(-0.3, 1.0, 0.2, 0.1, 0.4) <= 1e-8);
    CHECK(chapman_residual(2.5, 3.0, 3.0, 5.0, 1.0) <= 1e-8);
}
