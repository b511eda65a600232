#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbk/bessel_kernel.hpp"
#include "sbk/subordinated_kernel.hpp"
#include "support.hpp"

using namespace sbk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("KernelParams validation") {
    CHECK_NOTHROW(KernelParams(-0.49, 0.1));
    CHECK_THROWS_AS(KernelParams(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(KernelParams(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(KernelParams(1.0, 2.1), DomainError);
    CHECK(KernelParams(1.0, 1.5).beta() == 0.75);
    CHECK_FALSE(KernelParams(1.0, 2.0).subordinated());
}

TEST_CASE("alpha = 1 closed form, elementary values") {
    CHECK(rel_err(p_alpha1_closed(0.0, 1.0, 1.0, 1.0), 6.0 / (5.0 * kPi)) <= 1e-14);
    CHECK(rel_err(p_alpha1_closed(1.0, 1.0, 1.0, 1.0), 4.0 / (5.0 * kPi)) <= 1e-14);
    CHECK(rel_err(p_alpha1_closed(1.0, 2.0, 1.0, 3.0), 8.0 / (160.0 * kPi)) <= 1e-14);
    CHECK(rel_err(Kernel(KernelParams(1.0, 1.0))(1.0, 1.0, 1.0), 0.25464790894703249) <= 1e-15);
    CHECK(rel_err(std::exp(log_p_alpha1_closed(1.0, 2.0, 1.0, 3.0)), 1.0 / (20.0 * kPi)) <= 1e-13);
}

TEST_CASE("subordinated kernel against mpmath quadrature") {
    // mpmath, tests/oracles/mpmath_oracles.py
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    CHECK(rel_err(p_alpha({0.5, 1.0}, 1.0, 1.0, 1.0, cfg), 0.33552199437243954915) <= 1e-10);
    CHECK(rel_err(p_alpha1_closed(0.5, 1.0, 1.0, 1.0), 0.33552199437243954915) <= 1e-13);
    CHECK(rel_err(p_alpha({2.5, 1.0}, 0.3, 0.7, 2.0, cfg), 0.0050007908789699061723) <= 1e-10);
    CHECK(rel_err(p_alpha({0.5, 1.5}, 1.0, 2.0, 0.3, cfg), 0.14306651505180239118) <= 1e-10);
    CHECK(rel_err(p_alpha({1.0, 1.5}, 1.0, 2.0, 0.3, cfg), 0.084546046544118482979) <= 1e-10);
    CHECK(rel_err(p_alpha({-0.3, 0.5}, 2.0, 1.0, 3.0, cfg), 0.099224331677001481718) <= 1e-9);
}

TEST_CASE("quadrature agrees with the alpha = 1 closed form") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    for (double zeta : {-0.4, 0.0, 0.5, 1.0, 3.0})
        for (double r : {0.01, 1.0, 10.0})
            for (double s : {0.05, 1.0, 30.0}) {
                CAPTURE(zeta);
                CAPTURE(r);
                CAPTURE(s);
                const double a = p_alpha({zeta, 1.0}, 0.7, r, s, cfg);
                const double b = p_alpha1_closed(zeta, 0.7, r, s);
                CHECK(rel_err(a, b) <= 1e-9);
            }
}

TEST_CASE("scaling reduction") {
    const auto red = scaling_reduce({1.0, 1.0}, 2.0, 1.0, 3.0);
    CHECK(red.r1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(red.s1 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(red.prefactor == doctest::Approx(0.125).epsilon(1e-15));
    const auto half = scaling_reduce({0.0, 0.5}, 4.0, 1.0, 1.0);
    CHECK(half.r1 == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(half.prefactor == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    const KernelParams p{0.7, 1.3};
    const auto sc = scaling_reduce(p, 5.0, 0.8, 2.2);
    CHECK(rel_err(p_alpha(p, 5.0, 0.8, 2.2), sc.prefactor * p_alpha(p, 1.0, sc.r1, sc.s1)) <= 1e-12);
}

TEST_CASE("alpha = 2 is the Bessel heat kernel") {
    CHECK(p_alpha({1.0, 2.0}, 1.0, 1.0, 1.0) == p2(1.0, 1.0, 1.0, 1.0));
    CHECK(Kernel(KernelParams(1.0, 2.0)).tag() == "alpha2");
    CHECK(Kernel(KernelParams(1.0, 1.0)).tag() == "closed-form");
    CHECK(Kernel(KernelParams(1.0, 1.0), Method::quadrature).tag() == "quadrature");
    CHECK(Kernel(KernelParams(1.0, 0.5)).tag() == "quadrature");
    CHECK_THROWS_AS(Kernel(KernelParams(1.0, 0.5), Method::closed_form), DomainError);
    CHECK(parse_method("closed") == Method::closed_form);
    CHECK_THROWS_AS(parse_method("bogus"), DomainError);
}

TEST_CASE("symmetry and positivity") {
    for (double alpha : {0.4, 1.0, 1.7}) {
        const Kernel k(KernelParams(0.3, alpha));
        CHECK(k(0.5, 0.2, 4.0) == k(0.5, 4.0, 0.2));
        CHECK(k(0.5, 0.2, 4.0) > 0.0);
        CHECK(rel_err(std::log(k(0.5, 0.2, 4.0)), k.log_value(0.5, 0.2, 4.0)) <= 1e-12);
    }
}

TEST_CASE("far field tail") {
    const KernelParams p{1.0, 1.0};
    const double K = far_field_constant(p);
    const double s = 1e5;
    CHECK(rel_err(p_alpha1_closed(1.0, 1.0, 1.0, s), K * std::pow(s, -(2.0 + 1.0 + 1.0))) <= 1e-3);
}

TEST_CASE("normalization and Chapman-Kolmogorov") {
    CHECK(normalization_residual(KernelParams(0.0, 1.0), 1.0, 1.0) <= 1e-7);
    CHECK(normalization_residual(KernelParams(1.0, 1.5), 1.0, 0.5) <= 1e-7);
    CHECK(chapman_residual(KernelParams(1.0, 1.0), 0.5, 0.5, 1.0, 2.0) <= 1e-7);
}

TEST_CASE("quadrature budget exhaustion") {
    QuadratureConfig cfg;
    cfg.max_panels = 16;
    cfg.rel_tol = 1e-14;
    CHECK_THROWS_AS(p_alpha({0.3, 0.7}, 1.0, 1.0, 2.0, cfg), QuadratureError);
    cfg.max_panels = 1;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
