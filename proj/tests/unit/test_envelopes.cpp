#include <cmath>
#include <vector>

#include "doctest.h"
#include "sbk/envelopes.hpp"
#include "support.hpp"

using namespace sbk;

TEST_CASE("sharp envelope values") {
    CHECK(sharp_envelope({0.0, 1.0}, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sharp_envelope({1.0, 1.0}, 1.0, 1.0, 3.0) == doctest::Approx(1.0 / 89.0).epsilon(1e-14));
    CHECK(sharp_envelope({1.0, 1.0}, 2.0, 0.4, 5.0) == sharp_envelope({1.0, 1.0}, 2.0, 5.0, 0.4));
    CHECK_THROWS_AS(sharp_envelope({1.0, 2.0}, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("regime envelope selection") {
    const KernelParams p{1.0, 1.0};
    auto e = regime_envelope(p, 0.5, 0.6);
    CHECK(e.value == 1.0);
    CHECK(regime_name(e.regime_tag) == "near-diag-small");
    e = regime_envelope(p, 10.0, 10.5);
    CHECK(rel_err(e.value, 1.0 / 105.0) <= 1e-15);
    CHECK(regime_name(e.regime_tag) == "near-diag-large");
    e = regime_envelope(p, 0.1, 5.0);
    CHECK(rel_err(e.value, std::pow(4.9, -4.0)) <= 1e-14);
    CHECK(regime_name(e.regime_tag) == "off-diag-small");
    e = regime_envelope(p, 1.0, 10.0);
    CHECK(e.regime_tag == Regime::off_diag_large_a);
    CHECK(rel_err(e.value, std::pow(9.0, -4.0)) <= 1e-14);
    e = regime_envelope(p, 10.0, 12.0);
    CHECK(e.regime_tag == Regime::off_diag_large_b);
    CHECK(rel_err(e.value, 1.0 / 120.0 / 4.0) <= 1e-14);
    // (r-s)^2 = 1 exactly: boundary points take the first regime containing them
    CHECK(regime_envelope(p, 0.5, 1.5).regime_tag == Regime::near_diag_small);
    CHECK(regime_envelope(p, 2.0, 3.0).regime_tag == Regime::near_diag_large);
}

TEST_CASE("weight functions") {
    CHECK(rel_err(weight_f(1.0, 4.0, 1.0, 1.0), 0.16) <= 1e-15);
    CHECK(weight_f(1.0, 1.0, 4.0, 1.0) == 1.0);
    CHECK(weight_f(1.0, 2.0, 2.0, 1.0) == 1.0);
    CHECK(weight_f(0.0, 4.0, 1.0, 1.0) == 1.0);
    CHECK(rel_err(weight_f_smooth(1.0, 4.0, 1.0, 1.0), 4.0 / 36.0) <= 1e-15);
    CHECK_THROWS_AS(weight_f(-0.1, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("3G ratio at zeta = 0 is the plain kernel quotient") {
    const Kernel k(KernelParams(0.0, 1.0));
    const double r = 0.7, s = 2.0, z = 1.3, t = 0.4, tau = 0.9;
    const auto g = three_g_ratio(k, r, s, z, t, tau);
    const double a = k(t, r, z), b = k(tau, z, s), c = k(t + tau, r, s);
    CHECK(rel_err(g.min_form, std::min(a, b) / c) <= 1e-12);
    CHECK(rel_err(g.product_form, a * b / (c * (a + b))) <= 1e-12);
    CHECK_THROWS_AS(three_g_ratio(Kernel(KernelParams(-0.2, 1.0)), r, s, z, t, tau), DomainError);
}

TEST_CASE("comparability items") {
    const Kernel k(KernelParams(0.5, 1.0));
    ComparabilityPoint pt;
    pt.z = 0.3;
    pt.s = 2.0;
    CHECK(comparability_check(ComparabilityItem::item1, k, pt) == doctest::Approx(1.0).epsilon(1e-15));
    pt.tau = 2.0;
    pt.C = 0.25;
    CHECK(rel_err(comparability_check(ComparabilityItem::item1, k, pt), k(2.0, 0.3, 2.0) / k(1.0, 0.3, 2.0)) <=
          1e-13);
    pt.tau = 5.0;
    CHECK_THROWS_AS(comparability_check(ComparabilityItem::item1, k, pt), HypothesisError);
    pt.tau = 1.0;
    pt.z = 1.5;
    CHECK_THROWS_AS(comparability_check(ComparabilityItem::item2b, k, pt), HypothesisError);
    pt.z = 0.5;
    CHECK(rel_err(comparability_check(ComparabilityItem::item2c, k, pt), k(1.0, 0.5, 2.0) * 4.0) <= 1e-13);
    pt.r = 3.0;
    CHECK_THROWS_AS(comparability_check(ComparabilityItem::item4, k, pt), HypothesisError);
    pt.r = 0.5;
    CHECK(rel_err(comparability_check(ComparabilityItem::item4, k, pt), k(1.0, 1.0, 2.0) / k(1.0, 0.5, 2.0)) <=
          1e-13);
    pt.z = 2.1;
    CHECK_THROWS_AS(comparability_check(ComparabilityItem::item5, k, pt), HypothesisError);
    CHECK_THROWS_AS(comparability_check(ComparabilityItem::item4, Kernel(KernelParams(0.5, 2.0)), pt),
                    DomainError);
    CHECK(parse_comparability_item("4min") == ComparabilityItem::item4_min);
    CHECK(comparability_item_name(ComparabilityItem::item2a) == "2a");
    CHECK_THROWS_AS(parse_comparability_item("6"), DomainError);
}

TEST_CASE("alpha = 2 far-field items use rate 1/16") {
    const Kernel k(KernelParams(1.0, 2.0));
    ComparabilityPoint pt;
    pt.tau = 0.5;
    pt.z = 1.0;
    pt.s = 4.0;
    const double env = std::pow(0.5, -0.5) * std::exp(-16.0 / 8.0) / (0.5 + 16.0);
    CHECK(rel_err(comparability_check(ComparabilityItem::item2b, k, pt), k(0.5, 1.0, 4.0) / env) <= 1e-13);
}

TEST_CASE("Gaussian rate fit brackets the kernel") {
    std::vector<KernelSample> samples;
    for (double t : {0.1, 1.0, 10.0})
        for (double r : {0.1, 1.0, 5.0})
            for (double s : {0.2, 2.0, 8.0}) samples.push_back({t, r, s, log_p2(1.0, t, r, s)});
    const auto fit = fit_gaussian_rates(1.0, GaussianForm::factored_rate, samples);
    CHECK(fit.c_upper >= 4.0);
    CHECK(fit.c_lower <= 4.0);
    CHECK_THROWS_AS(fit_gaussian_rates(1.0, GaussianForm::factored_rate, {}), DomainError);
}
