#include "sbk/bessel_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "radial.hpp"
#include "sbk/specfun.hpp"

namespace sbk {

namespace {

void check_zeta(double zeta) {
    if (!(zeta > -0.5) || !std::isfinite(zeta)) throw DomainError("zeta must be > -1/2");
}

void check_point(double t, double r, double s) {
    require_positive(t, "t");
    require_positive(r, "r");
    require_positive(s, "s");
}

// pref * e^{log_unit}, falling back to a single exponential when either
// factor leaves the floating range.
double combine(double pref, double log_pref, double log_unit) {
    const double unit = std::exp(log_unit);
    const double v = pref * unit;
    if (std::isnormal(pref) && std::isnormal(unit) && std::isnormal(v)) return v;
    return std::exp(log_pref + log_unit);
}

}  // namespace

namespace detail {

double log_p2_unit(double zeta, double r, double s) {
    const double nu = zeta - 0.5;
    const double z = 0.5 * r * s;
    const double d = s - r;
    if (z < 1e-200) {
        // I_ν(z) ≈ (z/2)^ν / Γ(ν+1); the (rs)^{±ν} factors cancel.
        return -2.0 * nu * std::log(2.0) - std::log(2.0) - std::lgamma(zeta + 0.5) - 0.25 * d * d;
    }
    return -nu * (std::log(r) + std::log(s)) - std::log(2.0) - 0.25 * d * d +
           log_bessel_i_scaled(nu, z);
}

}  // namespace detail

double log_p2(double zeta, double t, double r, double s) {
    check_zeta(zeta);
    check_point(t, r, s);
    if (r > s) std::swap(r, s);
    const double inv = std::pow(t, -1.0 / 2.0);
    const double expo = (2.0 * zeta + 1.0) / 2.0;
    return -expo * std::log(t) + detail::log_p2_unit(zeta, r * inv, s * inv);
}

double p2(double zeta, double t, double r, double s) {
    check_zeta(zeta);
    check_point(t, r, s);
    if (r > s) std::swap(r, s);
    const double inv = std::pow(t, -1.0 / 2.0);
    const double expo = (2.0 * zeta + 1.0) / 2.0;
    const double pref = std::pow(t, -expo);
    return combine(pref, -expo * std::log(t), detail::log_p2_unit(zeta, r * inv, s * inv));
}

double p2_zeta1_closed(double t, double r, double s) {
    check_point(t, r, s);
    const double d = r - s;
    return std::exp(-d * d / (4.0 * t)) * -std::expm1(-r * s / t) /
           (r * s * std::sqrt(4.0 * std::numbers::pi * t));
}

GaussianForm parse_gaussian_form(std::string_view name) {
    if (name == "product-rate" || name == "product") return GaussianForm::product_rate;
    if (name == "factored-rate" || name == "factored") return GaussianForm::factored_rate;
    throw DomainError("unknown Gaussian envelope form '" + std::string(name) + "'");
}

double log_p2_gaussian_envelope(double zeta, double t, double r, double s, double c_exp,
                                GaussianForm form) {
    check_zeta(zeta);
    check_point(t, r, s);
    require_positive(c_exp, "c_exp");
    const double d = r - s;
    const double common = -0.5 * std::log(t) - d * d / (c_exp * t);
    if (form == GaussianForm::product_rate) return common - zeta * std::log(r * s + t);
    const double rt = std::sqrt(t);
    return common + zeta * (std::log(std::min(1.0, r / rt)) + std::log(std::min(1.0, s / rt)) -
                            std::log(r) - std::log(s));
}

double p2_gaussian_envelope(double zeta, double t, double r, double s, double c_exp,
                            GaussianForm form) {
    return std::exp(log_p2_gaussian_envelope(zeta, t, r, s, c_exp, form));
}

double normalization_residual(double zeta, double t, double r, const QuadratureConfig& cfg) {
    check_zeta(zeta);
    require_positive(t, "t");
    require_positive(r, "r");
    cfg.validate();
    const double rt = std::sqrt(t);
    detail::RadialSpec spec;
    spec.zeta = zeta;
    spec.s0 = 1e-5 * std::min(rt, t / std::max(r, rt));
    spec.s_hi = r + 40.0 * rt;
    spec.hints = {r, std::max(r - 2.0 * rt, 0.0), r + 2.0 * rt, r + 8.0 * rt, rt};
    spec.hints.insert(spec.hints.end(), cfg.split_points.begin(), cfg.split_points.end());
    auto h = [&](double s) { return p2(zeta, t, r, s) * std::pow(s, 2.0 * zeta); };
    return std::abs(detail::radial_integral(h, spec, cfg.rel_tol, cfg.max_panels) - 1.0);
}

double chapman_residual(double zeta, double t, double t2, double r, double s,
                        const QuadratureConfig& cfg) {
    check_zeta(zeta);
    check_point(t, r, s);
    require_positive(t2, "t2");
    cfg.validate();
    const double a = std::sqrt(t);
    const double b = std::sqrt(t2);
    const double target = p2(zeta, t + t2, r, s);
    detail::RadialSpec spec;
    spec.zeta = zeta;
    spec.s0 = 1e-5 * std::min({a, b, t / std::max(r, a), t2 / std::max(s, b)});
    spec.s_hi = std::max(r, s) + 40.0 * std::max(a, b);
    const double center = (r * t2 + s * t) / (t + t2);
    spec.hints = {r, s, center, a, b, r + 4.0 * a, s + 4.0 * b};
    spec.hints.insert(spec.hints.end(), cfg.split_points.begin(), cfg.split_points.end());
    auto h = [&](double z) {
        return std::exp(log_p2(zeta, t, r, z) + log_p2(zeta, t2, z, s) + 2.0 * zeta * std::log(z));
    };
    const double value = detail::radial_integral(h, spec, cfg.rel_tol, cfg.max_panels);
    return std::abs(value - target) / target;
}

}  // namespace sbk
