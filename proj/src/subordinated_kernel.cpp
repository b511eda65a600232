#include "sbk/subordinated_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "radial.hpp"
#include "sbk/bessel_kernel.hpp"
#include "sbk/quadrature.hpp"
#include "sbk/specfun.hpp"
#include "sbk/stable.hpp"

namespace sbk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_point(double t, double r, double s) {
    require_positive(t, "t");
    require_positive(r, "r");
    require_positive(s, "s");
}

double combine(double pref, double log_pref, double log_unit) {
    const double unit = std::exp(log_unit);
    const double v = pref * unit;
    if (std::isnormal(pref) && std::isnormal(unit) && std::isnormal(v)) return v;
    return std::exp(log_pref + log_unit);
}

// ln ∫_T^∞ p2(τ,r,s) σ_1(τ) dτ from the product of the small-w expansion of
// p2 (w = 1/τ) and the large-τ series of σ_1. Needs T >= 8(r²+s²) and T^β >= 4.
double log_tail(double zeta, double beta, double r, double s, double T,
                const std::vector<double>& q) {
    constexpr int kJ = 14;
    const double W = 1.0 / T;
    const double a = zeta + 0.5;
    // p̃_j = p_j W^j where Σ p_j w^j = e^{-(r²+s²)w/4} Σ_m (r²s²w²/16)^m / (m! Γ(a+m)).
    std::array<double, kJ> e{}, m{}, p{};
    const double x = -0.25 * (r * r + s * s) * W;
    e[0] = 1.0;
    for (int i = 1; i < kJ; ++i) e[i] = e[i - 1] * x / i;
    const double y = r * r * s * s * W * W / 16.0;
    m[0] = rgamma(a);
    for (int k = 2; k < kJ; k += 2) m[k] = m[k - 2] * y / ((k / 2) * (a + k / 2 - 1.0));
    for (int j = 0; j < kJ; ++j)
        for (int i = 0; i <= j; ++i) p[j] += e[i] * m[j - i];
    const double wb = std::pow(W, beta);
    double sum = 0.0;
    for (int j = 0; j < kJ; ++j) {
        double wk = 1.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            wk *= wb;
            sum += p[j] * q[k] * wk / (a + j + (k + 1.0) * beta);
        }
    }
    return -2.0 * zeta * std::log(2.0) + a * std::log(W) + std::log(sum);
}

double log_p_alpha_unit(double zeta, double alpha, double r, double s,
                        const QuadratureConfig& cfg) {
    const double beta = 0.5 * alpha;
    const auto& table = detail::stable_table(beta);
    const double lr = std::log(r), ls = std::log(s);
    auto logf = [&](double x) {
        const double ls_tau = table.log_density(x);
        if (ls_tau == -std::numeric_limits<double>::infinity()) return ls_tau;
        const double inv = std::exp(-0.5 * x);
        return -(zeta + 0.5) * x + detail::log_p2_unit(zeta, r * inv, s * inv) + ls_tau + x;
    };
    const double T = std::max({std::pow(4.0, 1.0 / beta), 8.0 * (r * r + s * s), 1.0});
    const double x_hi = std::log(T);
    std::vector<double> marks = {lr + ls, 0.0};
    if (s > r) marks.push_back(2.0 * std::log(s - r));
    for (double sp : cfg.split_points) marks.push_back(std::log(sp));
    double peak = -std::numeric_limits<double>::infinity();
    double x_start = x_hi;
    for (double xm : marks) {
        const double xc = std::clamp(xm, table.x_min(), x_hi);
        peak = std::max(peak, logf(xc));
        x_start = std::min(x_start, xc);
    }
    peak = std::max(peak, logf(x_hi));
    double x_lo = x_start;
    double prev = logf(x_lo);
    while (x_lo > table.x_min()) {
        const double x = std::max(x_lo - 1.0, table.x_min());
        const double v = logf(x);
        x_lo = x;
        peak = std::max(peak, v);
        if (v < peak - 50.0 && v < prev) break;
        prev = v;
    }
    auto f = [&](double x) { return std::exp(logf(x) - peak); };
    const auto breaks = quad::make_breaks(marks, x_lo, x_hi, 3.0);
    const auto bulk = quad::integrate(f, std::span<const double>(breaks), cfg.rel_tol,
                                      cfg.abs_floor, cfg.max_panels);
    const double lt = log_tail(zeta, beta, r, s, T, table.series_coefficients());
    return peak + std::log(bulk.value + std::exp(lt - peak));
}

struct ClosedParts {
    double D;  // r² + s² + t²
    double f;  // hypergeometric factor
};

ClosedParts closed_parts(double zeta, double t, double r, double s) {
    const double D = r * r + s * s + t * t;
    const double w = 4.0 * r * r * s * s / (D * D);
    const double d1 = r - s, d2 = r + s;
    const double omw = (d1 * d1 + t * t) * (d2 * d2 + t * t) / (D * D);
    if (w <= 0.75) return {D, gauss_2f1_reg(0.5 * (zeta + 1.0), 0.5 * (zeta + 2.0), zeta + 0.5, w, omw)};
    // Euler transformation; the remaining function has c - a - b = 1.
    return {D, gauss_2f1_reg(0.5 * zeta, 0.5 * (zeta - 1.0), zeta + 0.5, w, omw) / omw};
}

double log_closed_unscaled(double zeta, double t, const ClosedParts& c) {
    return std::log(2.0) + std::lgamma(zeta + 1.0) - 0.5 * std::log(kPi) + std::log(t) -
           (zeta + 1.0) * std::log(c.D) + std::log(c.f);
}

}  // namespace

ScalingReduction scaling_reduce(const KernelParams& params, double t, double r, double s) {
    check_point(t, r, s);
    const double inv = std::pow(t, -1.0 / params.alpha);
    const double pref = std::pow(t, -(2.0 * params.zeta + 1.0) / params.alpha);
    return {r * inv, s * inv, pref};
}

double log_p_alpha(const KernelParams& params, double t, double r, double s,
                   const QuadratureConfig& cfg) {
    check_point(t, r, s);
    if (!params.subordinated()) return log_p2(params.zeta, t, r, s);
    cfg.validate();
    if (r > s) std::swap(r, s);
    const auto red = scaling_reduce(params, t, r, s);
    return -(2.0 * params.zeta + 1.0) / params.alpha * std::log(t) +
           log_p_alpha_unit(params.zeta, params.alpha, red.r1, red.s1, cfg);
}

double p_alpha(const KernelParams& params, double t, double r, double s,
               const QuadratureConfig& cfg) {
    check_point(t, r, s);
    if (!params.subordinated()) return p2(params.zeta, t, r, s);
    cfg.validate();
    if (r > s) std::swap(r, s);
    const auto red = scaling_reduce(params, t, r, s);
    const double log_pref = -(2.0 * params.zeta + 1.0) / params.alpha * std::log(t);
    return combine(red.prefactor, log_pref,
                   log_p_alpha_unit(params.zeta, params.alpha, red.r1, red.s1, cfg));
}

double log_p_alpha1_closed(double zeta, double t, double r, double s) {
    if (!(zeta > -0.5) || !std::isfinite(zeta)) throw DomainError("zeta must be > -1/2");
    check_point(t, r, s);
    if (r > s) std::swap(r, s);
    return log_closed_unscaled(zeta, t, closed_parts(zeta, t, r, s));
}

double p_alpha1_closed(double zeta, double t, double r, double s) {
    if (!(zeta > -0.5) || !std::isfinite(zeta)) throw DomainError("zeta must be > -1/2");
    check_point(t, r, s);
    if (r > s) std::swap(r, s);
    const auto c = closed_parts(zeta, t, r, s);
    // Direct products keep the rounding error independent of the magnitude of the value.
    const double pref = 2.0 * std::tgamma(zeta + 1.0) / std::sqrt(kPi);
    const double v = pref * t * std::pow(c.D, -(zeta + 1.0)) * c.f;
    if (std::isnormal(v) && std::isfinite(pref)) return v;
    return std::exp(log_closed_unscaled(zeta, t, c));
}

Method parse_method(std::string_view name) {
    if (name == "auto" || name == "automatic") return Method::automatic;
    if (name == "quadrature") return Method::quadrature;
    if (name == "closed" || name == "closed-form") return Method::closed_form;
    throw DomainError("unknown method '" + std::string(name) + "'");
}

Kernel::Kernel(KernelParams params, Method method, QuadratureConfig cfg)
    : params_(params), cfg_(std::move(cfg)) {
    cfg_.validate();
    if (!params_.subordinated()) {
        path_ = Path::alpha2;
    } else if (method == Method::quadrature) {
        path_ = Path::quadrature;
    } else if (params_.alpha == 1.0) {
        path_ = Path::closed;
    } else if (method == Method::closed_form) {
        throw DomainError("no closed form for alpha other than 1 and 2");
    } else {
        path_ = Path::quadrature;
    }
}

double Kernel::operator()(double t, double r, double s) const {
    switch (path_) {
        case Path::alpha2: return p2(params_.zeta, t, r, s);
        case Path::closed: return p_alpha1_closed(params_.zeta, t, r, s);
        case Path::quadrature: break;
    }
    return p_alpha(params_, t, r, s, cfg_);
}

double Kernel::log_value(double t, double r, double s) const {
    switch (path_) {
        case Path::alpha2: return log_p2(params_.zeta, t, r, s);
        case Path::closed: return log_p_alpha1_closed(params_.zeta, t, r, s);
        case Path::quadrature: break;
    }
    return log_p_alpha(params_, t, r, s, cfg_);
}

std::string_view Kernel::tag() const noexcept {
    switch (path_) {
        case Path::alpha2: return "alpha2";
        case Path::closed: return "closed-form";
        case Path::quadrature: break;
    }
    return "quadrature";
}

double far_field_constant(const KernelParams& params) {
    if (!params.subordinated()) throw DomainError("far-field constant needs alpha < 2");
    const double beta = params.beta();
    const double c_beta = std::exp(std::lgamma(beta + 1.0)) * std::sin(kPi * beta) / kPi;
    return c_beta * std::pow(2.0, 1.0 + 2.0 * beta) *
           std::exp(std::lgamma(params.zeta + 0.5 + beta) - std::lgamma(params.zeta + 0.5));
}

double normalization_residual(const KernelParams& params, double t, double r,
                              const QuadratureConfig& cfg, Method method) {
    if (!params.subordinated()) return normalization_residual(params.zeta, t, r, cfg);
    require_positive(t, "t");
    require_positive(r, "r");
    cfg.validate();
    const Kernel kernel(params, method, cfg);
    const double zeta = params.zeta;
    const double alpha = params.alpha;
    const double r1 = r * std::pow(t, -1.0 / alpha);
    detail::RadialSpec spec;
    spec.zeta = zeta;
    spec.s0 = 1e-5 * std::min(1.0, 1.0 / r1);
    spec.s_hi = 1e8 * std::max(1.0, r1);
    spec.hints = {r1, 1.0, 0.5 * r1, 2.0 * r1, r1 + 1.0};
    const double K = far_field_constant(params);
    spec.tail = [K, alpha](double S) { return K * std::pow(S, -alpha) / alpha; };
    auto h = [&](double s) { return std::exp(kernel.log_value(1.0, r1, s) + 2.0 * zeta * std::log(s)); };
    return std::abs(detail::radial_integral(h, spec, cfg.rel_tol, cfg.max_panels) - 1.0);
}

double chapman_residual(const KernelParams& params, double t, double t2, double r, double s,
                        const QuadratureConfig& cfg, Method method) {
    if (!params.subordinated()) return chapman_residual(params.zeta, t, t2, r, s, cfg);
    check_point(t, r, s);
    require_positive(t2, "t2");
    cfg.validate();
    const Kernel kernel(params, method, cfg);
    const double zeta = params.zeta;
    const double alpha = params.alpha;
    const double a = std::pow(t, 1.0 / alpha);
    const double b = std::pow(t2, 1.0 / alpha);
    const double target = kernel(t + t2, r, s);
    detail::RadialSpec spec;
    spec.zeta = zeta;
    spec.s0 = 1e-5 * std::min({a, a * a / std::max(r, a), b, b * b / std::max(s, b)});
    spec.s_hi = 1e6 * std::max({r, s, a, b});
    spec.hints = {r, s, a, b, r + a, s + b, std::max(r - a, 0.0), std::max(s - b, 0.0)};
    const double K = far_field_constant(params);
    const double expo = 2.0 * zeta + 1.0 + 2.0 * alpha;
    spec.tail = [=](double Z) { return K * K * t * t2 * std::pow(Z, -expo) / expo; };
    auto h = [&](double z) {
        return std::exp(kernel.log_value(t, r, z) + kernel.log_value(t2, z, s) +
                        2.0 * zeta * std::log(z));
    };
    const double value = detail::radial_integral(h, spec, cfg.rel_tol, cfg.max_panels);
    return std::abs(value - target) / target;
}

}  // namespace sbk
