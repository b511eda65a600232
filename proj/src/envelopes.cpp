#include "sbk/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sbk {

namespace {

void require_subordinated(const KernelParams& params) {
    if (!params.subordinated()) throw DomainError("this envelope needs alpha in (0, 2)");
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double log_sharp_envelope(const KernelParams& params, double t, double r, double s) {
    require_subordinated(params);
    require_positive(t, "t");
    require_positive(r, "r");
    require_positive(s, "s");
    const double a = params.alpha;
    const double z = params.zeta;
    const double d = std::abs(r - s);
    const double near = (1.0 + a) / a * std::log(t) + 2.0 * z * std::log(std::pow(t, 1.0 / a) + r + s);
    double den = near;
    if (d > 0.0) den = log_sum_exp((1.0 + a) * std::log(d) + 2.0 * z * std::log(r + s), near);
    return std::log(t) - den;
}

double sharp_envelope(const KernelParams& params, double t, double r, double s) {
    return std::exp(log_sharp_envelope(params, t, r, s));
}

std::string_view regime_name(Regime regime) {
    switch (regime) {
        case Regime::near_diag_small: return "near-diag-small";
        case Regime::near_diag_large: return "near-diag-large";
        case Regime::off_diag_small: return "off-diag-small";
        case Regime::off_diag_large_a: return "off-diag-large-a";
        case Regime::off_diag_large_b: return "off-diag-large-b";
    }
    return "unknown";
}

EnvelopeValue regime_envelope(const KernelParams& params, double r, double s) {
    require_subordinated(params);
    require_positive(r, "r");
    require_positive(s, "s");
    const double z = params.zeta;
    const double a = params.alpha;
    const double rs = r * s;
    const double d = std::abs(r - s);
    const double d2 = d * d;
    if (rs <= 1.0 && d2 <= 1.0) return {1.0, Regime::near_diag_small};
    if (d2 <= 1.0) return {std::pow(rs, -z), Regime::near_diag_large};
    if (rs <= 1.0) return {std::pow(d, -(2.0 * z + 1.0 + a)), Regime::off_diag_small};
    if (rs <= d2) return {std::pow(d, -(2.0 * z + 1.0 + a)), Regime::off_diag_large_a};
    return {std::pow(rs, -z) * std::pow(d, -(1.0 + a)), Regime::off_diag_large_b};
}

double weight_f(double zeta, double r, double s, double z) {
    if (!(zeta >= 0.0)) throw DomainError("weight_f needs zeta >= 0");
    require_positive(r, "r");
    require_positive(s, "s");
    require_positive(z, "z");
    if (r > std::max(s, z)) return std::pow((s + z) / (r + s), 2.0 * zeta);
    return 1.0;
}

double weight_f_smooth(double zeta, double r, double s, double z) {
    if (!(zeta >= 0.0)) throw DomainError("weight_f needs zeta >= 0");
    require_positive(r, "r");
    require_positive(s, "s");
    require_positive(z, "z");
    return std::pow((s + z) / (r + s + z), 2.0 * zeta);
}

ThreeGRatio log_three_g_from(double zeta, double r, double s, double z, double lp1, double lp2,
                             double lp_sum) {
    const double sum = r + s + z;
    const double w1 = 2.0 * zeta * std::log((r + z) / sum);
    const double w2 = 2.0 * zeta * std::log((s + z) / sum);
    const double min_form = std::min(w1 + lp1, w2 + lp2) - lp_sum;
    // [(r+s+z)/(s+z)]^{2ζ} p(t,r,z) + [(r+s+z)/(r+z)]^{2ζ} p(τ,z,s)
    const double bracket = log_sum_exp(lp1 - w2, lp2 - w1);
    const double product_form = lp1 + lp2 - lp_sum - bracket;
    return {min_form, product_form};
}

ThreeGRatio three_g_ratio(const Kernel& kernel, double r, double s, double z, double t,
                          double tau) {
    const auto& p = kernel.params();
    if (!(p.zeta >= 0.0)) throw DomainError("3G inequality needs zeta >= 0");
    require_subordinated(p);
    require_positive(z, "z");
    require_positive(tau, "tau");
    const auto lg = log_three_g_from(p.zeta, r, s, z, kernel.log_value(t, r, z),
                                     kernel.log_value(tau, z, s), kernel.log_value(t + tau, r, s));
    return {std::exp(lg.min_form), std::exp(lg.product_form)};
}

ThreeGRatio three_g_ratio(const KernelParams& params, double r, double s, double z, double t,
                          double tau, const QuadratureConfig& cfg) {
    return three_g_ratio(Kernel(params, Method::automatic, cfg), r, s, z, t, tau);
}

ComparabilityItem parse_comparability_item(std::string_view name) {
    if (name == "1") return ComparabilityItem::item1;
    if (name == "2a") return ComparabilityItem::item2a;
    if (name == "2b") return ComparabilityItem::item2b;
    if (name == "2c") return ComparabilityItem::item2c;
    if (name == "3") return ComparabilityItem::item3;
    if (name == "4") return ComparabilityItem::item4;
    if (name == "4min") return ComparabilityItem::item4_min;
    if (name == "5") return ComparabilityItem::item5;
    throw DomainError("unknown comparability item '" + std::string(name) + "'");
}

std::string_view comparability_item_name(ComparabilityItem item) {
    switch (item) {
        case ComparabilityItem::item1: return "1";
        case ComparabilityItem::item2a: return "2a";
        case ComparabilityItem::item2b: return "2b";
        case ComparabilityItem::item2c: return "2c";
        case ComparabilityItem::item3: return "3";
        case ComparabilityItem::item4: return "4";
        case ComparabilityItem::item4_min: return "4min";
        case ComparabilityItem::item5: return "5";
    }
    return "?";
}

bool comparability_needs_subordination(ComparabilityItem item) {
    return item != ComparabilityItem::item2b && item != ComparabilityItem::item2c;
}

namespace {

// Far-field comparison function of items 2a and 2b.
double log_far_field(const KernelParams& p, double tau, double s) {
    if (!p.subordinated()) {
        return -0.5 * std::log(tau) - s * s / (16.0 * tau) - p.zeta * std::log(tau + s * s);
    }
    const double e = 2.0 * p.zeta + 1.0 + p.alpha;
    return std::log(tau) - log_sum_exp(e * std::log(s), e / p.alpha * std::log(tau));
}

void hypothesis(bool ok, const char* what) {
    if (!ok) throw HypothesisError(std::string("hypothesis violated: ") + what);
}

}  // namespace

double log_comparability_check(ComparabilityItem item, const Kernel& kernel,
                               const ComparabilityPoint& pt) {
    const auto& p = kernel.params();
    if (comparability_needs_subordination(item) && !p.subordinated())
        throw DomainError("comparability item " + std::string(comparability_item_name(item)) +
                          " is checked with c = 1 only for alpha < 2");
    switch (item) {
        case ComparabilityItem::item1:
            hypothesis(pt.C > 0.0 && pt.C <= 1.0, "0 < C <= 1");
            hypothesis(pt.tau >= pt.C && pt.tau <= 1.0 / pt.C, "C <= tau <= 1/C");
            return kernel.log_value(pt.tau, pt.z, pt.s) - kernel.log_value(1.0, pt.z, pt.s);
        case ComparabilityItem::item2a: {
            hypothesis(pt.z > 0.0 && pt.z <= pt.s / 2.0, "0 < z <= s/2");
            hypothesis(pt.C > 0.0, "C > 0");
            const double lhs = kernel.log_value(pt.tau, pt.z, pt.s);
            if (pt.tau > pt.C) return lhs - kernel.log_value(pt.tau, 1.0, pt.s);
            return lhs - log_far_field(p, pt.tau, pt.s);
        }
        case ComparabilityItem::item2b:
            hypothesis(pt.z > 0.0 && pt.z <= pt.s / 2.0, "0 < z <= s/2");
            return kernel.log_value(pt.tau, pt.z, pt.s) - log_far_field(p, pt.tau, pt.s);
        case ComparabilityItem::item2c:
            hypothesis(pt.z > 0.0 && pt.z <= pt.s / 2.0, "0 < z <= s/2");
            return kernel.log_value(pt.tau, pt.z, pt.s) +
                   (2.0 * p.zeta + 1.0) * std::log(pt.s);
        case ComparabilityItem::item3:
            hypothesis(pt.tau > 0.0 && pt.tau <= 1.0, "0 < tau <= 1");
            hypothesis(pt.z > 0.0 && pt.z <= pt.s / 2.0, "0 < z <= s/2");
            hypothesis(pt.C > 0.0 && pt.s >= pt.C, "s >= C > 0");
            return kernel.log_value(pt.tau, pt.z, pt.s) - kernel.log_value(1.0, 1.0, pt.s);
        case ComparabilityItem::item4:
            hypothesis(pt.r > 0.0 && pt.r <= pt.s, "0 < r <= s");
            return kernel.log_value(1.0, 1.0, pt.s) - kernel.log_value(1.0, pt.r, pt.s);
        case ComparabilityItem::item4_min:
            return std::min(kernel.log_value(1.0, 1.0, pt.r), kernel.log_value(1.0, 1.0, pt.s)) -
                   kernel.log_value(1.0, pt.r, pt.s);
        case ComparabilityItem::item5:
            hypothesis(std::abs(pt.z - pt.s) > 0.5 * std::abs(pt.r - pt.s), "|z-s| > |r-s|/2");
            return kernel.log_value(pt.t, pt.z, pt.s) - kernel.log_value(pt.t, pt.r, pt.s);
    }
    throw DomainError("unknown comparability item");
}

double comparability_check(ComparabilityItem item, const Kernel& kernel,
                           const ComparabilityPoint& point) {
    return std::exp(log_comparability_check(item, kernel, point));
}

GaussianRateFit fit_gaussian_rates(double zeta, GaussianForm form,
                                   const std::vector<KernelSample>& samples, double step,
                                   double tol) {
    if (samples.empty()) throw DomainError("rate fit needs samples");
    if (!(step > 1.0)) throw DomainError("rate step must exceed 1");
    auto extreme = [&](double c, bool upper) {
        double best = upper ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
        for (const auto& x : samples) {
            const double lr = x.log_p - log_p2_gaussian_envelope(zeta, x.t, x.r, x.s, c, form);
            best = upper ? std::max(best, lr) : std::min(best, lr);
        }
        return best;
    };
    const double band = std::log1p(tol);
    GaussianRateFit fit;
    constexpr int kMaxSteps = 16;
    double c = 4.0;
    double cur = extreme(c, true);
    for (; fit.upper_steps < kMaxSteps; ++fit.upper_steps) {
        const double next = extreme(c * step, true);
        if (cur - next <= band) break;
        c *= step;
        cur = next;
    }
    fit.c_upper = c;
    c = 4.0;
    cur = extreme(c, false);
    for (; fit.lower_steps < kMaxSteps; ++fit.lower_steps) {
        const double next = extreme(c / step, false);
        if (next - cur <= band) break;
        c /= step;
        cur = next;
    }
    fit.c_lower = c;
    return fit;
}

}  // namespace sbk
