#ifndef SBK_ENVELOPES_HPP
#define SBK_ENVELOPES_HPP

#include <string_view>
#include <vector>

#include "sbk/bessel_kernel.hpp"
#include "sbk/common.hpp"
#include "sbk/subordinated_kernel.hpp"

namespace sbk {

/// Raised when a point violates the hypothesis of a comparability item.
class HypothesisError : public DomainError {
public:
    using DomainError::DomainError;
};

/// t / (|r-s|^{1+α}(r+s)^{2ζ} + t^{(1+α)/α}(t^{1/α}+r+s)^{2ζ}), α in (0,2).
double sharp_envelope(const KernelParams& params, double t, double r, double s);
double log_sharp_envelope(const KernelParams& params, double t, double r, double s);

enum class Regime {
    near_diag_small,
    near_diag_large,
    off_diag_small,
    off_diag_large_a,
    off_diag_large_b,
};

std::string_view regime_name(Regime regime);

struct EnvelopeValue {
    double value;
    Regime regime_tag;
};

/// Five-regime bound at t = 1 selected by rs ≶ 1, (r-s)² ≶ 1, rs ≶ (r-s)².
/// Points on a boundary belong to the lowest-numbered regime whose closure
/// contains them.
EnvelopeValue regime_envelope(const KernelParams& params, double r, double s);

/// ((s+z)/(r+s))^{2ζ} if r > s∨z, else 1 (ties take the second branch).
double weight_f(double zeta, double r, double s, double z);
/// ((s+z)/(r+s+z))^{2ζ}.
double weight_f_smooth(double zeta, double r, double s, double z);

struct ThreeGRatio {
    double min_form;
    double product_form;
};

/// Both sides of the weighted 3G inequalities divided by their right-hand
/// sides, for the given kernel. Requires ζ >= 0 and α in (0,2).
ThreeGRatio three_g_ratio(const Kernel& kernel, double r, double s, double z, double t,
                          double tau);
ThreeGRatio three_g_ratio(const KernelParams& params, double r, double s, double z, double t,
                          double tau, const QuadratureConfig& cfg = {});

/// Same quantities from precomputed logarithms of p(t,r,z), p(τ,z,s) and
/// p(t+τ,r,s); returned as logarithms.
ThreeGRatio log_three_g_from(double zeta, double r, double s, double z, double log_p_trz,
                             double log_p_tauzs, double log_p_sum);

enum class ComparabilityItem {
    item1,      // p(τ,z,s) vs p(1,z,s), τ in [C, 1/C]
    item2a,     // split bound for 0 < z <= s/2
    item2b,     // far-field bound for 0 < z <= s/2
    item2c,     // s^{-(2ζ+1)} bound for 0 < z <= s/2
    item3,      // p(τ,z,s) vs p(1,1,s) for τ <= 1, z <= s/2, s >= C
    item4,      // p(1,1,s) vs p(1,r,s) for r <= s
    item4_min,  // min{p(1,1,r), p(1,1,s)} vs p(1,r,s)
    item5,      // p(t,z,s) vs p(t,r,s) for |z-s| > |r-s|/2
};

ComparabilityItem parse_comparability_item(std::string_view name);
std::string_view comparability_item_name(ComparabilityItem item);

/// True for items whose right-hand side has displaced arguments c·z, c·s;
/// with c fixed to 1 these are only meaningful for α < 2.
bool comparability_needs_subordination(ComparabilityItem item);

struct ComparabilityPoint {
    double tau = 1.0;
    double t = 1.0;
    double r = 1.0;
    double s = 1.0;
    double z = 1.0;
    double C = 1.0;  // hypothesis constant of items 1, 2a and 3
};

/// ln(LHS/RHS) of the item's inequality with every hidden constant set to 1
/// (Gaussian rate 1/16 for α = 2 in items 2b, 2c). Throws HypothesisError
/// naming the violated constraint.
double log_comparability_check(ComparabilityItem item, const Kernel& kernel,
                               const ComparabilityPoint& point);
double comparability_check(ComparabilityItem item, const Kernel& kernel,
                           const ComparabilityPoint& point);

/// Gaussian rate search for the α = 2 envelopes. Starting from 4, the rate
/// is multiplied (upper) or divided (lower) by `step` until the extreme
/// log-ratio over the points changes by less than ln(1 + tol).
struct GaussianRateFit {
    double c_upper = 4.0;
    double c_lower = 4.0;
    int upper_steps = 0;
    int lower_steps = 0;
};

struct KernelSample {
    double t;
    double r;
    double s;
    double log_p;
};

GaussianRateFit fit_gaussian_rates(double zeta, GaussianForm form,
                                   const std::vector<KernelSample>& samples, double step = 1.5,
                                   double tol = 0.1);

}  // namespace sbk

#endif
