#ifndef SBK_BESSEL_KERNEL_HPP
#define SBK_BESSEL_KERNEL_HPP

#include <string_view>

#include "sbk/common.hpp"

namespace sbk {

/// Reflected Bessel heat kernel p_ζ^(2)(t,r,s) with respect to s^{2ζ} ds:
/// (rs)^{1/2-ζ}/(2t) · e^{-(r-s)²/(4t)} · e^{-rs/(2t)} I_{ζ-1/2}(rs/(2t)).
///
/// Symmetric in (r,s) bit for bit. Evaluated as t^{-(2ζ+1)/2} p2(1, r/√t, s/√t).
double p2(double zeta, double t, double r, double s);

/// ln p2(ζ,t,r,s); finite wherever the kernel is positive, even if p2 underflows.
double log_p2(double zeta, double t, double r, double s);

/// ζ = 1 closed form (rs)^{-1}(4πt)^{-1/2}(e^{-(r-s)²/(4t)} - e^{-(r+s)²/(4t)}).
double p2_zeta1_closed(double t, double r, double s);

enum class GaussianForm { product_rate, factored_rate };

GaussianForm parse_gaussian_form(std::string_view name);

/// Comparison functions of the two-sided Gaussian bounds for α = 2.
///
/// product_rate:  t^{-1/2} e^{-(r-s)²/(c t)} / (rs+t)^ζ
/// factored_rate: (1∧r/√t)^ζ (1∧s/√t)^ζ (rs)^{-ζ} t^{-1/2} e^{-(r-s)²/(c t)}
double p2_gaussian_envelope(double zeta, double t, double r, double s, double c_exp,
                            GaussianForm form);
double log_p2_gaussian_envelope(double zeta, double t, double r, double s, double c_exp,
                                GaussianForm form);

/// |∫ p2(ζ,t,r,s) s^{2ζ} ds - 1|.
double normalization_residual(double zeta, double t, double r, const QuadratureConfig& cfg = {});

/// |∫ p2(t,r,z) p2(t2,z,s) z^{2ζ} dz - p2(t+t2,r,s)| / p2(t+t2,r,s).
double chapman_residual(double zeta, double t, double t2, double r, double s,
                        const QuadratureConfig& cfg = {});

namespace detail {
/// ln p2(ζ, 1, r, s) for r <= s.
double log_p2_unit(double zeta, double r, double s);
}  // namespace detail

}  // namespace sbk

#endif
