#ifndef SBK_SUBORDINATED_KERNEL_HPP
#define SBK_SUBORDINATED_KERNEL_HPP

#include <string_view>

#include "sbk/common.hpp"

namespace sbk {

struct ScalingReduction {
    double r1;
    double s1;
    double prefactor;
};

/// (r t^{-1/α}, s t^{-1/α}, t^{-(2ζ+1)/α}).
ScalingReduction scaling_reduce(const KernelParams& params, double t, double r, double s);

/// p_ζ^(α)(t,r,s) = ∫ p2(τ,r,s) σ_t^(α/2)(τ) dτ by adaptive quadrature after
/// reduction to t = 1. For α = 2 this is p2.
///
/// Throws QuadratureError when cfg.max_panels is exhausted.
double p_alpha(const KernelParams& params, double t, double r, double s,
               const QuadratureConfig& cfg = {});
double log_p_alpha(const KernelParams& params, double t, double r, double s,
                   const QuadratureConfig& cfg = {});

/// Closed form of p_ζ^(1) through the regularized hypergeometric function.
double p_alpha1_closed(double zeta, double t, double r, double s);
double log_p_alpha1_closed(double zeta, double t, double r, double s);

enum class Method { automatic, quadrature, closed_form };

Method parse_method(std::string_view name);

/// Kernel evaluator bound to (ζ, α), an evaluation path and a quadrature
/// configuration. `automatic` selects p2 for α = 2, the closed form for
/// α = 1 and quadrature otherwise.
class Kernel {
public:
    explicit Kernel(KernelParams params, Method method = Method::automatic,
                    QuadratureConfig cfg = {});

    double operator()(double t, double r, double s) const;
    [[nodiscard]] double log_value(double t, double r, double s) const;

    /// "alpha2", "closed-form" or "quadrature".
    [[nodiscard]] std::string_view tag() const noexcept;
    [[nodiscard]] const KernelParams& params() const noexcept { return params_; }
    [[nodiscard]] const QuadratureConfig& config() const noexcept { return cfg_; }

private:
    enum class Path { alpha2, closed, quadrature };
    KernelParams params_;
    QuadratureConfig cfg_;
    Path path_;
};

/// Constant K with p(t,r,s) ≈ K t s^{-(2ζ+1+α)} as s → ∞ (α < 2).
double far_field_constant(const KernelParams& params);

/// |∫ p(t,r,s) s^{2ζ} ds - 1| for the kernel selected by `method`.
double normalization_residual(const KernelParams& params, double t, double r,
                              const QuadratureConfig& cfg = {}, Method method = Method::automatic);

/// Relative Chapman-Kolmogorov defect at (t, t2, r, s).
double chapman_residual(const KernelParams& params, double t, double t2, double r, double s,
                        const QuadratureConfig& cfg = {}, Method method = Method::automatic);

}  // namespace sbk

#endif
