#ifndef SBK_STABLE_HPP
#define SBK_STABLE_HPP

#include <memory>
#include <vector>

#include "sbk/common.hpp"

namespace sbk {

/// Density of the 1/2-stable subordinator at time t:
/// t τ^{-3/2} e^{-t²/(4τ)} / (2√π).
double levy_density_half(double t, double tau);

struct StableScaling {
    double t1;
    double tau1;
    double factor;
};

/// σ_t(τ) = factor · σ_1(tau1) with tau1 = τ t^{-1/β}, factor = t^{-1/β}.
StableScaling stable_scaling(double beta, double t, double tau);

/// Density σ_t^(β)(τ) of the β-stable subordinator, 0 < β < 1, i.e. the
/// probability density with Laplace transform exp(-t λ^β).
///
/// Returns exactly 0 where ln σ < -745.
double stable_density(double beta, double t, double tau);

/// ln σ_t^(β)(τ). Remains finite (very negative) where stable_density
/// underflows; -inf only when even the logarithm is out of range.
double log_stable_density(double beta, double t, double tau);

/// ∫ e^{-λτ} σ_1^(β)(τ) dτ by adaptive quadrature.
double stable_laplace_transform(double beta, double lambda, const QuadratureConfig& cfg = {});

/// |stable_laplace_transform(β, λ) - exp(-λ^β)|.
double laplace_check(double beta, double lambda, const QuadratureConfig& cfg = {});

/// Exponential-rate envelope exp(-C τ^{-c1}) / τ^{1+α/2} of σ_1^(α/2).
///
/// c1 = α/(2-α), c2 = (2-α/2)/(2-α). C_lo is the (larger) rate used by the
/// lower envelope and C_hi the (smaller) rate used by the upper envelope.
struct SubordinatorEnvelopeParams {
    double alpha = 1.0;
    double c1 = 1.0;
    double c2 = 1.5;
    double C_lo = 0.25;
    double C_hi = 0.25;

    static SubordinatorEnvelopeParams make(double alpha, double C_lo, double C_hi);
};

struct EnvelopePair {
    double lower;
    double upper;
};

EnvelopePair subordinator_envelope(const SubordinatorEnvelopeParams& params, double tau);

/// Envelope constants fitted against the density on a τ grid.
struct SubordinatorFit {
    SubordinatorEnvelopeParams params;
    double rate_estimate = 0.0;  // least-squares small-τ exponential rate
    double prefactor_lo = 0.0;   // inf of σ_1 / lower over the grid
    double prefactor_hi = 0.0;   // sup of σ_1 / upper over the grid
};

/// Fits the small-τ rate by least squares, widens it by the factor
/// (1 + margin) in each direction, then measures the prefactors on `taus`.
SubordinatorFit fit_subordinator_envelope(double alpha, const std::vector<double>& taus,
                                          double margin = 0.25);

namespace detail {

/// ln σ_1^(β)(e^x) straight from the single-integral representation
/// (no table, no series).
double log_stable_density_integral(double beta, double x);

/// ln σ_1^(β)(τ) from the convergent large-τ series. Accurate for τ^β >= 4.
double log_stable_density_series(double beta, double tau);

/// Piecewise Chebyshev table of ln σ_1^(β)(e^x) with the leading small-τ
/// behaviour factored out, plus the large-τ series coefficients.
class StableTable {
public:
    explicit StableTable(double beta);

    /// ln σ_1(e^x); -inf below the tabulated range.
    [[nodiscard]] double log_density(double x) const;
    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] std::size_t pieces() const noexcept { return pieces_.size(); }
    /// Coefficients q_k of σ_1(τ) = Σ_{k>=1} q_k τ^{-kβ-1}.
    [[nodiscard]] const std::vector<double>& series_coefficients() const noexcept { return q_; }

private:
    static constexpr int kNodes = 33;
    struct Piece {
        double a;
        double b;
        double c[kNodes];
    };

    [[nodiscard]] double shift(double x) const;
    void build(double a, double b, int depth);

    double beta_;
    double rate_;
    double c1_;
    double c2_;
    double x_min_;
    double x_max_;
    std::vector<Piece> pieces_;
    std::vector<double> q_;
};

/// Shared immutable table for β, built on first use.
const StableTable& stable_table(double beta);

}  // namespace detail

}  // namespace sbk

#endif
