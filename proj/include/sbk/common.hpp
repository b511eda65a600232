#ifndef SBK_COMMON_HPP
#define SBK_COMMON_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sbk {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an adaptive quadrature exhausts its panel budget before
/// reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bessel index zeta and stability order alpha of a kernel p_zeta^(alpha).
///
/// zeta > -1/2 and 0 < alpha <= 2; alpha == 2 is the unsubordinated Bessel
/// heat kernel. All integral operations use the reference measure
/// r^{2 zeta} dr on the half-line.
struct KernelParams {
    double zeta = 0.0;
    double alpha = 2.0;

    KernelParams() = default;
    KernelParams(double zeta, double alpha);

    [[nodiscard]] double beta() const noexcept { return alpha / 2.0; }
    [[nodiscard]] bool subordinated() const noexcept { return alpha < 2.0; }
};

/// Tolerances and panel budget for the improper integrals of this library.
struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_floor = 1e-300;
    int max_panels = 4096;
    /// Extra split points (positive, strictly increasing). Operations add
    /// their own automatically generated points to these.
    std::vector<double> split_points;

    void validate() const;
};

void require_positive(double value, const char* name);

}  // namespace sbk

#endif
