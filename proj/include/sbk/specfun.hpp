#ifndef SBK_SPECFUN_HPP
#define SBK_SPECFUN_HPP

namespace sbk {

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// 1/Γ(x) for any real x; zero at the poles 0, -1, -2, ...
double rgamma(double x);

/// e^{-z} I_ν(z) for z >= 0 and ν > -1.
///
/// Returns +inf at z = 0 for ν < 0 (the unscaled function is singular there).
double bessel_i_scaled(double nu, double z);

/// ln(e^{-z} I_ν(z)). Stays finite where the scaled value itself underflows.
double log_bessel_i_scaled(double nu, double z);

/// Regularized Gauss hypergeometric function 2F1(a,b;c;z)/Γ(c) for 0 <= z < 1.
double gauss_2f1_reg(double a, double b, double c, double z);

/// Same as above with 1 - z supplied separately, for callers that can form
/// it without cancellation.
double gauss_2f1_reg(double a, double b, double c, double z, double one_minus_z);

namespace detail {

// Individual branches of bessel_i_scaled, exposed for overlap tests.
double log_bessel_i_scaled_series(double nu, double z);
double log_bessel_i_scaled_asymptotic(double nu, double z);

// Direct Maclaurin series of the regularized 2F1 truncated after `terms`
// terms (unconditionally; no convergence test).
double gauss_2f1_reg_partial(double a, double b, double c, double z, int terms);

}  // namespace detail

}  // namespace sbk

#endif
