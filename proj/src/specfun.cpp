#include "sbk/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "sbk/common.hpp"

namespace sbk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// Power series of I_ν with the leading factor (z/2)^ν/Γ(ν+1) kept in log form.
// Partial sums are rescaled so that large z and large ν cannot overflow.
double series_log(double nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    constexpr double kBig = 1e250;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (static_cast<double>(k) * (nu + k));
        sum += term;
        if (sum > kBig) {
            sum /= kBig;
            term /= kBig;
            log_scale += std::log(kBig);
        }
        if (term <= 0.5 * kEps * sum && k > 0.5 * z) break;
    }
    return nu * std::log(0.5 * z) - std::lgamma(nu + 1.0) + std::log(sum) + log_scale - z;
}

double asymptotic_log(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 1000; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * z);
        const double a = std::abs(term);
        if (a == 0.0) break;
        if (a > prev_abs) break;
        sum += term;
        if (a <= 0.5 * kEps * std::abs(sum)) break;
        prev_abs = a;
    }
    return std::log(sum) - 0.5 * std::log(2.0 * std::numbers::pi * z);
}

double switch_point(double nu) { return std::max(35.0, 2.0 * nu * nu); }

void check_bessel_args(double nu, double z) {
    if (!(nu > -1.0)) throw DomainError("bessel_i_scaled: order must exceed -1");
    if (!(z >= 0.0)) throw DomainError("bessel_i_scaled: argument must be >= 0");
}

double series_2f1(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    int small = 0;
    for (int k = 1; k < 20000; ++k) {
        term *= (a + k - 1.0) * (b + k - 1.0) / ((c + k - 1.0) * k) * z;
        sum += term;
        if (term == 0.0) break;
        if (std::abs(term) <= 0.25 * kEps * std::abs(sum)) {
            if (++small == 2) break;
        } else {
            small = 0;
        }
    }
    return sum * rgamma(c);
}

// c - a - b = m with m a nonnegative integer; 1 - z <= 0.25.
double log_case(double a, double b, int m, double omz) {
    double s1 = 0.0;
    if (m > 0) {
        double poch = 1.0;
        double fact_mk = std::tgamma(static_cast<double>(m));  // (m-1)!
        double pow_term = 1.0;
        double fact_k = 1.0;
        for (int k = 0; k < m; ++k) {
            if (k > 0) {
                poch *= (a + k - 1.0) * (b + k - 1.0);
                fact_k *= k;
                pow_term *= -omz;
                fact_mk /= static_cast<double>(m - k);
            }
            s1 += poch * fact_mk / fact_k * pow_term;
        }
        s1 *= rgamma(a + m) * rgamma(b + m);
    }
    const double pref = rgamma(a) * rgamma(b);
    if (pref == 0.0) return s1;
    const double log_omz = std::log(omz);
    double psi_k1 = -std::numbers::egamma;                               // ψ(k+1)
    double psi_km1 = boost::math::digamma(static_cast<double>(m) + 1.0);  // ψ(k+m+1)
    double psi_a = boost::math::digamma(a + m);                          // ψ(a+k+m)
    double psi_b = boost::math::digamma(b + m);                          // ψ(b+k+m)
    double coef = 1.0 / std::tgamma(static_cast<double>(m) + 1.0);       // (a+m)_k(b+m)_k/(k!(k+m)!)
    double s2 = 0.0;
    int small = 0;
    for (int k = 0; k < 5000; ++k) {
        if (k > 0) {
            coef *= (a + m + k - 1.0) * (b + m + k - 1.0) / (static_cast<double>(k) * (k + m)) * omz;
            psi_k1 += 1.0 / k;
            psi_km1 += 1.0 / (k + m);
            psi_a += 1.0 / (a + m + k - 1.0);
            psi_b += 1.0 / (b + m + k - 1.0);
        }
        const double term = coef * (log_omz - psi_k1 - psi_km1 + psi_a + psi_b);
        s2 += term;
        if (coef == 0.0) break;
        if (std::abs(term) <= 0.25 * kEps * std::abs(s2)) {
            if (++small == 2) break;
        } else {
            small = 0;
        }
    }
    return s1 - std::pow(-omz, m) * pref * s2;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be > 0");
    return std::lgamma(x);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x < 170.0) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
}

namespace detail {

double log_bessel_i_scaled_series(double nu, double z) {
    check_bessel_args(nu, z);
    if (z == 0.0) {
        if (nu == 0.0) return 0.0;
        return nu > 0.0 ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    }
    return series_log(nu, z);
}

double log_bessel_i_scaled_asymptotic(double nu, double z) {
    check_bessel_args(nu, z);
    if (!(z > 0.0)) throw DomainError("asymptotic branch needs z > 0");
    return asymptotic_log(nu, z);
}

double gauss_2f1_reg_partial(double a, double b, double c, double z, int terms) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < terms; ++k) {
        term *= (a + k - 1.0) * (b + k - 1.0) / ((c + k - 1.0) * k) * z;
        sum += term;
    }
    return sum * rgamma(c);
}

}  // namespace detail

double log_bessel_i_scaled(double nu, double z) {
    check_bessel_args(nu, z);
    if (z < switch_point(nu)) return detail::log_bessel_i_scaled_series(nu, z);
    return asymptotic_log(nu, z);
}

double bessel_i_scaled(double nu, double z) { return std::exp(log_bessel_i_scaled(nu, z)); }

double gauss_2f1_reg(double a, double b, double c, double z) {
    return gauss_2f1_reg(a, b, c, z, 1.0 - z);
}

double gauss_2f1_reg(double a, double b, double c, double z, double omz) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1_reg: need 0 <= z < 1");
    if (!(omz > 0.0)) throw DomainError("gauss_2f1_reg: 1 - z must be positive");
    if (z == 0.0) return rgamma(c);
    if (is_nonpositive_integer(c)) {
        // F~(a,b;-n;z) = (a)_{n+1} (b)_{n+1} z^{n+1} F~(a+n+1, b+n+1; n+2; z)
        const int n = static_cast<int>(-c);
        double pre = 1.0;
        for (int k = 0; k <= n; ++k) pre *= (a + k) * (b + k);
        if (pre == 0.0) return 0.0;
        return pre * std::pow(z, n + 1) * gauss_2f1_reg(a + n + 1, b + n + 1, n + 2.0, z, omz);
    }
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= 0.75)
        return series_2f1(a, b, c, z);

    const double d = c - a - b;
    const double m_real = std::nearbyint(d);
    if (std::abs(d - m_real) <= 1e-12 * std::max(1.0, std::abs(d))) {
        const int m = static_cast<int>(m_real);
        if (m < 0) return std::pow(omz, m) * gauss_2f1_reg(c - a, c - b, c, z, omz);
        return log_case(a, b, m, omz);
    }
    const double first = rgamma(c - a) * rgamma(c - b) * series_2f1(a, b, 1.0 - d, omz);
    const double second =
        rgamma(a) * rgamma(b) * std::pow(omz, d) * series_2f1(c - a, c - b, 1.0 + d, omz);
    return std::numbers::pi / std::sin(std::numbers::pi * d) * (first - second);
}

}  // namespace sbk
