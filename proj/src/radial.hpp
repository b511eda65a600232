#ifndef SBK_SRC_RADIAL_HPP
#define SBK_SRC_RADIAL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "sbk/quadrature.hpp"

namespace sbk::detail {

// ∫_0^∞ h(s) ds for an integrand with h(s) ≈ C s^{2ζ} as s → 0.
struct RadialSpec {
    double zeta = 0.0;
    double s0 = 1e-8;    // [0, s0] is taken from the leading power
    double s_hi = 1e3;   // end of the numerical part
    std::vector<double> hints;
    std::function<double(double)> tail;  // ∫_{s_hi}^∞ h, optional
};

inline double radial_integral(const std::function<double(double)>& h, const RadialSpec& spec,
                              double rel_tol, int max_panels) {
    const double head = h(spec.s0) * spec.s0 / (2.0 * spec.zeta + 1.0);
    std::vector<double> interior;
    for (double p : spec.hints)
        if (p > 0.0) interior.push_back(std::log(p));
    const auto breaks = quad::make_breaks(interior, std::log(spec.s0), std::log(spec.s_hi), 2.0);
    auto f = [&](double u) {
        const double s = std::exp(u);
        return h(s) * s;
    };
    const auto bulk =
        quad::integrate(f, std::span<const double>(breaks), rel_tol, 0.0, max_panels);
    const double tail = spec.tail ? spec.tail(spec.s_hi) : 0.0;
    return head + bulk.value + tail;
}

}  // namespace sbk::detail

#endif
