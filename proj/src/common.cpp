#include "sbk/common.hpp"

#include <cmath>

namespace sbk {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(std::string(name) + " must be a positive finite number");
}

KernelParams::KernelParams(double zeta_, double alpha_) : zeta(zeta_), alpha(alpha_) {
    if (!(zeta > -0.5) || !std::isfinite(zeta)) throw DomainError("zeta must be > -1/2");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
    if (!(abs_floor >= 0.0)) throw DomainError("abs_floor must be >= 0");
    if (max_panels < 16) throw DomainError("max_panels must be >= 16");
    for (std::size_t i = 0; i < split_points.size(); ++i) {
        if (!(split_points[i] > 0.0)) throw DomainError("split_points must be positive");
        if (i > 0 && !(split_points[i] > split_points[i - 1]))
            throw DomainError("split_points must be strictly increasing");
    }
}

}  // namespace sbk

#include <algorithm>

#include "sbk/quadrature.hpp"

namespace sbk::quad {

std::vector<double> make_breaks(std::vector<double> interior, double lo, double hi,
                                double max_width) {
    std::vector<double> pts;
    pts.reserve(interior.size() + 2);
    pts.push_back(lo);
    for (double x : interior)
        if (x > lo && x < hi) pts.push_back(x);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (!(max_width > 0.0)) return pts;
    std::vector<double> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double w = pts[i + 1] - pts[i];
        const int pieces = std::max(1, static_cast<int>(std::ceil(w / max_width)));
        for (int j = 0; j < pieces; ++j) out.push_back(pts[i] + w * j / pieces);
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace sbk::quad
