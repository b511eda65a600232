#include <boost/random/sobol.hpp>
#include <cmath>
#include <cstdio>

#include "sbk/verify.hpp"

namespace sbk::verify {

ConfigError::ConfigError(std::string path, const std::string& reason)
    : std::runtime_error(path + ": " + reason), path_(std::move(path)) {}

namespace {

std::string describe_point(const std::vector<double>& point) {
    std::string out = "(";
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i) out += ", ";
        out += format_number(point[i]);
    }
    return out + ")";
}

void check_level(int level) {
    if (level < 0 || level > 12) throw ConfigError("refinement_level", "must lie in [0, 12]");
}

}  // namespace

PointError::PointError(const std::string& check_id, const std::vector<double>& point,
                       const std::string& what)
    : QuadratureError(check_id + " at point " + describe_point(point) + ": " + what) {}

void Axis::validate() const {
    // Paths are relative to the axis object; callers prefix them.
    if (name.empty()) throw ConfigError("name", "must be non-empty");
    if (!std::isfinite(min)) throw ConfigError("min", "must be finite");
    if (!std::isfinite(max)) throw ConfigError("max", "must be finite");
    if (!(min < max)) throw ConfigError("max", "must be > min");
    if (count < 2) throw ConfigError("count", "must be >= 2");
    if (spacing == Spacing::log && !(min > 0.0)) throw ConfigError("min", "log spacing needs min > 0");
}

double Axis::map(double u) const {
    if (spacing == Spacing::log) {
        if (u <= 0.0) return min;
        if (u >= 1.0) return max;
        return std::exp(std::log(min) + u * (std::log(max) - std::log(min)));
    }
    return min + u * (max - min);
}

std::vector<double> Axis::nodes(int level) const {
    validate();
    check_level(level);
    const std::size_t m = static_cast<std::size_t>(count - 1) << level;
    std::vector<double> out(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        out[i] = map(static_cast<double>(i) / static_cast<double>(m));
    }
    out.front() = min;
    out.back() = max;
    return out;
}

void GridSpec::validate() const {
    if (axes.empty()) throw ConfigError("grid.axes", "must be non-empty");
    for (const auto& a : axes) a.validate();
    check_level(refinement_level);
}

void SampleSpec::validate() const {
    if (axes.empty()) throw ConfigError("samples.axes", "must be non-empty");
    for (const auto& a : axes) a.validate();
    if (base_count < 1) throw ConfigError("samples.count", "must be >= 1");
    check_level(refinement_level);
}

PointSet enumerate(const GridSpec& grid) {
    grid.validate();
    const int level = grid.refinement_level;
    std::vector<std::vector<double>> nodes;
    PointSet ps;
    ps.level = level;
    std::size_t total = 1;
    for (const auto& a : grid.axes) {
        nodes.push_back(a.nodes(level));
        ps.names.push_back(a.name);
        total *= nodes.back().size();
    }
    ps.points.reserve(total);
    ps.coarse.reserve(total);
    std::vector<std::size_t> idx(nodes.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> pt(nodes.size());
        bool coarse = level > 0;
        for (std::size_t d = 0; d < nodes.size(); ++d) {
            pt[d] = nodes[d][idx[d]];
            coarse = coarse && idx[d] % 2 == 0;
        }
        ps.points.push_back(std::move(pt));
        ps.coarse.push_back(coarse ? 1 : 0);
        for (std::size_t d = nodes.size(); d-- > 0;) {
            if (++idx[d] < nodes[d].size()) break;
            idx[d] = 0;
        }
    }
    return ps;
}

PointSet enumerate(const SampleSpec& samples) {
    samples.validate();
    const int level = samples.refinement_level;
    const std::size_t total = samples.base_count << level;
    const std::size_t dims = samples.axes.size();
    boost::random::sobol eng(dims);
    PointSet ps;
    ps.level = level;
    for (const auto& a : samples.axes) ps.names.push_back(a.name);
    ps.points.reserve(total);
    ps.coarse.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> pt(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            pt[d] = samples.axes[d].map(std::ldexp(static_cast<double>(eng()), -64));
        }
        ps.points.push_back(std::move(pt));
        ps.coarse.push_back(level > 0 && k < total / 2 ? 1 : 0);
    }
    return ps;
}

}  // namespace sbk::verify
