#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "sbk/bessel_kernel.hpp"
#include "sbk/envelopes.hpp"
#include "sbk/mc_oracle.hpp"
#include "sbk/stable.hpp"
#include "sbk/subordinated_kernel.hpp"
#include "sbk/verify.hpp"

namespace sbk::verify {

namespace {

// Reads one check entry and remembers which fields were consumed so that
// unknown fields can be reported.
class Entry {
public:
    Entry(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "must be an object");
    }

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] std::string at(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
        if (!has(key)) {
            if (def) return *def;
            throw ConfigError(at(key), "required field missing");
        }
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "must be a string");
        return v.get<std::string>();
    }

    double number(const std::string& key, std::optional<double> def = std::nullopt) {
        if (!has(key)) {
            if (def) return *def;
            throw ConfigError(at(key), "required field missing");
        }
        const Json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(at(key), "must be finite");
        return x;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> def) {
        if (!has(key)) {
            if (def.empty()) throw ConfigError(at(key), "required field missing");
            return def;
        }
        const Json& v = raw(key);
        std::vector<double> out;
        if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (v.is_array() && !v.empty()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number())
                    throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "must be a number");
                out.push_back(v[i].get<double>());
            }
        } else {
            throw ConfigError(at(key), "must be a number or a non-empty array of numbers");
        }
        return out;
    }

    long long integer(const std::string& key, long long def, long long lo, long long hi) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "must be an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi)
            throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
        return x;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            (void)value;
            if (!used_.count(key)) throw ConfigError(at(key), "unknown field");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

Axis parse_axis(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    Axis a;
    for (const auto& [key, v] : j.items()) {
        const std::string p = path + "." + key;
        if (key == "name") {
            if (!v.is_string()) throw ConfigError(p, "must be a string");
            a.name = v.get<std::string>();
        } else if (key == "min" || key == "max") {
            if (!v.is_number()) throw ConfigError(p, "must be a number");
            (key == "min" ? a.min : a.max) = v.get<double>();
        } else if (key == "count") {
            if (!v.is_number_integer() || v.get<long long>() < 2 || v.get<long long>() > 100000)
                throw ConfigError(p, "must be an integer in [2, 100000]");
            a.count = v.get<int>();
        } else if (key == "spacing") {
            if (!v.is_string()) throw ConfigError(p, "must be a string");
            const auto s = v.get<std::string>();
            if (s == "log") a.spacing = Spacing::log;
            else if (s == "linear") a.spacing = Spacing::linear;
            else throw ConfigError(p, "must be 'log' or 'linear'");
        } else {
            throw ConfigError(p, "unknown field");
        }
    }
    for (const char* key : {"name", "min", "max"}) {
        if (!j.contains(key)) throw ConfigError(path + "." + key, "required field missing");
    }
    try {
        a.validate();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        throw ConfigError(path + "." + e.path(), what.substr(e.path().size() + 2));
    }
    return a;
}

std::vector<Axis> parse_axes(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "must be a non-empty array");
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < j.size(); ++i)
        axes.push_back(parse_axis(j[i], path + "[" + std::to_string(i) + "]"));
    return axes;
}

PointSet parse_points(Entry& e, const std::vector<std::string>& required) {
    const bool grid = e.has("grid");
    const bool samples = e.has("samples");
    if (grid == samples) throw ConfigError(e.path(), "exactly one of 'grid' or 'samples' is required");
    const std::string key = grid ? "grid" : "samples";
    const Json& j = e.raw(key);
    const std::string path = e.at(key);
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    std::vector<Axis> axes;
    int level = 0;
    long long count = 0;
    for (const auto& [k, v] : j.items()) {
        if (k == "axes") {
            axes = parse_axes(v, path + ".axes");
        } else if (k == "refinement_level") {
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 12)
                throw ConfigError(path + ".refinement_level", "must be an integer in [0, 12]");
            level = v.get<int>();
        } else if (k == "count" && !grid) {
            if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000000)
                throw ConfigError(path + ".count", "must be an integer in [1, 1e8]");
            count = v.get<long long>();
        } else {
            throw ConfigError(path + "." + k, "unknown field");
        }
    }
    if (axes.empty()) throw ConfigError(path + ".axes", "required field missing");
    if (!grid && count == 0) throw ConfigError(path + ".count", "required field missing");
    // Order axes as the check expects them.
    std::vector<Axis> ordered;
    for (const auto& name : required) {
        auto it = std::find_if(axes.begin(), axes.end(), [&](const Axis& a) { return a.name == name; });
        if (it == axes.end()) throw ConfigError(path + ".axes", "missing axis '" + name + "'");
        ordered.push_back(*it);
    }
    if (axes.size() != required.size()) {
        std::string names;
        for (const auto& n : required) names += (names.empty() ? "" : ", ") + n;
        throw ConfigError(path + ".axes", "expected exactly the axes {" + names + "}");
    }
    std::size_t total = 1;
    for (const auto& a : ordered) {
        total *= grid ? ((static_cast<std::size_t>(a.count) - 1) << level) + 1 : 1;
        if (total > 50000000) throw ConfigError(path, "too many points");
    }
    if (!grid && (static_cast<std::size_t>(count) << level) > 50000000)
        throw ConfigError(path, "too many points");
    if (grid) return enumerate(GridSpec{ordered, level});
    return enumerate(SampleSpec{ordered, static_cast<std::size_t>(count), level});
}

std::string label(const std::string& base, const std::vector<std::pair<std::string, double>>& tags,
                  const std::string& channel = {}) {
    std::string out = base;
    if (!tags.empty()) {
        out += "[";
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (i) out += ",";
            out += tags[i].first + "=" + format_number(tags[i].second);
        }
        out += "]";
    }
    if (!channel.empty()) out += "/" + channel;
    return out;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t seed, std::span<const double> pt) {
    std::uint64_t h = mix(seed);
    for (double x : pt) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        h = mix(h ^ bits);
    }
    return h;
}

struct Common {
    std::string base;
    std::vector<double> zetas;
    std::vector<double> alphas;
    Method method = Method::automatic;
    QuadratureConfig quad;
    ChannelSpec channel;
};

ChannelSpec read_channel_options(Entry& e, Mode mode, Side side, double tolerance,
                                 double max_insufficient) {
    ChannelSpec c;
    c.mode = mode;
    c.side = side;
    if (e.has("side")) {
        try {
            c.side = parse_side(e.string("side"));
        } catch (const ConfigError& err) {
            throw ConfigError(e.at("side"), "must be upper, lower or both");
        }
    }
    c.tolerance = e.number("tolerance", tolerance);
    if (!(c.tolerance >= 0.0)) throw ConfigError(e.at("tolerance"), "must be >= 0");
    c.max_drift = e.number("max_drift", 0.1);
    if (!(c.max_drift > 0.0)) throw ConfigError(e.at("max_drift"), "must be > 0");
    c.max_insufficient = e.number("max_insufficient", max_insufficient);
    if (!(c.max_insufficient >= 0.0 && c.max_insufficient <= 1.0))
        throw ConfigError(e.at("max_insufficient"), "must lie in [0, 1]");
    c.upper_ceiling = e.optional_number("upper_constant");
    c.lower_floor = e.optional_number("lower_constant");
    c.upper_scale = e.optional_number("upper_constant_scale");
    c.lower_scale = e.optional_number("lower_constant_scale");
    for (const char* key : {"upper_constant", "lower_constant", "upper_constant_scale",
                            "lower_constant_scale"}) {
        if (e.has(key) && !(e.number(key) > 0.0)) throw ConfigError(e.at(key), "must be > 0");
    }
    return c;
}

void check_zeta_values(Entry& e, const std::vector<double>& zetas, double lower = -0.5,
                       bool inclusive = false) {
    for (double z : zetas) {
        if (inclusive ? !(z >= lower) : !(z > lower))
            throw ConfigError(e.at("zeta"), "zeta " + format_number(z) + " must be " +
                                                (inclusive ? ">= " : "> ") + format_number(lower));
    }
}

void check_alpha_values(Entry& e, const std::vector<double>& alphas, bool allow_two) {
    for (double a : alphas) {
        if (!(a > 0.0 && (allow_two ? a <= 2.0 : a < 2.0)))
            throw ConfigError(e.at("alpha"), "alpha " + format_number(a) + " must lie in (0, " +
                                                 (allow_two ? "2]" : "2)"));
    }
}

QuadratureConfig read_quadrature(Entry& e, const QuadratureConfig& base) {
    QuadratureConfig q = base;
    if (e.has("rel_tol")) {
        q.rel_tol = e.number("rel_tol");
        if (!(q.rel_tol > 0.0 && q.rel_tol < 1.0)) throw ConfigError(e.at("rel_tol"), "must lie in (0, 1)");
    }
    return q;
}

Method read_method(Entry& e) {
    const std::string m = e.string("method", std::string("auto"));
    try {
        return parse_method(m);
    } catch (const DomainError&) {
        throw ConfigError(e.at("method"), "must be auto, quadrature or closed");
    }
}

using Builder = std::vector<CheckSpec> (*)(Entry&, const QuadratureConfig&, std::uint64_t);

CheckSpec single(const std::string& kind, const ChannelSpec& proto, const std::string& id,
                 PointSet pts, PointFn fn, Json info) {
    CheckSpec c;
    c.kind = kind;
    ChannelSpec ch = proto;
    ch.id = id;
    c.channels.push_back(ch);
    c.points = std::move(pts);
    c.eval = std::move(fn);
    c.info = std::move(info);
    return c;
}

Json pair_info(double zeta, double alpha) { return Json{{"zeta", zeta}, {"alpha", alpha}}; }

// --- individual kinds ---------------------------------------------------------

std::vector<CheckSpec> build_identity(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("identity"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {2.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, true);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.01);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(z, a), method, quad);
            out.push_back(single("identity", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [k](std::span<const double> x) {
                                     const double lp = k.log_value(x[0], x[1], x[2]);
                                     return std::vector{PointEval::log_form(lp, lp)};
                                 },
                                 pair_info(z, a)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_closed_form(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("closed_form"));
    const auto zetas = e.numbers("zeta", {0.0, 0.5, 1.0, 2.5});
    check_zeta_values(e, zetas);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::relative, Side::both, 1e-6, 0.0);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        const KernelParams p(z, 1.0);
        out.push_back(single("closed_form", ch, label(base, {{"zeta", z}}), pts,
                             [p, quad](std::span<const double> x) {
                                 return std::vector{PointEval::ratio(p_alpha(p, x[0], x[1], x[2], quad),
                                                                     p_alpha1_closed(p.zeta, x[0], x[1], x[2]))};
                             },
                             pair_info(z, 1.0)));
    }
    return out;
}

std::vector<CheckSpec> build_alpha2_closed(Entry& e, const QuadratureConfig&, std::uint64_t) {
    const std::string base = e.string("id", std::string("alpha2_closed"));
    const auto ch = read_channel_options(e, Mode::relative, Side::both, 1e-11, 0.0);
    const auto pts = parse_points(e, {"t", "r", "s"});
    return {single("alpha2_closed", ch, label(base, {{"zeta", 1.0}}), pts,
                   [](std::span<const double> x) {
                       const double a = p2(1.0, x[0], x[1], x[2]);
                       const double b = p2_zeta1_closed(x[0], x[1], x[2]);
                       // Relative error is unassessable once both sides leave the normal range.
                       if (!std::isnormal(a) && !std::isnormal(b)) return std::vector{PointEval::skip()};
                       return std::vector{PointEval::ratio(a, b)};
                   },
                   pair_info(1.0, 2.0))};
}

std::vector<CheckSpec> build_normalization(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("normalization"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {2.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, true);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const bool explicit_tol = e.has("tolerance");
    auto ch = read_channel_options(e, Mode::absolute, Side::both, 0.0, 0.0);
    const auto pts = parse_points(e, {"t", "r"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            ChannelSpec c = ch;
            if (!explicit_tol) c.tolerance = a < 2.0 ? 1e-5 : 1e-7;
            const KernelParams p(z, a);
            out.push_back(single("normalization", c, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [p, quad, method](std::span<const double> x) {
                                     PointEval ev;
                                     ev.num = normalization_residual(p, x[0], x[1], quad, method);
                                     ev.den = 1.0;
                                     ev.score = ev.num;
                                     ev.log_ratio = std::log1p(ev.num);
                                     return std::vector{ev};
                                 },
                                 pair_info(z, a)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_chapman(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("chapman"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {2.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, true);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::absolute, Side::both, 1e-5, 0.0);
    const auto pts = parse_points(e, {"t", "t2", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            const KernelParams p(z, a);
            out.push_back(single("chapman", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [p, quad, method](std::span<const double> x) {
                                     PointEval ev;
                                     ev.num = chapman_residual(p, x[0], x[1], x[2], x[3], quad, method);
                                     ev.den = 1.0;
                                     ev.score = ev.num;
                                     ev.log_ratio = std::log1p(ev.num);
                                     return std::vector{ev};
                                 },
                                 pair_info(z, a)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_scaling(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("scaling"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {2.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, true);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::relative, Side::both, 1e-14, 0.0);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(z, a), method, quad);
            out.push_back(single("scaling", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [k](std::span<const double> x) {
                                     const auto red = scaling_reduce(k.params(), x[0], x[1], x[2]);
                                     const double a = k(x[0], x[1], x[2]);
                                     const double b = red.prefactor * k(1.0, red.r1, red.s1);
                                     if (!std::isnormal(a) && !std::isnormal(b)) return std::vector{PointEval::skip()};
                                     return std::vector{PointEval::ratio(a, b)};
                                 },
                                 pair_info(z, a)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_laplace(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("laplace"));
    const auto betas = e.numbers("beta", {0.25, 0.5, 0.75, 0.9});
    for (double b : betas)
        if (!(b > 0.0 && b < 1.0)) throw ConfigError(e.at("beta"), "beta must lie in (0, 1)");
    QuadratureConfig quad = read_quadrature(e, q);
    if (!e.has("rel_tol")) quad.rel_tol = 1e-10;
    const auto ch = read_channel_options(e, Mode::absolute, Side::both, 1e-6, 0.0);
    const auto pts = parse_points(e, {"lambda"});
    std::vector<CheckSpec> out;
    for (double b : betas) {
        out.push_back(single("laplace", ch, label(base, {{"beta", b}}), pts,
                             [b, quad](std::span<const double> x) {
                                 PointEval ev;
                                 ev.num = stable_laplace_transform(b, x[0], quad);
                                 ev.den = std::exp(-std::pow(x[0], b));
                                 ev.score = std::abs(ev.num - ev.den);
                                 ev.log_ratio = std::log(ev.num) - std::log(ev.den);
                                 return std::vector{ev};
                             },
                             Json{{"beta", b}}));
    }
    return out;
}

std::vector<CheckSpec> build_levy(Entry& e, const QuadratureConfig&, std::uint64_t) {
    const std::string base = e.string("id", std::string("levy"));
    const auto ch = read_channel_options(e, Mode::relative, Side::both, 1e-10, 0.0);
    const auto pts = parse_points(e, {"tau"});
    return {single("levy", ch, label(base, {{"beta", 0.5}}), pts,
                   [](std::span<const double> x) {
                       return std::vector{PointEval::log_form(log_stable_density(0.5, 1.0, x[0]),
                                                              std::log(levy_density_half(1.0, x[0])))};
                   },
                   Json{{"beta", 0.5}})};
}

std::vector<CheckSpec> build_subordinator_envelope(Entry& e, const QuadratureConfig&,
                                                   std::uint64_t) {
    const std::string base = e.string("id", std::string("subordinator_envelope"));
    const auto alphas = e.numbers("alpha", {0.5, 1.0, 1.5});
    check_alpha_values(e, alphas, false);
    const double margin = e.number("margin", 0.25);
    if (!(margin > 0.0)) throw ConfigError(e.at("margin"), "must be > 0");
    const auto proto = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.0);
    const auto pts = parse_points(e, {"tau"});
    std::vector<CheckSpec> out;
    for (double a : alphas) {
        CheckSpec c;
        c.kind = "subordinator_envelope";
        for (const auto& [name, side] : {std::pair{"upper", Side::upper}, std::pair{"lower", Side::lower}}) {
            ChannelSpec ch = proto;
            ch.side = side;
            ch.id = label(base, {{"alpha", a}}, name);
            c.channels.push_back(ch);
        }
        c.points = pts;
        std::vector<double> taus;
        for (std::size_t i = 0; i < pts.points.size(); ++i)
            if (pts.level == 0 || pts.coarse[i]) taus.push_back(pts.points[i][0]);
        const auto fit = fit_subordinator_envelope(a, taus, margin);
        const auto prm = fit.params;
        c.info = Json{{"alpha", a},
                      {"margin", margin},
                      {"rate_estimate", fit.rate_estimate},
                      {"C_lo", prm.C_lo},
                      {"C_hi", prm.C_hi},
                      {"prefactor_lo", fit.prefactor_lo},
                      {"prefactor_hi", fit.prefactor_hi}};
        c.eval = [prm](std::span<const double> x) {
            const double tau = x[0];
            const double ls = log_stable_density(prm.alpha / 2.0, 1.0, tau);
            const double m = std::pow(tau, -prm.c1);
            const double lpoly = -(1.0 + 0.5 * prm.alpha) * std::log(tau);
            return std::vector{PointEval::log_form(ls, -prm.C_hi * m + lpoly),
                               PointEval::log_form(ls, -prm.C_lo * m + lpoly)};
        };
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CheckSpec> build_gaussian_envelope(Entry& e, const QuadratureConfig&, std::uint64_t) {
    const std::string base = e.string("id", std::string("gaussian_envelope"));
    const auto zetas = e.numbers("zeta", {0.0});
    check_zeta_values(e, zetas);
    GaussianForm form;
    const std::string form_name = e.string("form", std::string("product-rate"));
    try {
        form = parse_gaussian_form(form_name);
    } catch (const DomainError&) {
        throw ConfigError(e.at("form"), "must be product-rate or factored-rate");
    }
    const double step = e.number("rate_step", 1.5);
    if (!(step > 1.0)) throw ConfigError(e.at("rate_step"), "must be > 1");
    const auto proto = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.0);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        std::vector<KernelSample> fit_points;
        for (std::size_t i = 0; i < pts.points.size(); ++i) {
            if (pts.level > 0 && !pts.coarse[i]) continue;
            const auto& x = pts.points[i];
            fit_points.push_back({x[0], x[1], x[2], log_p2(z, x[0], x[1], x[2])});
        }
        const auto fit = fit_gaussian_rates(z, form, fit_points, step);
        CheckSpec c;
        c.kind = "gaussian_envelope";
        const std::string tagged = base + "(" + form_name + ")";
        for (const auto& [name, side] : {std::pair{"upper", Side::upper}, std::pair{"lower", Side::lower}}) {
            ChannelSpec ch = proto;
            ch.side = side;
            ch.id = label(tagged, {{"zeta", z}}, name);
            c.channels.push_back(ch);
        }
        c.points = pts;
        c.info = Json{{"zeta", z}, {"alpha", 2.0}, {"form", form_name},
                      {"c_upper", fit.c_upper}, {"c_lower", fit.c_lower}};
        c.eval = [z, form, fit](std::span<const double> x) {
            const double lp = log_p2(z, x[0], x[1], x[2]);
            return std::vector{
                PointEval::log_form(lp, log_p2_gaussian_envelope(z, x[0], x[1], x[2], fit.c_upper, form)),
                PointEval::log_form(lp, log_p2_gaussian_envelope(z, x[0], x[1], x[2], fit.c_lower, form))};
        };
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CheckSpec> build_sharp_envelope(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("sharp_envelope"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {1.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, false);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.01);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(z, a), method, quad);
            Json info = pair_info(z, a);
            info["method"] = k.tag();
            out.push_back(single("sharp_envelope", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [k](std::span<const double> x) {
                                     return std::vector{PointEval::log_form(
                                         k.log_value(x[0], x[1], x[2]),
                                         log_sharp_envelope(k.params(), x[0], x[1], x[2]))};
                                 },
                                 std::move(info)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_regime(Entry& e, const QuadratureConfig&, std::uint64_t) {
    const std::string base = e.string("id", std::string("regime"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {1.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, false);
    const auto ch = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.0);
    const auto pts = parse_points(e, {"r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            const KernelParams p(z, a);
            Json info = pair_info(z, a);
            std::map<std::string, int> counts;
            for (const auto& x : pts.points) counts[std::string(regime_name(regime_envelope(p, x[0], x[1]).regime_tag))]++;
            info["regime_counts"] = counts;
            out.push_back(single("regime", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [p](std::span<const double> x) {
                                     const auto env = regime_envelope(p, x[0], x[1]);
                                     return std::vector{PointEval::log_form(
                                         log_sharp_envelope(p, 1.0, x[0], x[1]), std::log(env.value))};
                                 },
                                 std::move(info)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_three_g(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string base = e.string("id", std::string("three_g"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {1.0});
    check_zeta_values(e, zetas, 0.0, true);
    check_alpha_values(e, alphas, false);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto proto = read_channel_options(e, Mode::bounds, Side::upper, 0.0, 0.01);
    const auto pts = parse_points(e, {"r", "s", "z", "t", "tau"});
    std::vector<CheckSpec> out;
    for (double zeta : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(zeta, a), method, quad);
            CheckSpec c;
            c.kind = "three_g";
            for (const char* name : {"min_form", "product_form"}) {
                ChannelSpec ch = proto;
                ch.id = label(base, {{"zeta", zeta}, {"alpha", a}}, name);
                c.channels.push_back(ch);
            }
            c.points = pts;
            c.info = pair_info(zeta, a);
            c.info["method"] = k.tag();
            c.eval = [k](std::span<const double> x) {
                const double r = x[0], s = x[1], z = x[2], t = x[3], tau = x[4];
                const double lsum = k.log_value(t + tau, r, s);
                const auto g = log_three_g_from(k.params().zeta, r, s, z, k.log_value(t, r, z),
                                                k.log_value(tau, z, s), lsum);
                return std::vector{PointEval::log_form(g.min_form + lsum, lsum),
                                   PointEval::log_form(g.product_form + lsum, lsum)};
            };
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<CheckSpec> build_weight_f(Entry& e, const QuadratureConfig&, std::uint64_t) {
    const std::string base = e.string("id", std::string("weight_f"));
    const auto zetas = e.numbers("zeta", {1.0});
    check_zeta_values(e, zetas, 0.0, true);
    const auto ch = read_channel_options(e, Mode::bounds, Side::both, 0.0, 0.0);
    const auto pts = parse_points(e, {"r", "s", "z"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        out.push_back(single("weight_f", ch, label(base, {{"zeta", z}}), pts,
                             [z](std::span<const double> x) {
                                 return std::vector{PointEval::ratio(weight_f_smooth(z, x[0], x[1], x[2]),
                                                                     weight_f(z, x[0], x[1], x[2]))};
                             },
                             Json{{"zeta", z}}));
    }
    return out;
}

// Coordinates accepted by a comparability item. Besides the raw variables,
// each item has a parametrization that puts its hypothesis boundary on the
// grid: z = q s (items 2, 3), r = q s (item 4) and, for item 5, one of z, r
// is an axis and the other sits at distance ratio 2/(1 + e) from s, on the
// same or the opposite side.
struct ComparabilityCoords {
    std::vector<std::string> names;
    bool adapted = false;
};

std::vector<ComparabilityCoords> comparability_coords(ComparabilityItem item) {
    switch (item) {
        case ComparabilityItem::item1: return {{{"tau", "z", "s"}, false}};
        case ComparabilityItem::item4: return {{{"r", "s"}, false}, {{"q", "s"}, true}};
        case ComparabilityItem::item4_min: return {{{"r", "s"}, false}};
        case ComparabilityItem::item5: return {{{"t", "z", "r", "s"}, false}, {{"t", "z", "s", "e"}, true}, {{"t", "r", "s", "e"}, true}};
        default: return {{{"tau", "z", "s"}, false}, {{"tau", "q", "s"}, true}};
    }
}

std::set<std::string> configured_axis_names(Entry& e) {
    std::set<std::string> names;
    for (const char* key : {"grid", "samples"}) {
        if (!e.has(key)) continue;
        const Json& j = e.raw(key);
        if (!j.is_object() || !j.contains("axes") || !j.at("axes").is_array()) continue;
        for (const auto& a : j.at("axes"))
            if (a.is_object() && a.contains("name") && a.at("name").is_string())
                names.insert(a.at("name").get<std::string>());
    }
    return names;
}

std::vector<CheckSpec> build_comparability(Entry& e, const QuadratureConfig& q, std::uint64_t) {
    const std::string item_name = e.string("item");
    ComparabilityItem item;
    try {
        item = parse_comparability_item(item_name);
    } catch (const DomainError&) {
        throw ConfigError(e.at("item"), "must be one of 1, 2a, 2b, 2c, 3, 4, 4min, 5");
    }
    const std::string base = e.string("id", "comparability_" + item_name);
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {1.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, !comparability_needs_subordination(item));
    const double default_c = item == ComparabilityItem::item1 ? 0.25 : 1.0;
    const double C = e.number("C", default_c);
    if (!(C > 0.0)) throw ConfigError(e.at("C"), "must be > 0");
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::bounds, Side::upper, 0.0, 0.01);

    const auto options = comparability_coords(item);
    const auto given = configured_axis_names(e);
    ComparabilityCoords coords = options.front();
    for (const auto& o : options)
        if (std::set<std::string>(o.names.begin(), o.names.end()) == given) coords = o;
    const auto pts = parse_points(e, coords.names);
    double branch = 0.0;
    if (item == ComparabilityItem::item5 && coords.adapted) {
        const std::string b = e.string("branch");
        if (b == "same") branch = 1.0;
        else if (b == "opposite") branch = -1.0;
        else throw ConfigError(e.at("branch"), "must be 'same' or 'opposite'");
    }
    const bool adapted = coords.adapted;
    const auto names = coords.names;
    const bool z_axis = std::find(names.begin(), names.end(), "z") != names.end();

    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(z, a), method, quad);
            Json info = pair_info(z, a);
            info["item"] = item_name;
            info["C"] = C;
            info["coordinates"] = names;
            if (branch != 0.0) info["branch"] = branch < 0 ? "opposite" : "same";
            info["method"] = k.tag();
            out.push_back(single("comparability", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [k, item, C, names, adapted, branch, z_axis](std::span<const double> x) {
                                     ComparabilityPoint pt;
                                     pt.C = C;
                                     double qv = 0.0, ev = 0.0;
                                     for (std::size_t i = 0; i < names.size(); ++i) {
                                         const auto& n = names[i];
                                         if (n == "tau") pt.tau = x[i];
                                         else if (n == "t") pt.t = x[i];
                                         else if (n == "r") pt.r = x[i];
                                         else if (n == "s") pt.s = x[i];
                                         else if (n == "z") pt.z = x[i];
                                         else if (n == "q") qv = x[i];
                                         else if (n == "e") ev = x[i];
                                     }
                                     if (adapted) {
                                         if (item == ComparabilityItem::item4) {
                                             pt.r = qv * pt.s;
                                         } else if (item != ComparabilityItem::item5) {
                                             pt.z = qv * pt.s;
                                         } else if (z_axis) {
                                             pt.r = pt.s + branch * 2.0 * (pt.z - pt.s) / (1.0 + ev);
                                         } else {
                                             pt.z = pt.s + branch * (1.0 + ev) * (pt.r - pt.s) / 2.0;
                                         }
                                     }
                                     if (!(pt.z > 0.0) || !(pt.r > 0.0)) return std::vector{PointEval::skip()};
                                     try {
                                         const double lr = log_comparability_check(item, k, pt);
                                         return std::vector{PointEval::log_form(lr, 0.0)};
                                     } catch (const HypothesisError&) {
                                         return std::vector{PointEval::skip()};
                                     }
                                 },
                                 std::move(info)));
        }
    }
    return out;
}

std::vector<CheckSpec> build_mc(Entry& e, const QuadratureConfig& q, std::uint64_t seed) {
    const std::string base = e.string("id", std::string("mc"));
    const auto zetas = e.numbers("zeta", {0.0});
    const auto alphas = e.numbers("alpha", {1.0});
    check_zeta_values(e, zetas);
    check_alpha_values(e, alphas, false);
    const long long n = e.integer("n", 1000000, 1, 1000000000);
    const Method method = read_method(e);
    const auto quad = read_quadrature(e, q);
    const auto ch = read_channel_options(e, Mode::zscore, Side::both, 3.0, 0.10);
    const auto pts = parse_points(e, {"t", "r", "s"});
    std::vector<CheckSpec> out;
    for (double z : zetas) {
        for (double a : alphas) {
            Kernel k(KernelParams(z, a), method, quad);
            Json info = pair_info(z, a);
            info["n"] = n;
            info["method"] = k.tag();
            const std::uint64_t check_seed = mix(seed ^ mix(static_cast<std::uint64_t>(z * 1e6) ^
                                                            (static_cast<std::uint64_t>(a * 1e6) << 32)));
            out.push_back(single("mc", ch, label(base, {{"zeta", z}, {"alpha", a}}), pts,
                                 [k, n, check_seed](std::span<const double> x) {
                                     const auto est = mc_kernel(k.params(), x[0], x[1], x[2], n,
                                                                point_seed(check_seed, x));
                                     const double ref = k(x[0], x[1], x[2]);
                                     PointEval ev = PointEval::ratio(est.mean, ref);
                                     ev.score = est.std_error > 0.0 ? (est.mean - ref) / est.std_error : 0.0;
                                     ev.insufficient = est.status != McStatus::ok;
                                     return std::vector{ev};
                                 },
                                 std::move(info)));
        }
    }
    return out;
}

const std::map<std::string, Builder>& registry() {
    static const std::map<std::string, Builder> r{
        {"identity", build_identity},
        {"closed_form", build_closed_form},
        {"alpha2_closed", build_alpha2_closed},
        {"normalization", build_normalization},
        {"chapman", build_chapman},
        {"scaling", build_scaling},
        {"laplace", build_laplace},
        {"levy", build_levy},
        {"subordinator_envelope", build_subordinator_envelope},
        {"gaussian_envelope", build_gaussian_envelope},
        {"sharp_envelope", build_sharp_envelope},
        {"regime", build_regime},
        {"three_g", build_three_g},
        {"weight_f", build_weight_f},
        {"comparability", build_comparability},
        {"mc", build_mc},
    };
    return r;
}

}  // namespace

std::vector<std::string> check_kinds() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) {
        (void)v;
        out.push_back(k);
    }
    return out;
}

std::vector<CheckSpec> build_checks(const Json& entry, const std::string& path,
                                    const QuadratureConfig& quad, std::uint64_t seed,
                                    const ExecOptions&) {
    Entry e(entry, path);
    const std::string kind = e.string("kind");
    const auto it = registry().find(kind);
    if (it == registry().end()) throw ConfigError(e.at("kind"), "unknown check kind '" + kind + "'");
    if (e.has("group")) (void)e.string("group");
    std::vector<CheckSpec> out;
    try {
        out = it->second(e, quad, seed);
    } catch (const DomainError& err) {
        throw ConfigError(path, err.what());
    }
    e.finish();
    return out;
}

}  // namespace sbk::verify
