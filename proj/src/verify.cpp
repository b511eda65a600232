#include "sbk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace sbk::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PointEval PointEval::skip() {
    PointEval e;
    e.admissible = false;
    e.num = e.den = e.log_ratio = e.score = kNaN;
    return e;
}

PointEval PointEval::ratio(double num, double den) {
    PointEval e;
    e.num = num;
    e.den = den;
    e.log_ratio = std::log(num) - std::log(den);
    if (num == den) e.log_ratio = 0.0;
    e.score = std::abs(num / den - 1.0);
    return e;
}

PointEval PointEval::log_form(double log_num, double log_den) {
    PointEval e;
    e.num = std::exp(log_num);
    e.den = std::exp(log_den);
    e.log_ratio = log_num == log_den ? 0.0 : log_num - log_den;
    e.score = std::abs(std::expm1(e.log_ratio));
    return e;
}

std::string_view status_name(Status status) {
    switch (status) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::insufficient_precision: return "insufficient-precision";
    }
    return "fail";
}

Mode parse_mode(std::string_view name) {
    if (name == "bounds") return Mode::bounds;
    if (name == "relative") return Mode::relative;
    if (name == "absolute") return Mode::absolute;
    if (name == "zscore") return Mode::zscore;
    throw ConfigError("mode", "unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::bounds: return "bounds";
        case Mode::relative: return "relative";
        case Mode::absolute: return "absolute";
        case Mode::zscore: return "zscore";
    }
    return "bounds";
}

Side parse_side(std::string_view name) {
    if (name == "upper") return Side::upper;
    if (name == "lower") return Side::lower;
    if (name == "both") return Side::both;
    throw ConfigError("side", "must be upper, lower or both");
}

std::string_view side_name(Side side) {
    switch (side) {
        case Side::upper: return "upper";
        case Side::lower: return "lower";
        case Side::both: return "both";
    }
    return "both";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<std::vector<PointEval>> evaluate_points(const CheckSpec& check,
                                                    const ExecOptions& exec) {
    const auto& pts = check.points.points;
    const std::size_t n = pts.size();
    std::vector<std::vector<PointEval>> out(n);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t err_index = n;
    std::string err_what;
    const std::string id = check.channels.empty() ? check.kind : check.channels.front().id;

    auto worker = [&] {
        constexpr std::size_t kBlock = 8;
        for (;;) {
            const std::size_t begin = next.fetch_add(kBlock);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + kBlock);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    out[i] = check.eval(pts[i]);
                    if (out[i].size() != check.channels.size())
                        throw std::logic_error("channel count mismatch");
                } catch (const std::exception& e) {
                    std::lock_guard lock(mu);
                    if (i < err_index) {
                        err_index = i;
                        err_what = e.what();
                    }
                    return;
                }
            }
        }
    };
    const int threads = std::max(1, std::min<int>(exec.threads, static_cast<int>(n)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err_index < n) throw PointError(id, pts[err_index], err_what);
    return out;
}

namespace {

struct Stats {
    std::size_t admissible = 0;
    std::size_t skipped = 0;
    std::size_t insufficient = 0;
    std::size_t used = 0;
    std::size_t nonfinite = 0;
    double sup = -kInf;
    double inf = kInf;
    std::size_t argmax = 0;
    std::size_t argmin = 0;
    double max_score = 0.0;
    std::size_t argscore = 0;
    bool any_score = false;
};

Stats collect(const std::vector<std::vector<PointEval>>& evals, std::size_t ch, const PointSet& ps,
              bool coarse_only) {
    Stats st;
    for (std::size_t i = 0; i < evals.size(); ++i) {
        if (coarse_only && !ps.coarse[i]) continue;
        const auto& e = evals[i][ch];
        if (!e.admissible) {
            ++st.skipped;
            continue;
        }
        ++st.admissible;
        if (e.insufficient) {
            ++st.insufficient;
            continue;
        }
        ++st.used;
        if (std::isnan(e.log_ratio)) {
            ++st.nonfinite;
        } else {
            if (e.log_ratio > st.sup) {
                st.sup = e.log_ratio;
                st.argmax = i;
            }
            if (e.log_ratio < st.inf) {
                st.inf = e.log_ratio;
                st.argmin = i;
            }
        }
        const double sc = std::abs(e.score);
        if (std::isnan(sc)) {
            ++st.nonfinite;
        } else if (!st.any_score || sc > st.max_score) {
            st.max_score = sc;
            st.argscore = i;
            st.any_score = true;
        }
    }
    return st;
}

bool upper_side(Side s) { return s != Side::lower; }
bool lower_side(Side s) { return s != Side::upper; }

}  // namespace

std::vector<RatioReport> summarize(const CheckSpec& check,
                                   const std::vector<std::vector<PointEval>>& evals) {
    const auto& ps = check.points;
    std::vector<RatioReport> reports;
    for (std::size_t ch = 0; ch < check.channels.size(); ++ch) {
        const auto& spec = check.channels[ch];
        const Stats fine = collect(evals, ch, ps, false);
        RatioReport rep;
        rep.check_id = spec.id;
        rep.kind = check.kind;
        rep.mode = spec.mode;
        rep.side = spec.side;
        rep.axis_names = ps.names;
        rep.n_points = ps.points.size();
        rep.n_admissible = fine.admissible;
        rep.n_skipped = fine.skipped;
        rep.n_insufficient = fine.insufficient;
        rep.refinement_level = ps.level;
        rep.info = check.info;
        rep.sup_ratio = std::exp(fine.sup);
        rep.inf_ratio = std::exp(fine.inf);
        if (fine.sup >= fine.inf) {
            rep.argmax_point = ps.points[fine.argmax];
            rep.argmin_point = ps.points[fine.argmin];
        } else {
            rep.sup_ratio = rep.inf_ratio = kNaN;
        }
        if (fine.any_score) {
            rep.max_score = fine.max_score;
            rep.max_score_point = ps.points[fine.argscore];
        }

        auto fail = [&](std::string why) {
            rep.status = Status::fail;
            rep.reasons.push_back(std::move(why));
        };

        if (fine.used == 0) fail("no admissible points");
        if (fine.nonfinite > 0) fail(std::to_string(fine.nonfinite) + " non-finite evaluations");

        const bool with_coarse = ps.level >= 1;
        Stats coarse;
        if (with_coarse) coarse = collect(evals, ch, ps, true);
        const double ref_sup = with_coarse ? coarse.sup : fine.sup;
        const double ref_inf = with_coarse ? coarse.inf : fine.inf;
        rep.upper_ceiling = spec.upper_ceiling;
        rep.lower_floor = spec.lower_floor;
        if (spec.upper_scale) rep.upper_ceiling = *spec.upper_scale * std::exp(ref_sup);
        if (spec.lower_scale) rep.lower_floor = *spec.lower_scale * std::exp(ref_inf);

        if (with_coarse && fine.used > 0 && coarse.used > 0) {
            double drift = 0.0;
            if (upper_side(spec.side) || spec.mode != Mode::bounds) {
                drift = std::max(drift, std::expm1(fine.sup - coarse.sup));
            }
            if (lower_side(spec.side) || spec.mode != Mode::bounds) {
                drift = std::max(drift, -std::expm1(fine.inf - coarse.inf));
            }
            rep.refinement_drift = std::isnan(drift) ? kInf : drift;
        }

        if (fine.used > 0) {
            switch (spec.mode) {
                case Mode::bounds:
                    if (upper_side(spec.side)) {
                        if (!std::isfinite(rep.sup_ratio)) fail("sup not finite");
                        if (rep.upper_ceiling && !(rep.sup_ratio <= *rep.upper_ceiling))
                            fail("sup exceeds ceiling " + format_number(*rep.upper_ceiling));
                    }
                    if (lower_side(spec.side)) {
                        if (!(rep.inf_ratio > 0.0)) fail("inf not positive");
                        if (rep.lower_floor && !(rep.inf_ratio >= *rep.lower_floor))
                            fail("inf below floor " + format_number(*rep.lower_floor));
                    }
                    if (rep.refinement_drift && !(*rep.refinement_drift < spec.max_drift))
                        fail("refinement drift " + format_number(*rep.refinement_drift) +
                             " >= " + format_number(spec.max_drift));
                    break;
                case Mode::relative:
                case Mode::absolute:
                case Mode::zscore:
                    if (!(rep.max_score <= spec.tolerance))
                        fail("max " + std::string(spec.mode == Mode::zscore ? "|z|" : "error") +
                             " " + format_number(rep.max_score) + " > " +
                             format_number(spec.tolerance));
                    break;
            }
        }
        if (rep.status == Status::pass && fine.admissible > 0) {
            const double frac =
                static_cast<double>(fine.insufficient) / static_cast<double>(fine.admissible);
            if (frac > spec.max_insufficient) {
                rep.status = Status::insufficient_precision;
                rep.reasons.push_back("insufficient-precision fraction " + format_number(frac) +
                                      " > " + format_number(spec.max_insufficient));
            }
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<RatioReport> sweep_ratio(const CheckSpec& check, const ExecOptions& exec) {
    return summarize(check, evaluate_points(check, exec));
}

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json point_json(const std::vector<std::string>& names, const std::vector<double>& pt) {
    if (pt.empty()) return nullptr;
    Json j = Json::object();
    for (std::size_t i = 0; i < pt.size() && i < names.size(); ++i) j[names[i]] = pt[i];
    return j;
}

}  // namespace

Json to_json(const RatioReport& r) {
    Json j;
    j["check_id"] = r.check_id;
    j["kind"] = r.kind;
    j["mode"] = mode_name(r.mode);
    if (r.mode == Mode::bounds) j["side"] = side_name(r.side);
    j["status"] = status_name(r.status);
    j["sup_ratio"] = number_or_null(r.sup_ratio);
    j["inf_ratio"] = number_or_null(r.inf_ratio);
    j["argmax_point"] = point_json(r.axis_names, r.argmax_point);
    j["argmin_point"] = point_json(r.axis_names, r.argmin_point);
    if (r.mode != Mode::bounds) {
        j[r.mode == Mode::zscore ? "max_abs_z" : "max_error"] = number_or_null(r.max_score);
        j["max_error_point"] = point_json(r.axis_names, r.max_score_point);
    }
    j["n_points"] = r.n_points;
    j["n_admissible"] = r.n_admissible;
    j["n_skipped"] = r.n_skipped;
    j["n_insufficient"] = r.n_insufficient;
    j["refinement_level"] = r.refinement_level;
    j["refinement_drift"] = r.refinement_drift ? number_or_null(*r.refinement_drift) : Json(nullptr);
    if (r.upper_ceiling) j["upper_ceiling"] = number_or_null(*r.upper_ceiling);
    if (r.lower_floor) j["lower_floor"] = number_or_null(*r.lower_floor);
    j["reasons"] = r.reasons;
    j["info"] = r.info;
    return j;
}

std::string reports_csv(const std::vector<RatioReport>& reports) {
    std::string out = "check_id,sup,inf,drift,status\n";
    for (const auto& r : reports) {
        out += r.check_id + "," + format_number(r.sup_ratio) + "," + format_number(r.inf_ratio) +
               "," + (r.refinement_drift ? format_number(*r.refinement_drift) : std::string()) +
               "," + std::string(status_name(r.status)) + "\n";
    }
    return out;
}

std::string sweep_csv(const CheckSpec& check, std::size_t channel, int chunk_k, int chunk_n,
                      const ExecOptions& exec) {
    if (channel >= check.channels.size()) throw ConfigError("channel", "out of range");
    if (chunk_n < 1 || chunk_k < 1 || chunk_k > chunk_n)
        throw ConfigError("chunk", "must satisfy 1 <= k <= n");
    const std::size_t total = check.points.points.size();
    const std::size_t lo = total * static_cast<std::size_t>(chunk_k - 1) / static_cast<std::size_t>(chunk_n);
    const std::size_t hi = total * static_cast<std::size_t>(chunk_k) / static_cast<std::size_t>(chunk_n);
    CheckSpec part = check;
    part.points.points.assign(check.points.points.begin() + static_cast<std::ptrdiff_t>(lo),
                              check.points.points.begin() + static_cast<std::ptrdiff_t>(hi));
    part.points.coarse.assign(check.points.coarse.begin() + static_cast<std::ptrdiff_t>(lo),
                              check.points.coarse.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto evals = evaluate_points(part, exec);
    std::string out = "index";
    for (const auto& n : check.points.names) out += "," + n;
    out += ",numerator,denominator,ratio,admissible\n";
    for (std::size_t i = 0; i < evals.size(); ++i) {
        const auto& e = evals[i][channel];
        out += std::to_string(lo + i);
        for (double x : part.points.points[i]) out += "," + format_number(x);
        const double ratio = e.admissible ? std::exp(e.log_ratio) : kNaN;
        out += "," + format_number(e.num) + "," + format_number(e.den) + "," +
               format_number(ratio) + "," + (e.admissible ? "1" : "0") + "\n";
    }
    return out;
}

// --- suites -----------------------------------------------------------------

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

constexpr std::uint64_t kDefaultSeed = 20261016;

const Json& require_field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "required field missing");
    return obj.at(key);
}

QuadratureConfig parse_quadrature(const Json& j, const std::string& path) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    if (j.is_null()) return cfg;
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "rel_tol") {
            if (!value.is_number() || !(value.get<double>() > 0.0) || value.get<double>() >= 1.0)
                throw ConfigError(path + ".rel_tol", "must be a number in (0, 1)");
            cfg.rel_tol = value.get<double>();
        } else if (key == "max_panels") {
            if (!value.is_number_integer() || value.get<long long>() < 16 ||
                value.get<long long>() > 1000000)
                throw ConfigError(path + ".max_panels", "must be an integer in [16, 1e6]");
            cfg.max_panels = value.get<int>();
        } else {
            throw ConfigError(path + "." + key, "unknown field");
        }
    }
    return cfg;
}

bool matches(const Json& entry, const std::vector<std::string>& only) {
    if (only.empty()) return true;
    for (const auto& o : only) {
        for (const char* key : {"group", "kind", "id"}) {
            if (entry.contains(key) && entry.at(key).is_string() && entry.at(key).get<std::string>() == o)
                return true;
        }
    }
    return false;
}

struct TopLevel {
    std::string name = "custom";
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    QuadratureConfig quad;
    const Json* checks = nullptr;
};

TopLevel parse_top(const Json& config) {
    if (!config.is_object()) throw ConfigError("$", "config must be a JSON object");
    TopLevel top;
    top.quad = parse_quadrature(nullptr, "quadrature");
    for (const auto& [key, value] : config.items()) {
        if (key == "suite") {
            if (!value.is_string()) throw ConfigError("suite", "must be a string");
            top.name = value.get<std::string>();
        } else if (key == "seed") {
            if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                               value.get<long long>() < 0))
                throw ConfigError("seed", "must be a non-negative integer");
            top.seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
            if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 1024)
                throw ConfigError("threads", "must be an integer in [1, 1024]");
            top.threads = value.get<int>();
        } else if (key == "quadrature") {
            top.quad = parse_quadrature(value, "quadrature");
        } else if (key == "checks") {
            if (!value.is_array()) throw ConfigError("checks", "must be an array");
            top.checks = &value;
        } else if (key == "description") {
            if (!value.is_string()) throw ConfigError("description", "must be a string");
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    require_field(config, "checks", "");
    return top;
}

}  // namespace

void validate_config(const Json& config) {
    const TopLevel top = parse_top(config);
    ExecOptions exec{top.threads};
    for (std::size_t i = 0; i < top.checks->size(); ++i) {
        const std::string path = "checks[" + std::to_string(i) + "]";
        (void)build_checks((*top.checks)[i], path, top.quad, top.seed, exec);
    }
}

SuiteResult run_suite(const Json& config, const SuiteOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    TopLevel top = parse_top(config);
    if (options.seed) top.seed = *options.seed;
    if (options.threads) top.threads = *options.threads;
    const ExecOptions exec{top.threads};

    // Build everything first so schema errors surface before any work.
    struct Planned {
        std::size_t entry;
        std::vector<CheckSpec> checks;
    };
    std::vector<Planned> plan;
    for (std::size_t i = 0; i < top.checks->size(); ++i) {
        const Json& entry = (*top.checks)[i];
        const std::string path = "checks[" + std::to_string(i) + "]";
        if (!entry.is_object()) throw ConfigError(path, "must be an object");
        if (!matches(entry, options.only)) continue;
        plan.push_back({i, build_checks(entry, path, top.quad, top.seed + i, exec)});
    }

    SuiteResult result;
    Json records = Json::array();
    std::size_t points = 0;
    std::size_t insufficient = 0;
    std::size_t n_pass = 0;
    std::size_t n_fail = 0;
    std::size_t n_insuf = 0;
    for (const auto& p : plan) {
        for (const auto& check : p.checks) {
            try {
                for (auto& rep : sweep_ratio(check, exec)) {
                    points += rep.n_admissible;
                    insufficient += rep.n_insufficient;
                    if (rep.status == Status::pass) ++n_pass;
                    else if (rep.status == Status::fail) ++n_fail;
                    else ++n_insuf;
                    records.push_back(to_json(rep));
                    result.reports.push_back(std::move(rep));
                }
            } catch (const std::exception& e) {
                result.numerical_failure = true;
                for (const auto& ch : check.channels) {
                    Json j;
                    j["check_id"] = ch.id;
                    j["kind"] = check.kind;
                    j["status"] = status_name(Status::fail);
                    j["error"] = e.what();
                    j["info"] = check.info;
                    records.push_back(std::move(j));
                    ++n_fail;
                }
            }
        }
    }
    result.passed = n_fail == 0 && n_insuf == 0;

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json& rep = result.report;
    rep["suite"] = top.name;
    rep["seed"] = top.seed;
    rep["generated_at"] = utc_now();
    rep["elapsed_seconds"] = elapsed;
    rep["status"] = result.numerical_failure ? "numerical-failure" : (result.passed ? "pass" : "fail");
    rep["quadrature"] = {{"rel_tol", top.quad.rel_tol}, {"max_panels", top.quad.max_panels}};
    rep["summary"] = {{"checks", records.size()},
                      {"pass", n_pass},
                      {"fail", n_fail},
                      {"insufficient_precision", n_insuf},
                      {"points", points},
                      {"insufficient_points", insufficient}};
    rep["checks"] = std::move(records);
    return result;
}

}  // namespace sbk::verify
