#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbk/bessel_kernel.hpp"
#include "sbk/envelopes.hpp"
#include "sbk/mc_oracle.hpp"
#include "sbk/stable.hpp"
#include "sbk/subordinated_kernel.hpp"
#include "sbk/verify.hpp"

namespace {

using sbk::verify::Json;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

Json num_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    out << text;
}

// A flat record rendered in one of the three formats.
struct Record {
    std::vector<std::pair<std::string, Json>> fields;

    void add(const std::string& key, Json value) { fields.emplace_back(key, std::move(value)); }

    static std::string plain_value(const Json& v) {
        if (v.is_null()) return "nan";
        if (v.is_number_float()) return num17(v.get<double>());
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    [[nodiscard]] std::string render(const std::string& format) const {
        if (format == "json") {
            Json j = Json::object();
            for (const auto& [k, v] : fields) j[k] = v;
            return j.dump(2) + "\n";
        }
        std::string head;
        std::string row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string sep = i ? (format == "csv" ? "," : "\n") : "";
            head += (i ? "," : "") + fields[i].first;
            row += sep + (format == "csv" ? "" : fields[i].first + " ") + plain_value(fields[i].second);
        }
        if (format == "csv") return head + "\n" + row + "\n";
        return row + "\n";
    }
};

struct PointArgs {
    double zeta = 0.0;
    double alpha = 2.0;
    double t = 1.0;
    double r = 1.0;
    double s = 1.0;
};

void add_point_options(CLI::App* cmd, PointArgs& p, bool need_t = true) {
    cmd->add_option("--zeta", p.zeta, "Bessel index, > -1/2")->required();
    cmd->add_option("--alpha", p.alpha, "stability order in (0, 2]")->required();
    if (need_t) cmd->add_option("--t", p.t, "time, > 0")->required();
    cmd->add_option("--r", p.r, "first radius, > 0")->required();
    cmd->add_option("--s", p.s, "second radius, > 0")->required();
}

void validate_point(const PointArgs& p, bool allow_alpha2 = true) {
    if (!(p.zeta > -0.5) || !std::isfinite(p.zeta)) throw UsageError("--zeta must be > -1/2");
    if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw UsageError("--alpha must lie in (0, 2]");
    if (!allow_alpha2 && p.alpha == 2.0) throw UsageError("--alpha must lie in (0, 2) here");
    for (auto [v, name] : {std::pair{p.t, "--t"}, std::pair{p.r, "--r"}, std::pair{p.s, "--s"}}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be a positive finite number");
    }
}

struct QuadArgs {
    double rel_tol = 1e-10;
    int max_panels = 4096;
};

void add_quad_options(CLI::App* cmd, QuadArgs& q) {
    cmd->add_option("--rel-tol", q.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--max-panels", q.max_panels, "quadrature panel budget");
}

sbk::QuadratureConfig make_quad(const QuadArgs& q) {
    if (!(q.rel_tol > 0.0 && q.rel_tol < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
    if (q.max_panels < 16) throw UsageError("--max-panels must be >= 16");
    sbk::QuadratureConfig cfg;
    cfg.rel_tol = q.rel_tol;
    cfg.max_panels = q.max_panels;
    return cfg;
}

std::string format_option(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"plain", "json", "csv"}));
    return format;
}

// --- eval -------------------------------------------------------------------

int cmd_eval(const PointArgs& p, const std::string& method_name, const QuadArgs& qa,
             const std::string& format, const std::string& output) {
    validate_point(p);
    const auto cfg = make_quad(qa);
    const sbk::KernelParams params(p.zeta, p.alpha);
    Record rec;
    for (auto [k, v] : {std::pair{"zeta", p.zeta}, {"alpha", p.alpha}, {"t", p.t}, {"r", p.r}, {"s", p.s}})
        rec.add(k, v);
    if (method_name == "all") {
        std::vector<std::pair<std::string, double>> values;
        if (p.alpha == 2.0) {
            values.emplace_back("alpha2", sbk::p2(p.zeta, p.t, p.r, p.s));
            if (p.zeta == 1.0) values.emplace_back("alpha2-zeta1-closed", sbk::p2_zeta1_closed(p.t, p.r, p.s));
        } else {
            values.emplace_back("quadrature", sbk::p_alpha(params, p.t, p.r, p.s, cfg));
            if (p.alpha == 1.0) values.emplace_back("closed-form", sbk::p_alpha1_closed(p.zeta, p.t, p.r, p.s));
        }
        double dev = 0.0;
        for (const auto& a : values)
            for (const auto& b : values) dev = std::max(dev, std::abs(a.second - b.second) / std::abs(b.second));
        for (const auto& [tag, v] : values) rec.add(tag, num_json(v));
        rec.add("max_rel_deviation", num_json(dev));
    } else {
        sbk::Method method;
        try {
            method = sbk::parse_method(method_name);
        } catch (const sbk::DomainError&) {
            throw UsageError("--method must be auto, quadrature, closed or all");
        }
        if (method == sbk::Method::closed_form && p.alpha != 1.0)
            throw UsageError("--method closed needs --alpha 1");
        const sbk::Kernel kernel(params, method, cfg);
        rec.add("value", num_json(kernel(p.t, p.r, p.s)));
        rec.add("method", std::string(kernel.tag()));
    }
    emit(rec.render(format), output);
    return kPass;
}

// --- envelope -----------------------------------------------------------------

int cmd_envelope(const PointArgs& p, const std::string& type, const std::string& form, double c_exp,
                 const QuadArgs& qa, const std::string& format, const std::string& output) {
    validate_point(p);
    const auto cfg = make_quad(qa);
    const sbk::KernelParams params(p.zeta, p.alpha);
    Record rec;
    for (auto [k, v] : {std::pair{"zeta", p.zeta}, {"alpha", p.alpha}, {"t", p.t}, {"r", p.r}, {"s", p.s}})
        rec.add(k, v);
    rec.add("type", type);
    const double value = sbk::Kernel(params, sbk::Method::automatic, cfg)(p.t, p.r, p.s);
    double env = 0.0;
    if (type == "sharp") {
        if (p.alpha == 2.0) throw UsageError("sharp envelope needs --alpha < 2");
        env = sbk::sharp_envelope(params, p.t, p.r, p.s);
    } else if (type == "regime") {
        if (p.alpha == 2.0) throw UsageError("regime envelope needs --alpha < 2");
        if (p.t != 1.0) throw UsageError("regime envelope is defined at --t 1");
        const auto ev = sbk::regime_envelope(params, p.r, p.s);
        env = ev.value;
        rec.add("regime", std::string(sbk::regime_name(ev.regime_tag)));
    } else {
        if (p.alpha != 2.0) throw UsageError("gaussian envelope needs --alpha 2");
        if (!(c_exp > 0.0)) throw UsageError("--c-exp must be > 0");
        sbk::GaussianForm gf;
        try {
            gf = sbk::parse_gaussian_form(form);
        } catch (const sbk::DomainError&) {
            throw UsageError("--form must be product-rate or factored-rate");
        }
        env = sbk::p2_gaussian_envelope(p.zeta, p.t, p.r, p.s, c_exp, gf);
        rec.add("form", form);
        rec.add("c_exp", c_exp);
    }
    rec.add("envelope", num_json(env));
    rec.add("kernel", num_json(value));
    rec.add("ratio", num_json(value / env));
    emit(rec.render(format), output);
    return kPass;
}

// --- mc ---------------------------------------------------------------------

int cmd_mc(const PointArgs& p, long long n, std::uint64_t seed, int threads, const QuadArgs& qa,
           const std::string& format, const std::string& output) {
    validate_point(p, false);
    if (n < 1) throw UsageError("--n must be >= 1");
    if (threads < 1) throw UsageError("--threads must be >= 1");
    const auto cfg = make_quad(qa);
    const sbk::KernelParams params(p.zeta, p.alpha);
    const auto est = sbk::mc_kernel(params, p.t, p.r, p.s, n, seed, threads);
    const sbk::Kernel kernel(params, sbk::Method::automatic, cfg);
    const double ref = kernel(p.t, p.r, p.s);
    const double z = est.std_error > 0.0 ? (est.mean - ref) / est.std_error
                                         : std::numeric_limits<double>::quiet_NaN();
    Record rec;
    for (auto [k, v] : {std::pair{"zeta", p.zeta}, {"alpha", p.alpha}, {"t", p.t}, {"r", p.r}, {"s", p.s}})
        rec.add(k, v);
    rec.add("n", est.n);
    rec.add("seed", est.seed);
    rec.add("mean", num_json(est.mean));
    rec.add("std_error", num_json(est.std_error));
    rec.add("reference", num_json(ref));
    rec.add("reference_method", std::string(kernel.tag()));
    rec.add("z_score", num_json(z));
    rec.add("status", std::string(sbk::mc_status_name(est.status)));
    emit(rec.render(format), output);
    if (est.status != sbk::McStatus::ok) return kPass;
    return std::abs(z) <= 3.0 ? kPass : kFail;
}

// --- verify -----------------------------------------------------------------

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError(path + ": invalid JSON: " + e.what());
    }
}

int cmd_verify(const std::string& suite, const std::string& config, const std::vector<std::string>& only,
               std::optional<std::uint64_t> seed, std::optional<int> threads, const std::string& output,
               const std::string& csv) {
    if (suite.empty() == config.empty()) throw UsageError("give exactly one of --suite or --config");
    if (threads && *threads < 1) throw UsageError("--threads must be >= 1");
    const Json cfg = config.empty() ? sbk::verify::builtin_suite(suite) : load_json(config);
    sbk::verify::SuiteOptions opts;
    opts.only = only;
    opts.seed = seed;
    opts.threads = threads;
    const auto result = sbk::verify::run_suite(cfg, opts);
    emit(result.report.dump(2) + "\n", output);
    if (!csv.empty()) emit(sbk::verify::reports_csv(result.reports), csv);
    const auto& sum = result.report["summary"];
    std::cerr << "suite " << result.report["suite"].get<std::string>() << ": "
              << result.report["status"].get<std::string>() << " (" << sum["pass"] << " pass, "
              << sum["fail"] << " fail, " << sum["insufficient_precision"]
              << " insufficient-precision)\n";
    if (result.numerical_failure) return kNumerical;
    return result.passed ? kPass : kFail;
}

// --- sweep ------------------------------------------------------------------

sbk::verify::Axis parse_axis_flag(const std::string& text) {
    // name:min:max:count[:log|linear]
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4 && parts.size() != 5)
        throw UsageError("--axis '" + text + "' must be name:min:max:count[:log|linear]");
    sbk::verify::Axis a;
    a.name = parts[0];
    auto parse_double = [&](const std::string& s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw UsageError("--axis '" + text + "': bad number '" + s + "'");
        return v;
    };
    a.min = parse_double(parts[1]);
    a.max = parse_double(parts[2]);
    int count = 0;
    const auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), count);
    if (res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size())
        throw UsageError("--axis '" + text + "': bad count");
    a.count = count;
    if (parts.size() == 5) {
        if (parts[4] == "log") a.spacing = sbk::verify::Spacing::log;
        else if (parts[4] == "linear") a.spacing = sbk::verify::Spacing::linear;
        else throw UsageError("--axis '" + text + "': spacing must be log or linear");
    }
    return a;
}

struct SweepArgs {
    std::string check;
    std::vector<double> zeta;
    std::vector<double> alpha;
    std::string item;
    std::string form;
    std::string method = "auto";
    std::string channel;
    std::vector<std::string> axes;
    long long samples = 0;
    int level = 0;
    std::string chunk = "1/1";
    int threads = 1;
    double rel_tol = 1e-7;
};

int cmd_sweep(const SweepArgs& a, const std::string& output) {
    Json entry{{"kind", a.check}};
    if (!a.zeta.empty()) entry["zeta"] = a.zeta;
    if (!a.alpha.empty()) entry["alpha"] = a.alpha;
    if (!a.item.empty()) entry["item"] = a.item;
    if (!a.form.empty()) entry["form"] = a.form;
    if (a.method != "auto") entry["method"] = a.method;
    Json axes = Json::array();
    for (const auto& text : a.axes) {
        const auto ax = parse_axis_flag(text);
        axes.push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max}, {"count", ax.count},
                        {"spacing", ax.spacing == sbk::verify::Spacing::log ? "log" : "linear"}});
    }
    if (axes.empty()) throw UsageError("give at least one --axis");
    if (a.samples > 0) {
        entry["samples"] = {{"axes", axes}, {"count", a.samples}, {"refinement_level", a.level}};
    } else {
        entry["grid"] = {{"axes", axes}, {"refinement_level", a.level}};
    }
    int k = 1, n = 1;
    if (std::sscanf(a.chunk.c_str(), "%d/%d", &k, &n) != 2 || n < 1 || k < 1 || k > n)
        throw UsageError("--chunk must be k/n with 1 <= k <= n");
    if (a.threads < 1) throw UsageError("--threads must be >= 1");
    sbk::QuadratureConfig quad;
    quad.rel_tol = a.rel_tol;
    if (!(a.rel_tol > 0.0 && a.rel_tol < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
    const sbk::verify::ExecOptions exec{a.threads};
    const auto checks = sbk::verify::build_checks(entry, "sweep", quad, 20261016, exec);
    if (checks.size() != 1) throw UsageError("sweep needs a single (zeta, alpha) pair");
    const auto& check = checks.front();
    std::size_t channel = 0;
    if (!a.channel.empty()) {
        channel = check.channels.size();
        for (std::size_t i = 0; i < check.channels.size(); ++i) {
            const auto& id = check.channels[i].id;
            if (id.size() >= a.channel.size() && id.compare(id.size() - a.channel.size(), a.channel.size(), a.channel) == 0)
                channel = i;
        }
        if (channel == check.channels.size()) throw UsageError("unknown --channel '" + a.channel + "'");
    }
    emit(sbk::verify::sweep_csv(check, channel, k, n, exec), output);
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subordinated Bessel heat kernels: evaluation, envelopes and verification"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "sbk 1.0.0");

    std::string format = "plain";
    std::string output = "-";
    PointArgs point;
    QuadArgs quad;

    auto* eval = app.add_subcommand("eval", "evaluate the kernel at one point");
    add_point_options(eval, point);
    std::string method = "auto";
    eval->add_option("--method", method, "auto, quadrature, closed or all");
    add_quad_options(eval, quad);
    format_option(eval, format);
    eval->add_option("-o,--output", output, "output path or - for stdout");

    auto* env = app.add_subcommand("envelope", "compare the kernel with an envelope");
    add_point_options(env, point);
    std::string env_type = "sharp";
    std::string env_form = "product-rate";
    double c_exp = 4.0;
    env->add_option("--type", env_type, "sharp, regime or gaussian")
        ->check(CLI::IsMember({"sharp", "regime", "gaussian"}));
    env->add_option("--form", env_form, "Gaussian form: product-rate or factored-rate");
    env->add_option("--c-exp", c_exp, "Gaussian rate constant");
    add_quad_options(env, quad);
    format_option(env, format);
    env->add_option("-o,--output", output, "output path or - for stdout");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    std::string config;
    std::vector<std::string> only;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string csv;
    verify->add_option("--suite", suite, "built-in suite")->check(CLI::IsMember({"smoke", "full"}));
    verify->add_option("--config", config, "JSON config document");
    verify->add_option("--only", only, "keep checks whose group, kind or id matches");
    verify->add_option("--seed", seed, "override the config seed");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_option("-o,--output", output, "report path or - for stdout");
    verify->add_option("--csv", csv, "also write a one-row-per-check CSV here");

    auto* sweep = app.add_subcommand("sweep", "per-point CSV of one check");
    SweepArgs sw;
    sweep->add_option("--check", sw.check, "check kind (e.g. sharp_envelope, identity)")->required();
    sweep->add_option("--zeta", sw.zeta, "Bessel index");
    sweep->add_option("--alpha", sw.alpha, "stability order");
    sweep->add_option("--item", sw.item, "comparability item");
    sweep->add_option("--form", sw.form, "Gaussian envelope form");
    sweep->add_option("--method", sw.method, "kernel evaluation path");
    sweep->add_option("--channel", sw.channel, "output channel (e.g. upper, product_form)");
    sweep->add_option("--axis", sw.axes, "name:min:max:count[:log|linear]");
    sweep->add_option("--samples", sw.samples, "use this many low-discrepancy samples over the axes");
    sweep->add_option("--level", sw.level, "refinement level");
    sweep->add_option("--chunk", sw.chunk, "emit only slice k of n, as k/n");
    sweep->add_option("--threads", sw.threads, "worker threads");
    sweep->add_option("--rel-tol", sw.rel_tol, "quadrature relative tolerance");
    sweep->add_option("-o,--output", output, "output path or - for stdout");

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate against the quadrature value");
    add_point_options(mc, point);
    long long n = 1000000;
    std::uint64_t mc_seed = 1;
    int mc_threads = 1;
    mc->add_option("--n", n, "sample count");
    mc->add_option("--seed", mc_seed, "64-bit seed");
    mc->add_option("--threads", mc_threads, "worker threads (result does not depend on it)");
    add_quad_options(mc, quad);
    format_option(mc, format);
    mc->add_option("-o,--output", output, "output path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*eval) return cmd_eval(point, method, quad, format, output);
        if (*env) return cmd_envelope(point, env_type, env_form, c_exp, quad, format, output);
        if (*mc) return cmd_mc(point, n, mc_seed, mc_threads, quad, format, output);
        if (*verify) return cmd_verify(suite, config, only, seed, threads, output, csv);
        if (*sweep) return cmd_sweep(sw, output);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const sbk::verify::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const sbk::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const sbk::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
