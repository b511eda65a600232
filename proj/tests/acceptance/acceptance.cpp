#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "sbk/verify.hpp"

namespace v = sbk::verify;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::string group;
};

std::string summarize(const v::SuiteResult& res) {
    std::size_t fail = 0, insuf = 0;
    double worst_drift = 0.0, worst_score = 0.0;
    for (const auto& r : res.reports) {
        if (r.status == v::Status::fail) ++fail;
        if (r.status == v::Status::insufficient_precision) ++insuf;
        if (r.refinement_drift) worst_drift = std::max(worst_drift, *r.refinement_drift);
        if (r.mode != v::Mode::bounds) worst_score = std::max(worst_score, r.max_score);
    }
    return std::to_string(res.reports.size()) + " checks, " + std::to_string(fail) + " fail, " +
           std::to_string(insuf) + " insufficient, max drift " + v::format_number(worst_drift) +
           ", max score " + v::format_number(worst_score);
}

bool run_group(const Criterion& c, const v::Json& suite) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        v::SuiteOptions opt;
        opt.only = {c.group};
        const auto res = run_suite(suite, opt);
        ok = res.passed && !res.numerical_failure && !res.reports.empty();
        detail = summarize(res);
        for (const auto& r : res.reports)
            if (r.status != v::Status::pass) {
                detail += "; " + r.check_id + ": " + std::string(v::status_name(r.status));
                for (const auto& why : r.reasons) detail += " (" + why + ")";
            }
    } catch (const std::exception& e) {
        detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << " " << c.title << ": " << detail
              << " [" << v::format_number(std::round(secs * 10.0) / 10.0) << " s]" << std::endl;
    return ok;
}

std::string capture(const std::string& cmd, int& code) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        code = -1;
        return {};
    }
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string strip_timestamps(const std::string& report) {
    auto j = v::Json::parse(report);
    j.erase("generated_at");
    j.erase("elapsed_seconds");
    return j.dump();
}

bool determinism() {
    const std::string cmd = std::string(SBK_CLI_PATH) + " verify --suite smoke --seed 20261016 -o - 2>/dev/null";
    int c1 = 0, c2 = 0;
    std::string detail;
    bool ok = false;
    try {
        const auto a = capture(cmd, c1);
        const auto b = capture(cmd, c2);
        ok = c1 == 0 && c2 == 0 && strip_timestamps(a) == strip_timestamps(b);
        detail = "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + ", " +
                 std::to_string(a.size()) + " bytes, reports " + (ok ? "identical" : "differ");
    } catch (const std::exception& e) {
        detail = std::string("error: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion 11 determinism of verify --suite smoke: " << detail
              << std::endl;
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "alpha = 1 quadrature vs closed form (1e-6)", "closed-form"},
        {2, "alpha = 2 vs Gaussian difference (1e-11)", "alpha2"},
        {3, "normalization and Chapman-Kolmogorov", "semigroup"},
        {4, "scaling identity (1e-14)", "scaling"},
        {5, "subordinator Laplace identity and Levy density", "subordinator"},
        {6, "sharp two-sided envelope", "sharp"},
        {7, "five-regime consolidation", "regime"},
        {8, "weighted 3G inequality", "3g"},
        {9, "comparability items", "comparability"},
        {10, "Monte Carlo z-scores", "mc"},
    };
    const auto suite = v::builtin_suite("full");
    bool all = true;
    for (const auto& c : criteria) all = run_group(c, suite) && all;
    all = determinism() && all;
    std::cout << (all ? "ALL PASS" : "SOME FAILED") << std::endl;
    return all ? 0 : 1;
}
