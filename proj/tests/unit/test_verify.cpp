#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sbk/verify.hpp"

using namespace sbk::verify;

namespace {

Json axis(const char* name, double lo, double hi, int count) {
    return Json{{"name", name}, {"min", lo}, {"max", hi}, {"count", count}, {"spacing", "log"}};
}

Json identity_config(int level = 1) {
    return Json{{"suite", "unit"},
                {"checks", Json::array({Json{{"kind", "identity"},
                                             {"zeta", {1.0}},
                                             {"alpha", {1.0}},
                                             {"grid", {{"axes", Json::array({axis("t", 0.1, 10.0, 3),
                                                                             axis("r", 0.1, 10.0, 3),
                                                                             axis("s", 0.1, 10.0, 3)})},
                                                       {"refinement_level", level}}}}})}};
}

std::string error_path(const Json& config) {
    try {
        validate_config(config);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<none>";
}

CheckSpec synthetic(double slope) {
    GridSpec g;
    g.axes = {Axis{"x", 1.0, 2.0, 5, Spacing::linear}};
    g.refinement_level = 1;
    CheckSpec c;
    c.kind = "synthetic";
    c.channels.resize(1);
    c.channels[0].id = "synthetic";
    c.points = enumerate(g);
    c.eval = [slope](std::span<const double> x) {
        if (x[0] > 1.9) return std::vector{PointEval::skip()};
        return std::vector{PointEval::ratio(1.0 + slope * (x[0] - 1.0), 1.0)};
    };
    return c;
}

}  // namespace

TEST_CASE("axis nodes nest across levels") {
    const Axis a{"t", 0.01, 100.0, 5};
    const auto coarse = a.nodes(0);
    const auto fine = a.nodes(1);
    REQUIRE(coarse.size() == 5);
    REQUIRE(fine.size() == 9);
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(fine[2 * i] == coarse[i]);
    CHECK(fine.front() == 0.01);
    CHECK(fine.back() == 100.0);
    CHECK(fine[4] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(Axis{"t", -1.0, 1.0, 3}.validate());
}

TEST_CASE("enumerate marks coarse points") {
    GridSpec g;
    g.axes = {Axis{"a", 1.0, 2.0, 3, Spacing::linear}, Axis{"b", 1.0, 4.0, 2}};
    g.refinement_level = 1;
    const auto ps = enumerate(g);
    CHECK(ps.points.size() == 15);
    std::size_t n_coarse = 0;
    for (char c : ps.coarse) n_coarse += c;
    CHECK(n_coarse == 6);
    SampleSpec s;
    s.axes = {Axis{"a", 1.0, 2.0, 2}, Axis{"b", 1.0, 4.0, 2}};
    s.base_count = 8;
    s.refinement_level = 2;
    const auto sp = enumerate(s);
    CHECK(sp.points.size() == 32);
    for (std::size_t i = 0; i < sp.points.size(); ++i) CHECK(sp.coarse[i] == (i < 16 ? 1 : 0));
}

TEST_CASE("identity suite is exact") {
    const auto res = run_suite(identity_config());
    CHECK(res.passed);
    REQUIRE(res.reports.size() == 1);
    const auto& rep = res.reports[0];
    CHECK(rep.sup_ratio == 1.0);
    CHECK(rep.inf_ratio == 1.0);
    REQUIRE(rep.refinement_drift.has_value());
    CHECK(*rep.refinement_drift == 0.0);
    CHECK(rep.n_points == 125);
    CHECK(res.report["summary"]["checks"] == 1);
}

TEST_CASE("skipped points are counted and excluded") {
    const auto rep = sweep_ratio(synthetic(0.0)).at(0);
    CHECK(rep.n_points == 9);
    CHECK(rep.n_skipped == 1);
    CHECK(rep.n_admissible == 8);
    CHECK(rep.status == Status::pass);
}

TEST_CASE("monotone refinement reports its drift") {
    const auto rep = sweep_ratio(synthetic(1.0)).at(0);
    CHECK(rep.sup_ratio == doctest::Approx(1.875));
    CHECK(rep.inf_ratio == 1.0);
    REQUIRE(rep.refinement_drift.has_value());
    CHECK(*rep.refinement_drift > 0.0);
    CHECK(*rep.refinement_drift < 0.1);
}

TEST_CASE("a ceiling below the sup fails and names the argmax") {
    auto check = synthetic(1.0);
    check.channels[0].upper_ceiling = 0.5;
    const auto rep = sweep_ratio(check).at(0);
    CHECK(rep.status == Status::fail);
    CHECK_FALSE(rep.reasons.empty());
    REQUIRE(rep.argmax_point.size() == 1);
    CHECK(rep.argmax_point[0] == doctest::Approx(1.875));
}

TEST_CASE("empty suites pass") {
    const auto res = run_suite(Json{{"checks", Json::array()}});
    CHECK(res.passed);
    CHECK(res.reports.empty());
}

TEST_CASE("config errors carry the field path") {
    auto c = identity_config();
    c["checks"][0]["grid"]["axes"][1]["min"] = -1.0;
    CHECK(error_path(c) == "checks[0].grid.axes[1].min");
    c = identity_config();
    c["checks"][0]["bogus"] = 1;
    CHECK(error_path(c) == "checks[0].bogus");
    c = identity_config();
    c["checks"][0]["kind"] = "nope";
    CHECK(error_path(c) == "checks[0].kind");
    CHECK(error_path(Json{{"seed", -3}, {"checks", Json::array()}}) == "seed");
    CHECK(error_path(Json::object()) == "checks");
    CHECK(error_path(identity_config()) == "<none>");
}

TEST_CASE("CSV outputs") {
    const auto check = synthetic(1.0);
    const std::string csv = sweep_csv(check, 0, 1, 1);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "index,x,numerator,denominator,ratio,admissible");
    int rows = 0;
    std::string last;
    for (std::string line; std::getline(in, line);) {
        ++rows;
        last = line;
    }
    CHECK(rows == 9);
    CHECK(last.substr(last.rfind(',') + 1) == "0");
    const std::string half = sweep_csv(check, 0, 2, 2);
    CHECK(half.rfind("index,x,", 0) == 0);
    CHECK(half.find("\n4,") != std::string::npos);
    CHECK(half.find("\n3,") == std::string::npos);
    const auto reps = sweep_ratio(check);
    CHECK(reports_csv(reps).rfind("check_id,sup,inf,drift,status", 0) == 0);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(NAN) == "nan");
}

TEST_CASE("builtin suites validate") {
    CHECK_NOTHROW(validate_config(builtin_suite("smoke")));
    CHECK_NOTHROW(validate_config(builtin_suite("full")));
    CHECK_THROWS(builtin_suite("medium"));
}
