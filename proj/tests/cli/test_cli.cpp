#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SBK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("sbk_cli_" + name);
    std::ofstream(path) << content;
    return path.string();
}

int count_lines(const std::string& s) {
    std::istringstream in(s);
    int n = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("eval prints the kernel value") {
    auto r = run("eval --zeta 1 --alpha 1 --t 1 --r 1 --s 1 --format json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(0.25464790894703249).epsilon(1e-15));
    CHECK(j["method"] == "closed-form");
    r = run("eval --zeta 1 --alpha 2 --t 1 --r 1 --s 1 --format json");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["value"].get<double>() ==
          doctest::Approx(0.1783179174187295).epsilon(1e-14));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("eval --zeta 1 --alpha 1 --t 1 --r 1").code == 2);
    CHECK(run("eval --zeta -0.7 --alpha 1 --t 1 --r 1 --s 1").code == 2);
    CHECK(run("bogus").code == 2);
    const auto bad = temp_file("bad.json", R"({"checks": [{"kind": "identity", "zeta": [1.0], "alpha": [1.0],
        "grid": {"axes": [{"name": "t", "min": 0.1, "max": 1, "count": 0}, {"name": "r", "min": 0.1, "max": 1, "count": 2},
        {"name": "s", "min": 0.1, "max": 1, "count": 2}]}}]})");
    const auto r = run("verify --config " + bad);
    CHECK(r.code == 2);
    CHECK(r.out.find("checks[0].grid.axes[0].count") != std::string::npos);
    const auto broken = temp_file("broken.json", "{not json");
    CHECK(run("verify --config " + broken).code == 2);
}

TEST_CASE("numerical failures exit with 3") {
    CHECK(run("eval --zeta 0.3 --alpha 0.7 --t 1 --r 1 --s 2 --max-panels 16 --rel-tol 1e-14").code == 3);
}

TEST_CASE("verify exit codes follow the verdict") {
    const auto ok = run("verify --suite smoke --only identity -o -");
    CHECK(ok.code == 0);
    const auto failing = temp_file("fail.json", R"({"checks": [{"kind": "identity", "zeta": [1.0], "alpha": [1.0],
        "upper_constant": 0.5,
        "grid": {"axes": [{"name": "t", "min": 0.1, "max": 1, "count": 2}, {"name": "r", "min": 0.1, "max": 1, "count": 2},
        {"name": "s", "min": 0.1, "max": 1, "count": 2}]}}]})");
    CHECK(run("verify --config " + failing + " -o -").code == 1);
}

TEST_CASE("sweep emits one row per point and honours chunks") {
    const std::string base =
        "sweep --check identity --zeta 1 --alpha 1 --axis t:0.1:10:5 --axis r:0.1:10:5 --axis s:0.1:10:5";
    const auto all = run(base);
    REQUIRE(all.code == 0);
    CHECK(count_lines(all.out) == 126);
    const auto chunk = run(base + " --chunk 2/4");
    REQUIRE(chunk.code == 0);
    const int rows = count_lines(chunk.out) - 1;
    CHECK(rows >= 31);
    CHECK(rows <= 32);
    CHECK(run(base + " --chunk 5/4").code == 2);
}

TEST_CASE("mc is deterministic and flags tiny samples") {
    const std::string base = "mc --zeta 0.5 --alpha 1 --t 1 --r 1 --s 1 --format json";
    const auto a = run(base + " --n 20000 --seed 9");
    const auto b = run(base + " --n 20000 --seed 9 --threads 3");
    REQUIRE(a.code == 0);
    const auto ja = nlohmann::json::parse(a.out);
    const auto jb = nlohmann::json::parse(b.out);
    CHECK(ja["mean"] == jb["mean"]);
    const auto tiny = run(base + " --n 1 --seed 9");
    CHECK(tiny.out.find("insufficient-precision") != std::string::npos);
}
