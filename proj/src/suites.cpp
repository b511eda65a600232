#include "sbk/verify.hpp"

namespace sbk::verify {

namespace {

Json axis(const char* name, double lo, double hi, int count, const char* spacing = "log") {
    return Json{{"name", name}, {"min", lo}, {"max", hi}, {"count", count}, {"spacing", spacing}};
}

Json grid(Json axes, int level) {
    if (!axes.is_array()) axes = Json::array({axes});
    return Json{{"axes", std::move(axes)}, {"refinement_level", level}};
}

Json samples(Json axes, int count, int level = 0) {
    if (!axes.is_array()) axes = Json::array({axes});
    return Json{{"axes", std::move(axes)}, {"count", count}, {"refinement_level", level}};
}

Json cube(const char* a, const char* b, const char* c, double lo, double hi, int count) {
    return Json::array({axis(a, lo, hi, count), axis(b, lo, hi, count), axis(c, lo, hi, count)});
}

Json grid3(double lo, double hi, int count, int level) {
    return Json{{"axes", cube("t", "r", "s", lo, hi, count)}, {"refinement_level", level}};
}

Json comparability_entry(const char* item, Json zetas, Json alphas, Json points) {
    return Json{{"kind", "comparability"}, {"group", "comparability"}, {"item", item},
                {"zeta", std::move(zetas)},  {"alpha", std::move(alphas)},
                {"grid", std::move(points)}};
}

// Item-specific comparability grids. Items 2 and 3 use z = q s with q <= 1/2,
// item 4 uses r = q s with q <= 1, and item 5 derives the remaining point
// from the e axis on both sides of s.
void add_comparability(Json& checks, Json zetas, Json alphas, Json alpha2, Json zetas_z, Json zetas_r, double lo, double hi,
                       int count, int count5) {
    auto add = [&](const char* item, Json zs, Json as, Json g, const char* branch = nullptr,
                   const char* id = nullptr) {
        Json e = comparability_entry(item, std::move(zs), std::move(as), std::move(g));
        e["rel_tol"] = 1e-6;
        if (branch) e["branch"] = branch;
        if (id) e["id"] = id;
        checks.push_back(std::move(e));
    };
    add("1", zetas, alphas, grid({axis("tau", 0.25, 4.0, count / 2 + 1), axis("z", lo, hi, count), axis("s", lo, hi, count)}, 1));
    for (const char* item : {"2a", "2b", "2c"}) {
        add(item, zetas, std::string(item) == "2a" ? alphas : alpha2,
            grid({axis("tau", lo, hi, count), axis("q", 1e-3, 0.5, 7), axis("s", lo, hi, count)}, 1));
    }
    add("3", zetas, alphas, grid({axis("tau", lo, 1.0, count), axis("q", 1e-3, 0.5, 7), axis("s", 1.0, hi, count)}, 1));
    add("4", zetas, alphas, grid({axis("q", 1e-3, 1.0, count), axis("s", 1e-3, 1e3, 4 * count + 1)}, 1));
    add("4min", zetas, alphas, grid({axis("r", 1e-3, 1e3, 4 * count + 1), axis("s", 1e-3, 1e3, 4 * count + 1)}, 1));
    for (const char* branch : {"same", "opposite"}) {
        // z on an axis reaches the z -> 0 edge; r on an axis reaches r -> 0.
        add("5", zetas_z, alphas,
            grid({axis("t", 0.1, 10.0, 3), axis("z", 1e-3, 1e3, count5), axis("s", 1e-3, 1e3, count5),
                  axis("e", 1e-4, 1e2, 5)}, 1),
            branch, (std::string("comparability_5z_") + branch).c_str());
        add("5", zetas_r, alphas,
            grid({axis("t", 0.1, 10.0, 3), axis("r", 1e-3, 1e3, count5), axis("s", 1e-3, 1e3, count5),
                  axis("e", 1e-4, 1e2, 5)}, 1),
            branch, (std::string("comparability_5r_") + branch).c_str());
    }
}

Json smoke() {
    Json checks = Json::array();
    checks.push_back({{"kind", "identity"}, {"group", "identity"}, {"zeta", {0.5}}, {"alpha", {2.0}},
                      {"grid", grid3(0.1, 10.0, 4, 1)}});
    checks.push_back({{"kind", "closed_form"}, {"group", "closed-form"}, {"zeta", {0.0, 1.0}},
                      {"rel_tol", 1e-9}, {"grid", grid3(1e-2, 1e2, 5, 0)}});
    checks.push_back({{"kind", "alpha2_closed"}, {"group", "alpha2"}, {"grid", grid3(1e-2, 1e2, 5, 0)}});
    checks.push_back({{"kind", "normalization"}, {"group", "semigroup"}, {"zeta", {0.0, 1.0}},
                      {"alpha", {1.0, 2.0}},
                      {"samples", samples({axis("t", 0.2, 5.0, 2), axis("r", 0.2, 5.0, 2)}, 3)}});
    checks.push_back({{"kind", "chapman"}, {"group", "semigroup"}, {"zeta", {0.5}}, {"alpha", {1.0, 2.0}},
                      {"samples", samples({axis("t", 0.2, 5.0, 2), axis("t2", 0.2, 5.0, 2),
                                           axis("r", 0.2, 5.0, 2), axis("s", 0.2, 5.0, 2)},
                                          2)}});
    checks.push_back({{"kind", "scaling"}, {"group", "scaling"}, {"zeta", {0.0, 1.0}}, {"alpha", {1.5, 2.0}},
                      {"samples", samples({axis("t", 1e-2, 1e2, 2), axis("r", 1e-2, 1e2, 2),
                                           axis("s", 1e-2, 1e2, 2)},
                                          32)}});
    checks.push_back({{"kind", "laplace"}, {"group", "subordinator"}, {"beta", {0.5}},
                      {"grid", grid({axis("lambda", 1e-2, 1e2, 5)}, 0)}});
    checks.push_back({{"kind", "levy"}, {"group", "subordinator"}, {"grid", grid({axis("tau", 1e-2, 1e3, 9)}, 0)}});
    checks.push_back({{"kind", "subordinator_envelope"}, {"group", "subordinator"}, {"alpha", {1.0}},
                      {"grid", grid({axis("tau", 1e-2, 1e3, 9)}, 1)}});
    checks.push_back({{"kind", "gaussian_envelope"}, {"group", "gaussian"}, {"zeta", {0.5}},
                      {"form", "product-rate"}, {"grid", grid3(0.1, 10.0, 5, 1)}});
    checks.push_back({{"kind", "sharp_envelope"}, {"group", "sharp"}, {"zeta", {0.0, 1.0}}, {"alpha", {1.0}},
                      {"grid", grid3(0.1, 10.0, 5, 1)}});
    checks.push_back({{"kind", "regime"}, {"group", "regime"}, {"zeta", {0.5}}, {"alpha", {1.0}},
                      {"grid", grid({axis("r", 1e-3, 1e3, 65), axis("s", 1e-3, 1e3, 65)}, 1)}});
    checks.push_back({{"kind", "three_g"}, {"group", "3g"}, {"zeta", {0.5}}, {"alpha", {1.0}},
                      {"samples", samples({axis("r", 0.1, 10.0, 2), axis("s", 0.1, 10.0, 2),
                                           axis("z", 0.1, 10.0, 2), axis("t", 0.1, 10.0, 2),
                                           axis("tau", 0.1, 10.0, 2)},
                                          128, 1)}});
    checks.push_back({{"kind", "weight_f"}, {"group", "weight"}, {"zeta", {1.0}},
                      {"grid", grid({axis("r", 0.1, 10.0, 5), axis("s", 0.1, 10.0, 5), axis("z", 0.1, 10.0, 5)}, 1)}});
    add_comparability(checks, {0.5}, {1.0}, {1.0, 2.0}, {0.5}, {-0.4}, 0.1, 10.0, 5, 9);
    checks.push_back({{"kind", "mc"}, {"group", "mc"}, {"zeta", {0.0}}, {"alpha", {1.0}}, {"n", 100000},
                      {"samples", samples({axis("t", 0.5, 2.0, 2), axis("r", 0.5, 2.0, 2),
                                           axis("s", 0.5, 2.0, 2)},
                                          4)}});
    return Json{{"suite", "smoke"}, {"seed", 20261016}, {"checks", std::move(checks)}};
}

Json full() {
    const Json zetas6 = {-0.4, 0.0, 0.5, 1.0, 3.0};
    const Json alphas_sub = {0.5, 1.0, 1.5};
    const Json zetas3 = {-0.4, 0.0, 1.0, 3.0};
    const Json alphas_all = {0.5, 1.0, 1.5, 2.0};
    Json checks = Json::array();
    checks.push_back({{"kind", "identity"}, {"group", "identity"}, {"zeta", {0.0, 1.0}}, {"alpha", {1.0, 2.0}},
                      {"grid", grid3(1e-2, 1e2, 6, 1)}});
    // Closed forms on the 10×10×10 log grid.
    checks.push_back({{"kind", "closed_form"}, {"group", "closed-form"}, {"zeta", {0.0, 0.5, 1.0, 2.5}},
                      {"rel_tol", 1e-9}, {"grid", grid3(1e-2, 1e2, 10, 0)}});
    checks.push_back({{"kind", "alpha2_closed"}, {"group", "alpha2"}, {"grid", grid3(1e-2, 1e2, 10, 0)}});
    // Semigroup identities at 50 spot points per (ζ, α).
    checks.push_back({{"kind", "normalization"}, {"group", "semigroup"}, {"zeta", zetas3}, {"alpha", alphas_all},
                      {"samples", samples({axis("t", 0.1, 10.0, 2), axis("r", 0.1, 10.0, 2)}, 50)}});
    checks.push_back({{"kind", "chapman"}, {"group", "semigroup"}, {"zeta", zetas3}, {"alpha", alphas_all},
                      {"samples", samples({axis("t", 0.1, 10.0, 2), axis("t2", 0.1, 10.0, 2),
                                           axis("r", 0.1, 10.0, 2), axis("s", 0.1, 10.0, 2)},
                                          50)}});
    checks.push_back({{"kind", "scaling"}, {"group", "scaling"}, {"zeta", zetas3}, {"alpha", alphas_all},
                      {"samples", samples({axis("t", 1e-2, 1e2, 2), axis("r", 1e-2, 1e2, 2),
                                           axis("s", 1e-2, 1e2, 2)},
                                          1000)}});
    checks.push_back({{"kind", "laplace"}, {"group", "subordinator"}, {"beta", {0.25, 0.5, 0.75, 0.9}},
                      {"grid", grid({axis("lambda", 1e-2, 1e2, 9)}, 0)}});
    checks.push_back({{"kind", "levy"}, {"group", "subordinator"}, {"grid", grid({axis("tau", 1e-2, 1e4, 61)}, 0)}});
    checks.push_back({{"kind", "subordinator_envelope"}, {"group", "subordinator"}, {"alpha", alphas_sub},
                      {"grid", grid({axis("tau", 1e-2, 1e4, 31)}, 1)}});
    checks.push_back({{"kind", "gaussian_envelope"}, {"group", "gaussian"}, {"zeta", zetas3},
                      {"form", "product-rate"}, {"grid", grid3(1e-2, 1e2, 9, 1)}});
    checks.push_back({{"kind", "gaussian_envelope"}, {"group", "gaussian"}, {"zeta", zetas3},
                      {"form", "factored-rate"}, {"grid", grid3(1e-2, 1e2, 9, 1)}});
    checks.push_back({{"kind", "sharp_envelope"}, {"group", "sharp"}, {"zeta", zetas6}, {"alpha", alphas_sub},
                      {"rel_tol", 1e-6},
                      {"grid", grid({axis("t", 1e-2, 1e2, 9), axis("r", 1e-2, 1e2, 33), axis("s", 1e-2, 1e2, 33)}, 1)}});
    checks.push_back({{"kind", "regime"}, {"group", "regime"}, {"zeta", zetas6}, {"alpha", alphas_sub},
                      {"grid", grid({axis("r", 1e-3, 1e3, 129), axis("s", 1e-3, 1e3, 129)}, 1)}});
    checks.push_back({{"kind", "three_g"}, {"group", "3g"}, {"zeta", {0.0, 0.5, 1.0}}, {"alpha", alphas_sub},
                      {"rel_tol", 1e-6},
                      {"samples", samples({axis("r", 1e-2, 1e2, 2), axis("s", 1e-2, 1e2, 2),
                                           axis("z", 1e-2, 1e2, 2), axis("t", 1e-2, 1e2, 2),
                                           axis("tau", 1e-2, 1e2, 2)},
                                          50000, 1)}});
    checks.push_back({{"kind", "weight_f"}, {"group", "weight"}, {"zeta", {0.0, 0.5, 1.0, 3.0}},
                      {"grid", grid({axis("r", 1e-2, 1e2, 9), axis("s", 1e-2, 1e2, 9), axis("z", 1e-2, 1e2, 9)}, 1)}});
    add_comparability(checks, {-0.4, 0.0, 1.0}, alphas_sub, alphas_all, {0.0, 1.0}, {-0.4, 0.0, 1.0}, 1e-2, 1e2, 17, 17);
    checks.push_back({{"kind", "mc"}, {"group", "mc"}, {"zeta", {0.0, 1.0}}, {"alpha", {0.5, 1.0, 1.5}},
                      {"n", 1000000},
                      {"samples", samples({axis("t", 0.3, 3.0, 2), axis("r", 0.3, 3.0, 2),
                                           axis("s", 0.3, 3.0, 2)},
                                          20)}});
    return Json{{"suite", "full"}, {"seed", 20261016}, {"checks", std::move(checks)}};
}

}  // namespace

Json builtin_suite(std::string_view name) {
    if (name == "smoke") return smoke();
    if (name == "full") return full();
    throw ConfigError("suite", "unknown built-in suite '" + std::string(name) + "'");
}

}  // namespace sbk::verify
