#ifndef SBK_QUADRATURE_HPP
#define SBK_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "sbk/common.hpp"

namespace sbk::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600267999780, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resk *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs(resk - resg * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (resabs > std::numeric_limits<double>::min() / roundoff) err = std::max(err, roundoff);
    return {a, b, resk, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [breaks.front(),
/// breaks.back()], starting from the panels delimited by `breaks`.
///
/// Stops once the summed error estimate is below max(rel_tol*|I|, abs_floor).
/// Throws QuadratureError if `max_panels` is reached first.
template <class F>
Result integrate(F&& f, std::span<const double> breaks, double rel_tol, double abs_floor,
                 int max_panels) {
    Result out;
    if (breaks.size() < 2) return out;
    std::priority_queue<detail::Panel> heap;
    std::vector<detail::Panel> frozen;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::gk21(f, breaks[i], breaks[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
        ++out.panels;
    }
    auto converged = [&] {
        return total_err <= std::max(rel_tol * std::abs(total), abs_floor);
    };
    while (!heap.empty() && !converged()) {
        if (out.panels >= max_panels) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "panel budget of %d exhausted (estimate %.6e, error %.3e)", max_panels,
                          total, total_err);
            throw QuadratureError(msg);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            if (heap.empty()) break;
            continue;
        }
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++out.panels;
    }
    // Re-sum to shed the drift of the running updates.
    out.value = 0.0;
    out.error = 0.0;
    for (const auto& p : frozen) {
        out.value += p.value;
        out.error += p.error;
    }
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    return out;
}

template <class F>
Result integrate(F&& f, std::initializer_list<double> breaks, double rel_tol, double abs_floor,
                 int max_panels) {
    std::vector<double> b(breaks);
    return integrate(std::forward<F>(f), std::span<const double>(b), rel_tol, abs_floor,
                     max_panels);
}

/// Sorted, de-duplicated break points restricted to [lo, hi], with panels
/// wider than `max_width` subdivided evenly.
std::vector<double> make_breaks(std::vector<double> interior, double lo, double hi,
                                double max_width);

}  // namespace sbk::quad

#endif
