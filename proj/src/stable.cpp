#include "sbk/stable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "sbk/quadrature.hpp"
#include "sbk/specfun.hpp"

namespace sbk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("stable index beta must lie in (0, 1)");
}

// Kanter's function A(u) = sin(βu)^γ sin((1-β)u) / sin(u)^{γ+1}, γ = β/(1-β),
// through D(u) = ln A(u) - ln A(0+). The angle is encoded as y in R:
// u = (π/2) e^y for y <= 0, and π - u = (π/2) e^{-y} for y > 0.
class Kanter {
public:
    explicit Kanter(double beta)
        : beta_(beta),
          gamma_(beta / (1.0 - beta)),
          log_a0_(gamma_ * std::log(beta) + std::log1p(-beta)) {
        // ln(sin x / x) = -Σ 2^{2k-1} |B_2k| x^{2k} / (k (2k)!)
        for (int k = 1; k <= kTerms; ++k) {
            const double b2k = std::abs(boost::math::bernoulli_b2n<double>(k));
            const double ck = -std::ldexp(b2k, 2 * k - 1) / (k * std::tgamma(2.0 * k + 1.0));
            const double mix = gamma_ * std::pow(beta, 2 * k) + std::pow(1.0 - beta, 2 * k) -
                               (gamma_ + 1.0);
            coef_[k - 1] = ck * mix;
        }
    }

    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] double log_a0() const { return log_a0_; }

    [[nodiscard]] double D(double y) const {
        if (y <= 0.0) {
            const double u = 0.5 * kPi * std::exp(y);
            if (u < 0.5) {
                const double u2 = u * u;
                double acc = 0.0;
                for (int k = kTerms - 1; k >= 0; --k) acc = acc * u2 + coef_[k];
                return acc * u2;
            }
            return gamma_ * L(beta_ * u) + L((1.0 - beta_) * u) - (gamma_ + 1.0) * L(u);
        }
        const double eps = 0.5 * kPi * std::exp(-y);
        return gamma_ * std::log(std::sin(beta_ * kPi - beta_ * eps)) +
               std::log(std::sin(beta_ * kPi + (1.0 - beta_) * eps)) -
               (gamma_ + 1.0) * std::log(std::sin(eps)) - log_a0_;
    }

    static double jacobian(double y) { return 0.5 * kPi * std::exp(-std::abs(y)); }

private:
    static constexpr int kTerms = 14;
    static double L(double x) { return std::log(std::sin(x) / x); }

    double beta_;
    double gamma_;
    double log_a0_;
    std::array<double, kTerms> coef_{};
};

constexpr double kYMax = 700.0;

// Smallest y with D(y) >= target (D is increasing).
double solve_D(const Kanter& k, double target) {
    if (k.D(-kYMax) >= target) return -kYMax;
    if (k.D(kYMax) <= target) return kYMax;
    std::uintmax_t iters = 200;
    auto f = [&](double y) { return k.D(y) - target; };
    auto tol = boost::math::tools::eps_tolerance<double>(40);
    auto r = boost::math::tools::toms748_solve(f, -kYMax, kYMax, tol, iters);
    return 0.5 * (r.first + r.second);
}

// Coefficients of σ_1(τ) = Σ q_k τ^{-kβ-1} and a bound on |q_k| for truncation.
std::vector<double> make_series_coefficients(double beta) {
    std::vector<double> q;
    for (int k = 1; k <= 400; ++k) {
        const double mag = std::exp(std::lgamma(k * beta + 1.0) - std::lgamma(k + 1.0)) / kPi;
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        q.push_back(sign * mag * std::sin(k * kPi * beta));
        // Terms are used with τ^{-β} <= 1/4.
        if (mag * std::pow(0.25, k) < 1e-20 * std::abs(q.front())) break;
    }
    return q;
}

double series_log_with(const std::vector<double>& q, double beta, double tau) {
    const double w = std::pow(tau, -beta);
    double sum = 0.0;
    double wk = 1.0;
    for (double qk : q) {
        wk *= w;
        const double term = qk * wk;
        sum += term;
        if (wk < 1e-300) break;
    }
    return std::log(sum) - std::log(tau);
}

double small_tau_rate(double beta) {
    // A(0+) = β^γ (1-β)
    return std::exp(beta / (1.0 - beta) * std::log(beta) + std::log1p(-beta));
}

}  // namespace

double levy_density_half(double t, double tau) {
    require_positive(t, "t");
    require_positive(tau, "tau");
    const double e = -t * t / (4.0 * tau);
    if (e < -745.0) return 0.0;
    return 0.5 / std::sqrt(kPi) * t * std::pow(tau, -1.5) * std::exp(e);
}

StableScaling stable_scaling(double beta, double t, double tau) {
    check_beta(beta);
    require_positive(t, "t");
    require_positive(tau, "tau");
    const double factor = std::pow(t, -1.0 / beta);
    return {1.0, tau * factor, factor};
}

namespace detail {

double log_stable_density_integral(double beta, double x) {
    check_beta(beta);
    const Kanter k(beta);
    const double gam = k.gamma();
    const double h0 = k.log_a0() - gam * x;
    const double hp = std::max(h0, 0.0);
    if (hp > 700.0) return kNegInf;
    const double E = std::exp(hp);

    std::vector<double> ys;
    if (h0 < 0.0) {
        ys.push_back(solve_D(k, -h0));
        for (double d = -1.0; d > h0; d *= 2.0) ys.push_back(solve_D(k, -h0 + d));
    }
    double y_hi = kYMax;
    for (double target : {0.5, 2.0, 8.0, 32.0, 128.0, 512.0, 800.0}) {
        const double y = solve_D(k, hp - h0 + std::log1p(target / E));
        if (target == 800.0)
            y_hi = y;
        else
            ys.push_back(y);
    }
    ys.push_back(0.0);
    const double y_lo = *std::min_element(ys.begin(), ys.end()) - 40.0;
    const auto breaks = quad::make_breaks(ys, std::max(y_lo, -kYMax), y_hi, 4.0);

    auto g = [&](double y) {
        // h0 - hp first: rounding h0 + D costs ulp(h0) · E.
        const double d = (h0 - hp) + k.D(y);
        return std::exp(d - E * std::expm1(d)) * Kanter::jacobian(y);
    };
    const auto res = quad::integrate(g, std::span<const double>(breaks), 2e-13, 0.0, 4000);
    if (!(res.value > 0.0)) return kNegInf;
    return std::log(gam / kPi) - x + hp - E + std::log(res.value);
}

double log_stable_density_series(double beta, double tau) {
    check_beta(beta);
    require_positive(tau, "tau");
    return series_log_with(make_series_coefficients(beta), beta, tau);
}

StableTable::StableTable(double beta) : beta_(beta) {
    check_beta(beta);
    rate_ = small_tau_rate(beta);
    c1_ = beta / (1.0 - beta);
    c2_ = (2.0 - beta) / (2.0 * (1.0 - beta));
    // Below x_min the exponential factor is smaller than e^{-800}.
    x_min_ = (std::log(rate_) - std::log(800.0)) / c1_;
    x_max_ = std::log(4.0) / beta;
    q_ = make_series_coefficients(beta);
    const int chunks = std::max(1, static_cast<int>(std::ceil((x_max_ - x_min_) / 4.0)));
    for (int i = 0; i < chunks; ++i) {
        const double a = x_min_ + (x_max_ - x_min_) * i / chunks;
        const double b = (i + 1 == chunks) ? x_max_ : x_min_ + (x_max_ - x_min_) * (i + 1) / chunks;
        build(a, b, 0);
    }
}

double StableTable::shift(double x) const { return rate_ * std::exp(-c1_ * x) + c2_ * x; }

void StableTable::build(double a, double b, int depth) {
    constexpr int n = kNodes - 1;
    std::array<double, kNodes> f{};
    for (int j = 0; j <= n; ++j) {
        const double node = std::cos(kPi * j / n);
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * node;
        f[j] = log_stable_density_integral(beta_, x) + shift(x);
    }
    Piece p{a, b, {}};
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            s += w * f[j] * std::cos(kPi * j * k / n);
        }
        p.c[k] = 2.0 * s / n;
    }
    p.c[0] *= 0.5;
    p.c[n] *= 0.5;

    auto eval = [&](double x) {
        const double u = (2.0 * x - a - b) / (b - a);
        double b1 = 0.0, b2 = 0.0;
        for (int k = n; k >= 1; --k) {
            const double t = 2.0 * u * b1 - b2 + p.c[k];
            b2 = b1;
            b1 = t;
        }
        return u * b1 - b2 + p.c[0];
    };
    double err = 0.0;
    for (double frac : {0.0123, 0.1311, 0.3779, 0.6203, 0.8669, 0.9877}) {
        const double x = a + frac * (b - a);
        const double exact = log_stable_density_integral(beta_, x) + shift(x);
        err = std::max(err, std::abs(eval(x) - exact));
    }
    if (err > 2e-13 && depth < 30 && (b - a) > 1e-6) {
        const double mid = 0.5 * (a + b);
        build(a, mid, depth + 1);
        build(mid, b, depth + 1);
        return;
    }
    pieces_.push_back(p);
}

double StableTable::log_density(double x) const {
    if (x < x_min_) return kNegInf;
    if (x > x_max_) return series_log_with(q_, beta_, std::exp(x));
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.b; });
    if (it == pieces_.end()) --it;
    const Piece& p = *it;
    const double u = (2.0 * x - p.a - p.b) / (p.b - p.a);
    double b1 = 0.0, b2 = 0.0;
    for (int k = kNodes - 1; k >= 1; --k) {
        const double t = 2.0 * u * b1 - b2 + p.c[k];
        b2 = b1;
        b1 = t;
    }
    return u * b1 - b2 + p.c[0] - shift(x);
}

const StableTable& stable_table(double beta) {
    static std::mutex mu;
    static std::map<double, std::unique_ptr<const StableTable>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(beta);
    if (it == tables.end()) it = tables.emplace(beta, std::make_unique<StableTable>(beta)).first;
    return *it->second;
}

}  // namespace detail

double log_stable_density(double beta, double t, double tau) {
    const auto sc = stable_scaling(beta, t, tau);
    const auto& table = detail::stable_table(beta);
    const double x = std::log(sc.tau1);
    const double log_unit =
        x < table.x_min() ? detail::log_stable_density_integral(beta, x) : table.log_density(x);
    return log_unit + std::log(sc.factor);
}

double stable_density(double beta, double t, double tau) {
    const auto sc = stable_scaling(beta, t, tau);
    const double x = std::log(sc.tau1);
    const double log_unit = detail::stable_table(beta).log_density(x);
    if (log_unit + std::log(sc.factor) < -745.0) return 0.0;
    return sc.factor * std::exp(log_unit);
}

double stable_laplace_transform(double beta, double lambda, const QuadratureConfig& cfg) {
    check_beta(beta);
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    cfg.validate();
    const auto& table = detail::stable_table(beta);
    auto f = [&](double x) {
        const double tau = std::exp(x);
        return std::exp(table.log_density(x) - lambda * tau + x);
    };
    double hi = table.x_max();
    if (lambda > 0.0) hi = std::max(hi, std::log(60.0 / lambda));
    std::vector<double> inner = {0.0, table.x_max()};
    if (lambda > 0.0) inner.push_back(-std::log(lambda));
    for (double p : cfg.split_points) inner.push_back(std::log(p));
    const auto breaks = quad::make_breaks(inner, table.x_min(), hi, 2.0);
    const auto res =
        quad::integrate(f, std::span<const double>(breaks), cfg.rel_tol * 0.01, cfg.abs_floor,
                        cfg.max_panels);
    double total = res.value;
    if (lambda == 0.0) {
        // ∫_T^∞ Σ q_k τ^{-kβ-1} dτ = Σ q_k T^{-kβ} / (kβ)
        const double w = std::exp(-beta * hi);
        double wk = 1.0;
        int k = 1;
        for (double qk : table.series_coefficients()) {
            wk *= w;
            total += qk * wk / (k * beta);
            ++k;
        }
    }
    return total;
}

double laplace_check(double beta, double lambda, const QuadratureConfig& cfg) {
    return std::abs(stable_laplace_transform(beta, lambda, cfg) - std::exp(-std::pow(lambda, beta)));
}

SubordinatorEnvelopeParams SubordinatorEnvelopeParams::make(double alpha, double C_lo, double C_hi) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("envelope alpha must lie in (0, 2)");
    require_positive(C_lo, "C_lo");
    require_positive(C_hi, "C_hi");
    if (C_lo < C_hi) throw DomainError("C_lo must be >= C_hi");
    SubordinatorEnvelopeParams p;
    p.alpha = alpha;
    p.c1 = alpha / (2.0 - alpha);
    p.c2 = (2.0 - alpha / 2.0) / (2.0 - alpha);
    p.C_lo = C_lo;
    p.C_hi = C_hi;
    return p;
}

EnvelopePair subordinator_envelope(const SubordinatorEnvelopeParams& params, double tau) {
    require_positive(tau, "tau");
    const double m = std::pow(tau, -params.c1);
    const double poly = std::pow(tau, -1.0 - 0.5 * params.alpha);
    return {std::exp(-params.C_lo * m) * poly, std::exp(-params.C_hi * m) * poly};
}

SubordinatorFit fit_subordinator_envelope(double alpha, const std::vector<double>& taus,
                                          double margin) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("envelope alpha must lie in (0, 2)");
    if (taus.empty()) throw DomainError("fit needs at least one tau");
    if (!(margin > 0.0)) throw DomainError("margin must be > 0");
    const double beta = alpha / 2.0;
    const double c1 = alpha / (2.0 - alpha);
    const double c2 = (2.0 - alpha / 2.0) / (2.0 - alpha);

    // ln σ + c2 ln τ ≈ ln K - C τ^{-c1} where the exponent is between 5 and 200.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (int i = 0; i <= 40; ++i) {
        const double m = 5.0 * std::pow(40.0, i / 40.0);
        const double tau = std::pow(m, -1.0 / c1);
        const double y = log_stable_density(beta, 1.0, tau) + c2 * std::log(tau);
        sx += m;
        sy += y;
        sxx += m * m;
        sxy += m * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    SubordinatorFit fit;
    fit.rate_estimate = -slope;
    fit.params = SubordinatorEnvelopeParams::make(alpha, fit.rate_estimate * (1.0 + margin),
                                                  fit.rate_estimate / (1.0 + margin));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double tau : taus) {
        const double ls = log_stable_density(beta, 1.0, tau);
        const double m = std::pow(tau, -c1);
        const double lpoly = -(1.0 + 0.5 * alpha) * std::log(tau);
        lo = std::min(lo, ls - (-fit.params.C_lo * m + lpoly));
        hi = std::max(hi, std::exp(ls - (-fit.params.C_hi * m + lpoly)));
    }
    fit.prefactor_lo = std::exp(lo);
    fit.prefactor_hi = hi;
    return fit;
}

}  // namespace sbk
