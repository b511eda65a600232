#include "sbk/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "sbk/bessel_kernel.hpp"

namespace sbk {

std::string_view mc_status_name(McStatus status) {
    return status == McStatus::ok ? "ok" : "insufficient-precision";
}

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("stable index beta must lie in (0, 1)");
}

void check_count(std::int64_t n) {
    if (n < 1) throw DomainError("sample count n must be >= 1");
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::int64_t chunk) {
    const auto c = static_cast<std::uint64_t>(chunk);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1).
double open_unit(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

double draw_stable(double beta, std::mt19937_64& eng) {
    const double u = std::numbers::pi * open_unit(eng);
    const double e = -std::log(open_unit(eng));
    const double log_s = std::log(std::sin(beta * u)) - std::log(std::sin(u)) / beta +
                         (1.0 - beta) / beta * (std::log(std::sin((1.0 - beta) * u)) - std::log(e));
    return std::exp(log_s);
}

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        const auto na = static_cast<double>(n);
        const auto nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double tot = na + nb;
        mean += d * nb / tot;
        m2 += o.m2 + d * d * na * nb / tot;
        n += o.n;
    }
};

template <class F>
McEstimate run_chunks(std::int64_t n, std::uint64_t seed, int threads, F&& per_sample) {
    check_count(n);
    const std::int64_t chunks = (n + kMcChunk - 1) / kMcChunk;
    std::vector<Moments> parts(static_cast<std::size_t>(chunks));
    auto work = [&](std::int64_t c) {
        auto eng = chunk_engine(seed, c);
        const std::int64_t len = std::min(kMcChunk, n - c * kMcChunk);
        Moments m;
        for (std::int64_t i = 0; i < len; ++i) m.push(per_sample(eng));
        parts[static_cast<std::size_t>(c)] = m;
    };
    const int nt = static_cast<int>(std::clamp<std::int64_t>(threads, 1, chunks));
    if (nt == 1) {
        for (std::int64_t c = 0; c < chunks; ++c) work(c);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex mu;
        for (int w = 0; w < nt; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::int64_t c = w; c < chunks; c += nt) work(c);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!err) err = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    Moments total;
    for (const auto& m : parts) total.merge(m);

    McEstimate est;
    est.mean = total.mean;
    est.n = n;
    est.seed = seed;
    est.std_error =
        n > 1 ? std::sqrt(total.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    const bool precise = n > 1 && est.mean > 0.0 && est.std_error <= kMcMaxRelativeError * est.mean;
    est.status = precise ? McStatus::ok : McStatus::insufficient_precision;
    return est;
}

}  // namespace

std::vector<double> sample_positive_stable(double beta, std::int64_t n, std::uint64_t seed) {
    check_beta(beta);
    check_count(n);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t c = 0; c * kMcChunk < n; ++c) {
        auto eng = chunk_engine(seed, c);
        const std::int64_t len = std::min(kMcChunk, n - c * kMcChunk);
        for (std::int64_t i = 0; i < len; ++i) out.push_back(draw_stable(beta, eng));
    }
    return out;
}

McEstimate mc_kernel(const KernelParams& params, double t, double r, double s, std::int64_t n,
                     std::uint64_t seed, int threads) {
    if (!params.subordinated()) throw DomainError("mc_kernel needs alpha in (0, 2)");
    require_positive(t, "t");
    require_positive(r, "r");
    require_positive(s, "s");
    const double beta = params.beta();
    const double scale = std::pow(t, 2.0 / params.alpha);
    const double zeta = params.zeta;
    return run_chunks(n, seed, threads, [&](std::mt19937_64& eng) {
        const double tau = scale * draw_stable(beta, eng);
        if (!(tau > 0.0) || !std::isfinite(tau)) return 0.0;
        return p2(zeta, tau, r, s);
    });
}

McEstimate mc_laplace(double beta, double lambda, std::int64_t n, std::uint64_t seed, double scale,
                      int threads) {
    check_beta(beta);
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    require_positive(scale, "scale");
    return run_chunks(n, seed, threads, [&](std::mt19937_64& eng) {
        return std::exp(-lambda * scale * draw_stable(beta, eng));
    });
}

}  // namespace sbk
