#ifndef SBK_MC_ORACLE_HPP
#define SBK_MC_ORACLE_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "sbk/common.hpp"

namespace sbk {

enum class McStatus { ok, insufficient_precision };

std::string_view mc_status_name(McStatus status);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / √n
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    McStatus status = McStatus::ok;
};

/// Samples are generated in fixed chunks, each from its own generator
/// seeded by (seed, chunk index). Results do not depend on `threads`.
inline constexpr std::int64_t kMcChunk = 65536;

/// Relative standard error above which an estimate is flagged.
inline constexpr double kMcMaxRelativeError = 0.2;

/// n draws of S with E[e^{-λS}] = e^{-λ^β}, 0 < β < 1 (Kanter's representation).
std::vector<double> sample_positive_stable(double beta, std::int64_t n, std::uint64_t seed);

/// Mean of p2(τ, r, s) with τ = t^{2/α} S, S ~ σ_1^(α/2), α in (0, 2).
McEstimate mc_kernel(const KernelParams& params, double t, double r, double s, std::int64_t n,
                     std::uint64_t seed, int threads = 1);

/// Mean of e^{-λ scale S}; with scale = t^{1/β} the target is e^{-t λ^β}.
McEstimate mc_laplace(double beta, double lambda, std::int64_t n, std::uint64_t seed,
                      double scale = 1.0, int threads = 1);

}  // namespace sbk

#endif
