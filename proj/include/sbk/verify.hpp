#ifndef SBK_VERIFY_HPP
#define SBK_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sbk/common.hpp"

namespace sbk::verify {

using Json = nlohmann::ordered_json;

/// Configuration document violation; `path` names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& reason);
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Numerical failure at a specific point of a sweep.
class PointError : public QuadratureError {
public:
    PointError(const std::string& check_id, const std::vector<double>& point,
               const std::string& what);
};

enum class Spacing { log, linear };

struct Axis {
    std::string name;
    double min = 1.0;
    double max = 2.0;
    int count = 2;
    Spacing spacing = Spacing::log;

    void validate() const;
    /// Nodes at a refinement level: (count - 1)·2^level + 1 nodes, the
    /// nodes of level L - 1 being every other node of level L.
    [[nodiscard]] std::vector<double> nodes(int level) const;
    /// Maps u in [0, 1] onto the axis.
    [[nodiscard]] double map(double u) const;
};

struct GridSpec {
    std::vector<Axis> axes;
    int refinement_level = 0;

    void validate() const;
};

/// Low-discrepancy sample set over the box spanned by `axes` (counts
/// ignored). Level L holds base_count·2^L points; level L - 1 is the first
/// half of level L.
struct SampleSpec {
    std::vector<Axis> axes;
    std::size_t base_count = 1024;
    int refinement_level = 0;

    void validate() const;
};

/// Concrete point list at the finest level with the coarse subset marked.
struct PointSet {
    std::vector<std::string> names;
    std::vector<std::vector<double>> points;
    std::vector<char> coarse;  // 1 if the point belongs to level L - 1
    int level = 0;
};

PointSet enumerate(const GridSpec& grid);
PointSet enumerate(const SampleSpec& samples);

/// Outcome of one channel at one point.
///
/// `log_ratio` drives bounds checks; `score` is the per-point error for
/// the relative, absolute and z-score modes.
struct PointEval {
    double num = 0.0;
    double den = 0.0;
    double log_ratio = 0.0;
    double score = 0.0;
    bool admissible = true;
    bool insufficient = false;

    static PointEval skip();
    static PointEval ratio(double num, double den);
    static PointEval log_form(double log_num, double log_den);
};

enum class Mode { bounds, relative, absolute, zscore };
enum class Side { upper, lower, both };
enum class Status { pass, fail, insufficient_precision };

std::string_view status_name(Status status);
Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);
Side parse_side(std::string_view name);
std::string_view side_name(Side side);

/// Pass criteria of one output channel.
struct ChannelSpec {
    std::string id;
    Mode mode = Mode::bounds;
    Side side = Side::both;
    double tolerance = 0.0;           // relative/absolute: max score; zscore: max |z|
    double max_drift = 0.1;           // bounds mode, level >= 1
    double max_insufficient = 0.01;   // fraction of admissible points
    std::optional<double> upper_ceiling;
    std::optional<double> lower_floor;
    /// Ceiling (floor) as a multiple of the sup (inf) measured on the
    /// coarse level; re-fitted on every run.
    std::optional<double> upper_scale;
    std::optional<double> lower_scale;
};

using PointFn = std::function<std::vector<PointEval>(std::span<const double>)>;

struct CheckSpec {
    std::string kind;
    std::vector<ChannelSpec> channels;
    PointSet points;
    PointFn eval;
    Json info = Json::object();  // parameters and fitted constants for the report
};

struct RatioReport {
    std::string check_id;
    std::string kind;
    Mode mode = Mode::bounds;
    Side side = Side::both;
    double sup_ratio = 0.0;
    double inf_ratio = 0.0;
    std::vector<double> argmax_point;
    std::vector<double> argmin_point;
    std::vector<std::string> axis_names;
    std::size_t n_points = 0;
    std::size_t n_admissible = 0;
    std::size_t n_skipped = 0;
    std::size_t n_insufficient = 0;
    int refinement_level = 0;
    std::optional<double> refinement_drift;
    double max_score = 0.0;
    std::vector<double> max_score_point;
    std::optional<double> upper_ceiling;
    std::optional<double> lower_floor;
    Status status = Status::pass;
    std::vector<std::string> reasons;
    Json info = Json::object();
};

struct ExecOptions {
    int threads = 1;
};

/// Per-point results of every channel at the finest level, in point order.
std::vector<std::vector<PointEval>> evaluate_points(const CheckSpec& check,
                                                    const ExecOptions& exec = {});

/// Aggregates evaluated points into one report per channel.
std::vector<RatioReport> summarize(const CheckSpec& check,
                                   const std::vector<std::vector<PointEval>>& evals);

std::vector<RatioReport> sweep_ratio(const CheckSpec& check, const ExecOptions& exec = {});

Json to_json(const RatioReport& report);

/// One row per report: check_id,sup,inf,drift,status.
std::string reports_csv(const std::vector<RatioReport>& reports);

/// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for non-finite).
std::string format_number(double x);

// --- configuration-driven suites -------------------------------------------

/// Registered check kinds.
std::vector<std::string> check_kinds();

/// Expands one check entry of a config document into concrete checks
/// (one per (ζ, α) pair where applicable). `path` prefixes error messages.
std::vector<CheckSpec> build_checks(const Json& entry, const std::string& path,
                                    const QuadratureConfig& quad, std::uint64_t seed,
                                    const ExecOptions& exec);

/// Validates a whole config document; throws ConfigError.
void validate_config(const Json& config);

struct SuiteOptions {
    std::vector<std::string> only;  // keep entries whose group, kind or id matches
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

struct SuiteResult {
    Json report;
    std::vector<RatioReport> reports;
    bool passed = true;
    bool numerical_failure = false;
};

SuiteResult run_suite(const Json& config, const SuiteOptions& options = {});

/// Built-in configs: "smoke" and "full".
Json builtin_suite(std::string_view name);

/// Point-by-point records of a single channel as CSV
/// (axis columns, numerator, denominator, ratio). Rows are restricted to
/// chunk k of n equal slices of the point list (1-based), k = n = 1 for all.
std::string sweep_csv(const CheckSpec& check, std::size_t channel, int chunk_k, int chunk_n,
                      const ExecOptions& exec = {});

}  // namespace sbk::verify

#endif
