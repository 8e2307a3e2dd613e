#pragma once

// Scenario model and Monte-Carlo engine for two-arm trials with
// independent right censoring and an administrative cutoff.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ltah/measures.hpp"
#include "ltah/surv_core.hpp"

namespace ltah {

struct Weibull {
    double shape = 1.0;
    double scale = 1.0;
};

// Hazard rates[i] on (breakpoints[i-1], breakpoints[i]], with breakpoint 0
// implied and the last rate extending to infinity.
struct PiecewiseExponential {
    std::vector<double> breakpoints;
    std::vector<double> rates;
};

// Never occurs: survival is 1 everywhere. Used for "no random censoring".
struct Degenerate {};

using DistributionSpec = std::variant<Weibull, PiecewiseExponential, Degenerate>;

void validate(const DistributionSpec& dist);
double survival(const DistributionSpec& dist, double t);
double cumulative_hazard(const DistributionSpec& dist, double t);

// Inverse transform: the t with S(t) = u, for u in (0, 1).
double sample_event_time(const DistributionSpec& dist, double u);

// min(C, admin_time) with C drawn by inverse transform from censor_dist;
// without a censoring law the administrative time is returned.
double sample_censoring(const std::optional<DistributionSpec>& censor_dist, double admin_time,
                        double u);

// Integral of S over [t1, t2]: closed form for exponential-type laws,
// adaptive Gauss-Kronrod otherwise.
double true_window_rmst(const DistributionSpec& dist, double t1, double t2);
// {S(tau1) - S(tau2)} / integral of S over [tau1, tau2].
double true_lt_ah(const DistributionSpec& dist, const WindowSpec& window);

// Delayed-effect treatment curves: hazard 0.1 on [0, 2] like the control
// Weibull(1, 10), then a pattern-specific shape on (2, inf).
//   I   constant rate below 0.1, curves keep diverging
//   II  a drop on (2, 4] then rates that hold S1 - S0 fixed, parallel curves
//   III a drop on (2, 4] then a rate above 0.1, curves re-converge
enum class DelayedPattern { I, II, III };

struct CalibrationTarget {
    double difference = 0.0;
    double ratio = 1.0;
};

inline constexpr double kControlRate = 0.1;
inline constexpr double kSeparationTime = 2.0;
inline constexpr double kCalibrationEnd = 10.0;

// One-parameter family for each pattern, indexed by the drop rate x in (0, 0.1].
PiecewiseExponential delayed_curve(DelayedPattern pattern, double drop_rate);

// Solves the drop rate so the curve's LT-AH on [2, 10] equals
// 0.1 * target.ratio to 1e-10. Error(CalibrationFailed) if unreachable.
PiecewiseExponential calibrate_delayed_curve(DelayedPattern pattern, CalibrationTarget target);

// Figure-style presets. Event presets return {control, treatment}.
std::array<DistributionSpec, 2> event_preset(std::string_view name);
std::optional<DistributionSpec> censoring_preset(std::string_view name);

struct ScenarioConfig {
    std::string name = "scenario";
    std::array<DistributionSpec, 2> event_dist{Weibull{1.0, 10.0}, Weibull{1.0, 10.0}};  // by arm
    std::optional<DistributionSpec> censor_dist;
    double admin_time = 10.0;
    int n_per_arm = 100;
    int replicates = 5000;
    WindowSpec window{2.0, 10.0};
    double alpha = 0.05;
    std::uint64_t seed = 1;
};

// Error(InvalidInput) on any violated field constraint.
void validate(const ScenarioConfig& config);

enum class StreamRole : std::uint64_t { Arm0Event = 0, Arm1Event = 1, Arm0Censor = 2, Arm1Censor = 3 };

// Uniform(0, 1) stream keyed by (seed, replicate, role): a SplitMix64 mix of
// the key seeds a Mersenne Twister, and 53-bit draws are offset by half an ulp
// so 0 and 1 never occur.
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint64_t replicate, StreamRole role);
    double operator()();

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Draws n subjects of one arm from separate event and censoring uniform
// sources; the event time is compared with the censoring time (ties count
// as events).
template <class EventUniform, class CensorUniform>
std::vector<Subject> generate_arm(const DistributionSpec& event_dist,
                                  const std::optional<DistributionSpec>& censor_dist,
                                  double admin_time, int n, Arm arm, EventUniform&& event_u,
                                  CensorUniform&& censor_u) {
    std::vector<Subject> subjects;
    subjects.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = sample_event_time(event_dist, event_u());
        const double c = sample_censoring(censor_dist, admin_time, censor_u());
        subjects.push_back({t <= c ? t : c, t <= c, arm});
    }
    return subjects;
}

// Analyses evaluated for every replicate.
enum class Metric {
    LtAhDifference,
    LtAhRatio,
    AhDifference,
    AhRatio,
    RmstDifference,
    RmstRatio,
    LtRmstDifference,
    LtRmstRatio,
    Logrank,
};
inline constexpr std::size_t kMetricCount = 9;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::LtAhDifference, Metric::LtAhRatio,        Metric::AhDifference,
    Metric::AhRatio,        Metric::RmstDifference,   Metric::RmstRatio,
    Metric::LtRmstDifference, Metric::LtRmstRatio,    Metric::Logrank};

std::string_view to_string(Metric m);
bool is_ratio(Metric m);

struct MetricOutcome {
    bool defined = false;
    double estimate = 0.0;  // NaN for the log-rank test
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double p_two_sided = 1.0;
};

struct ReplicateResult {
    std::array<MetricOutcome, kMetricCount> outcomes{};
    const MetricOutcome& operator[](Metric m) const { return outcomes[static_cast<std::size_t>(m)]; }
    MetricOutcome& operator[](Metric m) { return outcomes[static_cast<std::size_t>(m)]; }
};

struct TrialData {
    std::vector<Subject> control;
    std::vector<Subject> treatment;
};

TrialData simulate_trial(const ScenarioConfig& config, std::uint64_t replicate_index);

// All analyses for one trial: LT-AH/LT-RMST over the config window, AH/RMST
// over [0, tau2], and the log-rank test. Analyses the data cannot support
// come back with defined = false.
ReplicateResult analyze_trial(const TrialData& data, const WindowSpec& window, double alpha);

ReplicateResult run_replicate(const ScenarioConfig& config, std::uint64_t replicate_index);

// Population values of each contrast; empty for the log-rank test.
std::array<std::optional<double>, kMetricCount> true_values(const ScenarioConfig& config);

struct MetricSummary {
    Metric metric = Metric::LtAhDifference;
    std::optional<double> true_value;
    double mean_estimate = 0.0;
    double mean_bias = 0.0;
    double coverage = 0.0;
    double coverage_se = 0.0;
    double mean_ci_length = 0.0;
    double rejection_rate = 0.0;  // p < alpha, undefined replicates count as non-rejection
    double rejection_se = 0.0;
    int defined_count = 0;
    int undefined_count = 0;
};

struct McSummary {
    ScenarioConfig config;
    std::array<MetricSummary, kMetricCount> metrics{};
    const MetricSummary& operator[](Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
};

// Aggregates replicates in index order; the result does not depend on the
// number of threads (0 = hardware concurrency).
McSummary monte_carlo(const ScenarioConfig& config, unsigned threads = 1);

// Runs replicates 0..replicates-1 with `fn(index)` across threads and
// returns the results in index order.
std::vector<ReplicateResult> run_replicates(const ScenarioConfig& config, unsigned threads);

McSummary summarize(const ScenarioConfig& config, const std::vector<ReplicateResult>& results);

}  // namespace ltah
