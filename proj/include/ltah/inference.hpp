#pragma once

// Two-arm contrasts: ratio and difference of (LT-)AH and (LT-)RMST with Wald
// intervals and two-sided tests sharing one variance, plus the log-rank test.
// Arm 1 is treatment, arm 0 is control; contrasts are treatment vs control.

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "ltah/measures.hpp"
#include "ltah/surv_core.hpp"

namespace ltah {

enum class Measure { AH, LT_AH, RMST, LT_RMST, LOGRANK };
enum class Contrast { Ratio, Difference, Score };

std::string_view to_string(Measure m);
std::string_view to_string(Contrast c);

struct ArmSummary {
    double estimate = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    std::size_t n = 0;
};

struct ContrastResult {
    Measure measure = Measure::LT_AH;
    Contrast contrast = Contrast::Difference;
    std::optional<double> estimate;  // empty for the log-rank test
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double z = 0.0;
    double p_two_sided = 1.0;
    std::optional<WindowSpec> window;
    std::optional<std::array<ArmSummary, 2>> per_arm;  // {treatment, control}

    // Null value is 1 for ratios, 0 for differences.
    bool ci_excludes_null() const;
};

// Contrasts from precomputed per-arm estimates.
ContrastResult ah_ratio(const AhEstimate& treatment, const AhEstimate& control,
                        double alpha, Measure measure = Measure::LT_AH);
ContrastResult ah_difference(const AhEstimate& treatment, const AhEstimate& control,
                             double alpha, Measure measure = Measure::LT_AH);
ContrastResult rmst_ratio(const RmstEstimate& treatment, const RmstEstimate& control,
                          double alpha, Measure measure = Measure::LT_RMST);
ContrastResult rmst_difference(const RmstEstimate& treatment, const RmstEstimate& control,
                               double alpha, Measure measure = Measure::LT_RMST);

ContrastResult lt_ah_ratio(const ArmSample& arm1, const ArmSample& arm0,
                           const WindowSpec& window, double alpha);
ContrastResult lt_ah_difference(const ArmSample& arm1, const ArmSample& arm0,
                                const WindowSpec& window, double alpha);
// Window RMST contrasts; tau1 = 0 gives the standard RMST.
ContrastResult rmst_difference(const ArmSample& arm1, const ArmSample& arm0,
                               const WindowSpec& window, double alpha);
ContrastResult rmst_ratio(const ArmSample& arm1, const ArmSample& arm0,
                          const WindowSpec& window, double alpha);

struct LogrankStatistic {
    double observed_minus_expected = 0.0;  // for the treatment arm
    double variance = 0.0;
    double z = 0.0;
    int events = 0;
};

// Unweighted log-rank statistic over pooled subjects (hypergeometric
// variance with the tie correction). Error(NoEvents) without events and
// Error(DegenerateVariance) when the variance is zero.
LogrankStatistic logrank_statistic(std::span<const Subject> pooled);

ContrastResult logrank_test(const ArmSample& arm1, const ArmSample& arm0);

}  // namespace ltah
