#include "ltah/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <vector>

#include "ltah/error.hpp"
#include "ltah/normal.hpp"

namespace ltah {

std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::AH: return "AH";
        case Measure::LT_AH: return "LT-AH";
        case Measure::RMST: return "RMST";
        case Measure::LT_RMST: return "LT-RMST";
        case Measure::LOGRANK: return "LOGRANK";
    }
    return "?";
}

std::string_view to_string(Contrast c) {
    switch (c) {
        case Contrast::Ratio: return "ratio";
        case Contrast::Difference: return "difference";
        case Contrast::Score: return "score";
    }
    return "?";
}

bool ContrastResult::ci_excludes_null() const {
    const double null_value = contrast == Contrast::Ratio ? 1.0 : 0.0;
    return ci_lower > null_value || ci_upper < null_value;
}

namespace {

void check_labels(const ArmSample& arm1, const ArmSample& arm0) {
    if (arm1.arm() != Arm::Treatment || arm0.arm() != Arm::Control) {
        throw Error(ErrorKind::InvalidInput,
                    "contrasts need arm1 labeled 1 (treatment) and arm0 labeled 0 (control)");
    }
}

void check_same_window(const WindowSpec& a, const WindowSpec& b) {
    if (!(a == b)) throw Error(ErrorKind::InvalidInput, "arm estimates use different windows");
}

double standard_error(double variance) {
    if (!(variance > 0.0)) {
        throw Error(ErrorKind::DegenerateVariance, "contrast has zero estimated variance");
    }
    return std::sqrt(variance);
}

// Wald interval and test for an estimate on the scale where it is normal.
// Ratios pass the log estimate and are mapped back through exp.
ContrastResult wald(Measure measure, Contrast contrast, double scale_estimate, double variance,
                    double alpha, const WindowSpec& window) {
    const double se = standard_error(variance);
    const double q = two_sided_critical(alpha);
    ContrastResult r;
    r.measure = measure;
    r.contrast = contrast;
    r.z = scale_estimate / se;
    r.p_two_sided = two_sided_p(r.z);
    r.window = window;
    const double lo = scale_estimate - q * se;
    const double hi = scale_estimate + q * se;
    if (contrast == Contrast::Ratio) {
        r.estimate = std::exp(scale_estimate);
        r.ci_lower = std::exp(lo);
        r.ci_upper = std::exp(hi);
    } else {
        r.estimate = scale_estimate;
        r.ci_lower = lo;
        r.ci_upper = hi;
    }
    return r;
}

ArmSummary summarize(const AhEstimate& est, double alpha) {
    const auto [lo, hi] = group_ci(est, alpha);
    return {est.eta_hat, lo, hi, est.n};
}

ArmSummary summarize(const RmstEstimate& est, double alpha) {
    const double half = two_sided_critical(alpha) * std::sqrt(est.variance);
    return {est.value, est.value - half, est.value + half, est.n};
}

}  // namespace

ContrastResult ah_ratio(const AhEstimate& treatment, const AhEstimate& control, double alpha,
                        Measure measure) {
    check_same_window(treatment.window, control.window);
    auto r = wald(measure, Contrast::Ratio, std::log(treatment.eta_hat / control.eta_hat),
                  treatment.var_log + control.var_log, alpha, treatment.window);
    r.per_arm = {{summarize(treatment, alpha), summarize(control, alpha)}};
    return r;
}

ContrastResult ah_difference(const AhEstimate& treatment, const AhEstimate& control,
                             double alpha, Measure measure) {
    check_same_window(treatment.window, control.window);
    auto r = wald(measure, Contrast::Difference, treatment.eta_hat - control.eta_hat,
                  treatment.var_plain + control.var_plain, alpha, treatment.window);
    r.per_arm = {{summarize(treatment, alpha), summarize(control, alpha)}};
    return r;
}

ContrastResult rmst_ratio(const RmstEstimate& treatment, const RmstEstimate& control,
                          double alpha, Measure measure) {
    check_same_window(treatment.window, control.window);
    if (!(treatment.value > 0.0) || !(control.value > 0.0)) {
        throw Error(ErrorKind::ZeroTimeMass, "RMST ratio needs positive area in both arms");
    }
    // Delta method on the log scale: var(log R) = var(R) / R^2.
    const double variance = treatment.variance / (treatment.value * treatment.value) +
                            control.variance / (control.value * control.value);
    auto r = wald(measure, Contrast::Ratio, std::log(treatment.value / control.value), variance,
                  alpha, treatment.window);
    r.per_arm = {{summarize(treatment, alpha), summarize(control, alpha)}};
    return r;
}

ContrastResult rmst_difference(const RmstEstimate& treatment, const RmstEstimate& control,
                               double alpha, Measure measure) {
    check_same_window(treatment.window, control.window);
    auto r = wald(measure, Contrast::Difference, treatment.value - control.value,
                  treatment.variance + control.variance, alpha, treatment.window);
    r.per_arm = {{summarize(treatment, alpha), summarize(control, alpha)}};
    return r;
}

namespace {

Measure ah_measure(const WindowSpec& w) { return w.tau1() == 0.0 ? Measure::AH : Measure::LT_AH; }
Measure rmst_measure(const WindowSpec& w) {
    return w.tau1() == 0.0 ? Measure::RMST : Measure::LT_RMST;
}

}  // namespace

ContrastResult lt_ah_ratio(const ArmSample& arm1, const ArmSample& arm0,
                           const WindowSpec& window, double alpha) {
    check_labels(arm1, arm0);
    return ah_ratio(lt_ah_point(arm1, window), lt_ah_point(arm0, window), alpha,
                    ah_measure(window));
}

ContrastResult lt_ah_difference(const ArmSample& arm1, const ArmSample& arm0,
                                const WindowSpec& window, double alpha) {
    check_labels(arm1, arm0);
    return ah_difference(lt_ah_point(arm1, window), lt_ah_point(arm0, window), alpha,
                         ah_measure(window));
}

ContrastResult rmst_difference(const ArmSample& arm1, const ArmSample& arm0,
                               const WindowSpec& window, double alpha) {
    check_labels(arm1, arm0);
    return rmst_difference(window_rmst(arm1, window), window_rmst(arm0, window), alpha,
                           rmst_measure(window));
}

ContrastResult rmst_ratio(const ArmSample& arm1, const ArmSample& arm0,
                          const WindowSpec& window, double alpha) {
    check_labels(arm1, arm0);
    return rmst_ratio(window_rmst(arm1, window), window_rmst(arm0, window), alpha,
                      rmst_measure(window));
}

LogrankStatistic logrank_statistic(std::span<const Subject> pooled) {
    std::vector<Subject> sorted(pooled.begin(), pooled.end());
    std::sort(sorted.begin(), sorted.end(), [](const Subject& a, const Subject& b) {
        return a.observed_time < b.observed_time;
    });

    int at_risk = static_cast<int>(sorted.size());
    int at_risk_trt = 0;
    for (const auto& s : sorted) at_risk_trt += s.arm == Arm::Treatment ? 1 : 0;

    LogrankStatistic out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double t = sorted[i].observed_time;
        int d = 0, d_trt = 0, leaving = 0, leaving_trt = 0;
        while (i < sorted.size() && sorted[i].observed_time == t) {
            const bool trt = sorted[i].arm == Arm::Treatment;
            if (sorted[i].event) {
                ++d;
                d_trt += trt ? 1 : 0;
            }
            ++leaving;
            leaving_trt += trt ? 1 : 0;
            ++i;
        }
        if (d > 0) {
            const double y = at_risk;
            const double share = at_risk_trt / y;
            out.observed_minus_expected += d_trt - d * share;
            if (at_risk > 1) {
                out.variance += d * share * (1.0 - share) * (y - d) / (y - 1.0);
            }
            out.events += d;
        }
        at_risk -= leaving;
        at_risk_trt -= leaving_trt;
    }
    if (out.events == 0) throw Error(ErrorKind::NoEvents, "log-rank test needs at least one event");
    if (!(out.variance > 0.0)) {
        throw Error(ErrorKind::DegenerateVariance, "log-rank variance is zero");
    }
    out.z = out.observed_minus_expected / std::sqrt(out.variance);
    return out;
}

ContrastResult logrank_test(const ArmSample& arm1, const ArmSample& arm0) {
    check_labels(arm1, arm0);
    std::vector<Subject> pooled(arm1.subjects().begin(), arm1.subjects().end());
    pooled.insert(pooled.end(), arm0.subjects().begin(), arm0.subjects().end());
    const auto stat = logrank_statistic(pooled);
    ContrastResult r;
    r.measure = Measure::LOGRANK;
    r.contrast = Contrast::Score;
    r.ci_lower = std::nan("");
    r.ci_upper = std::nan("");
    r.z = stat.z;
    r.p_two_sided = two_sided_p(stat.z);
    return r;
}

}  // namespace ltah
