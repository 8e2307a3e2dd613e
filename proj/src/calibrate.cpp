#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fmt/format.h>

#include "ltah/error.hpp"
#include "ltah/simulate.hpp"

namespace ltah {

namespace {

constexpr double kDropEnd = 4.0;
constexpr int kParallelSegments = 4;
// Pattern III: post-drop hazard exceeds the control rate by this fraction of
// the drop depth.
constexpr double kRebound = 0.1;

double control_survival(double t) { return std::exp(-kControlRate * t); }

}  // namespace

PiecewiseExponential delayed_curve(DelayedPattern pattern, double drop_rate) {
    switch (pattern) {
        case DelayedPattern::I:
            return {{kSeparationTime}, {kControlRate, drop_rate}};
        case DelayedPattern::II: {
            PiecewiseExponential pe{{kSeparationTime, kDropEnd}, {kControlRate, drop_rate}};
            double prev = kDropEnd;
            double s_prev = std::exp(-kControlRate * kSeparationTime - drop_rate * (kDropEnd - kSeparationTime));
            const double gap = s_prev - control_survival(kDropEnd);
            const double step = (kCalibrationEnd - kDropEnd) / kParallelSegments;
            for (int i = 1; i <= kParallelSegments; ++i) {
                const double knot = kDropEnd + step * i;
                const double s_knot = control_survival(knot) + gap;
                pe.rates.push_back(-std::log(s_knot / s_prev) / (knot - prev));
                if (i < kParallelSegments) pe.breakpoints.push_back(knot);
                prev = knot;
                s_prev = s_knot;
            }
            return pe;
        }
        case DelayedPattern::III:
            return {{kSeparationTime, kDropEnd},
                    {kControlRate, drop_rate, kControlRate + kRebound * (kControlRate - drop_rate)}};
    }
    throw Error(ErrorKind::InvalidInput, "unknown delayed pattern");
}

PiecewiseExponential calibrate_delayed_curve(DelayedPattern pattern, CalibrationTarget target) {
    if (!(target.ratio > 0.0) || target.ratio > 1.0) {
        throw Error(ErrorKind::CalibrationFailed,
                    fmt::format("delayed-benefit target ratio must be in (0, 1], got {}", target.ratio));
    }
    const WindowSpec window(kSeparationTime, kCalibrationEnd);
    const double eta_target = kControlRate * target.ratio;
    if (target.ratio == 1.0) return delayed_curve(pattern, kControlRate);

    auto f = [&](double x) { return true_lt_ah(delayed_curve(pattern, x), window) - eta_target; };
    double lo = 1e-6;
    double hi = kControlRate;
    if (!(f(lo) < 0.0 && f(hi) > 0.0)) {
        throw Error(ErrorKind::CalibrationFailed,
                    fmt::format("LT-AH {} is not reachable for this pattern", eta_target));
    }
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
    const double x = 0.5 * (a + b);
    auto curve = delayed_curve(pattern, x);

    const double eta = true_lt_ah(curve, window);
    if (std::fabs(eta - eta_target) > 1e-10) {
        throw Error(ErrorKind::CalibrationFailed, "root finding did not converge");
    }
    if (std::fabs((eta - kControlRate) - target.difference) > 5e-4) {
        throw Error(ErrorKind::CalibrationFailed,
                    fmt::format("difference target {} inconsistent with ratio {}",
                                target.difference, target.ratio));
    }
    for (std::size_t i = 1; i < curve.rates.size(); ++i) {
        const double r = curve.rates[i];
        const bool ok = pattern == DelayedPattern::III && i == 2 ? r > kControlRate : r < kControlRate;
        if (!ok || !(r > 0.0)) {
            throw Error(ErrorKind::CalibrationFailed, "calibrated rates violate the pattern shape");
        }
    }
    return curve;
}

}  // namespace ltah
