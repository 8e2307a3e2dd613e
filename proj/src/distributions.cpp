#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "ltah/error.hpp"
#include "ltah/simulate.hpp"

namespace ltah {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double segment_start(const PiecewiseExponential& pe, std::size_t i) {
    return i == 0 ? 0.0 : pe.breakpoints[i - 1];
}

double segment_end(const PiecewiseExponential& pe, std::size_t i) {
    return i < pe.breakpoints.size() ? pe.breakpoints[i] : kInf;
}

double pe_cumulative_hazard(const PiecewiseExponential& pe, double t) {
    double h = 0.0;
    for (std::size_t i = 0; i < pe.rates.size(); ++i) {
        const double lo = segment_start(pe, i);
        if (t <= lo) break;
        h += pe.rates[i] * (std::min(t, segment_end(pe, i)) - lo);
    }
    return h;
}

// Exact integral of exp(-H) over [a, b] for piecewise-constant hazards.
double pe_window_integral(const PiecewiseExponential& pe, double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i < pe.rates.size(); ++i) {
        const double lo = std::max(a, segment_start(pe, i));
        const double hi = std::min(b, segment_end(pe, i));
        if (hi <= lo) continue;
        const double s_lo = std::exp(-pe_cumulative_hazard(pe, lo));
        const double r = pe.rates[i];
        total += r > 0.0 ? s_lo * -std::expm1(-r * (hi - lo)) / r : s_lo * (hi - lo);
    }
    return total;
}

}  // namespace

void validate(const DistributionSpec& dist) {
    std::visit(overloaded{
                   [](const Weibull& w) {
                       if (!(w.shape > 0.0) || !(w.scale > 0.0) || !std::isfinite(w.shape) ||
                           !std::isfinite(w.scale)) {
                           throw Error(ErrorKind::InvalidInput,
                                       fmt::format("Weibull needs shape > 0 and scale > 0, got ({}, {})",
                                                   w.shape, w.scale));
                       }
                   },
                   [](const PiecewiseExponential& pe) {
                       if (pe.rates.size() != pe.breakpoints.size() + 1) {
                           throw Error(ErrorKind::InvalidInput,
                                       "piecewise exponential needs one more rate than breakpoints");
                       }
                       for (std::size_t i = 0; i < pe.breakpoints.size(); ++i) {
                           const double prev = i == 0 ? 0.0 : pe.breakpoints[i - 1];
                           if (!(pe.breakpoints[i] > prev) || !std::isfinite(pe.breakpoints[i])) {
                               throw Error(ErrorKind::InvalidInput,
                                           "piecewise exponential breakpoints must be positive and increasing");
                           }
                       }
                       for (double r : pe.rates) {
                           if (!(r > 0.0) || !std::isfinite(r)) {
                               throw Error(ErrorKind::InvalidInput,
                                           "piecewise exponential rates must be positive");
                           }
                       }
                   },
                   [](const Degenerate&) {},
               },
               dist);
}

double cumulative_hazard(const DistributionSpec& dist, double t) {
    if (t <= 0.0) return 0.0;
    return std::visit(overloaded{
                          [t](const Weibull& w) { return std::pow(t / w.scale, w.shape); },
                          [t](const PiecewiseExponential& pe) { return pe_cumulative_hazard(pe, t); },
                          [](const Degenerate&) { return 0.0; },
                      },
                      dist);
}

double survival(const DistributionSpec& dist, double t) {
    return std::exp(-cumulative_hazard(dist, t));
}

double sample_event_time(const DistributionSpec& dist, double u) {
    const double target = -std::log(u);
    return std::visit(
        overloaded{
            [target](const Weibull& w) { return w.scale * std::pow(target, 1.0 / w.shape); },
            [target](const PiecewiseExponential& pe) {
                double h = 0.0;
                for (std::size_t i = 0; i < pe.rates.size(); ++i) {
                    const double lo = segment_start(pe, i);
                    const double hi = segment_end(pe, i);
                    const double gain = pe.rates[i] * (hi - lo);
                    if (target <= h + gain) return lo + (target - h) / pe.rates[i];
                    h += gain;
                }
                return kInf;
            },
            [](const Degenerate&) { return kInf; },
        },
        dist);
}

double sample_censoring(const std::optional<DistributionSpec>& censor_dist, double admin_time,
                        double u) {
    if (!censor_dist) return admin_time;
    return std::min(sample_event_time(*censor_dist, u), admin_time);
}

double true_window_rmst(const DistributionSpec& dist, double t1, double t2) {
    return std::visit(
        overloaded{
            [&](const Weibull& w) {
                if (w.shape == 1.0) {
                    const double rate = 1.0 / w.scale;
                    return std::exp(-rate * t1) * -std::expm1(-rate * (t2 - t1)) / rate;
                }
                auto s = [&](double t) { return std::exp(-std::pow(t / w.scale, w.shape)); };
                double error = 0.0;
                return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    s, t1, t2, 15, 1e-13, &error);
            },
            [&](const PiecewiseExponential& pe) { return pe_window_integral(pe, t1, t2); },
            [&](const Degenerate&) { return t2 - t1; },
        },
        dist);
}

double true_lt_ah(const DistributionSpec& dist, const WindowSpec& window) {
    const double mass = survival(dist, window.tau1()) - survival(dist, window.tau2());
    return mass / true_window_rmst(dist, window.tau1(), window.tau2());
}

std::optional<DistributionSpec> censoring_preset(std::string_view name) {
    if (name == "none") return std::nullopt;
    if (name == "light") return Weibull{3.871, 14.189};
    if (name == "moderate") return Weibull{2.818, 10.233};
    throw Error(ErrorKind::InvalidInput,
                fmt::format("unknown censoring preset '{}' (none, light, moderate)", name));
}

std::array<DistributionSpec, 2> event_preset(std::string_view name) {
    const DistributionSpec control = Weibull{1.0, 10.0};
    if (name == "no-diff") return {control, Weibull{1.0, 10.0}};
    if (name == "ph") return {control, Weibull{1.0, 12.5}};
    if (name == "delayed-1") return {control, calibrate_delayed_curve(DelayedPattern::I, {-0.025, 0.750})};
    if (name == "delayed-2") return {control, calibrate_delayed_curve(DelayedPattern::II, {-0.024, 0.762})};
    if (name == "delayed-3") return {control, calibrate_delayed_curve(DelayedPattern::III, {-0.021, 0.791})};
    throw Error(ErrorKind::InvalidInput,
                fmt::format("unknown event preset '{}' (no-diff, ph, delayed-1, delayed-2, delayed-3)",
                            name));
}

}  // namespace ltah
