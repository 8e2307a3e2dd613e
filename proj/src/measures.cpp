#include "ltah/measures.hpp"

#include <cmath>
#include <fmt/format.h>

#include "ltah/error.hpp"
#include "ltah/normal.hpp"

namespace ltah {

WindowSpec::WindowSpec(double tau1, double tau2) : tau1_(tau1), tau2_(tau2) {
    if (!std::isfinite(tau1) || !std::isfinite(tau2) || tau1 < 0.0 || !(tau2 > tau1)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("invalid window [{}, {}]: need 0 <= tau1 < tau2", tau1, tau2));
    }
}

WindowMasses window_masses(const StepFunction& survival, const WindowSpec& window) {
    if (window.tau2() > survival.support_end()) {
        throw Error(ErrorKind::WindowBeyondSupport,
                    fmt::format("tau2 = {} exceeds the largest observed time {}",
                                window.tau2(), survival.support_end()));
    }
    WindowMasses m;
    m.surv_tau1 = survival(window.tau1());
    m.surv_tau2 = survival(window.tau2());
    m.rmst_tau1 = survival.integral(window.tau1());
    m.rmst_tau2 = survival.integral(window.tau2());
    m.f_diff = m.surv_tau1 - m.surv_tau2;
    m.r_diff = m.rmst_tau2 - m.rmst_tau1;
    if (!(m.f_diff > 0.0)) {
        throw Error(ErrorKind::ZeroEventMass,
                    fmt::format("no events in the window ({}, {}]", window.tau1(), window.tau2()));
    }
    if (!(m.r_diff > 0.0)) {
        throw Error(ErrorKind::ZeroTimeMass,
                    fmt::format("no survival time mass in [{}, {}]", window.tau1(), window.tau2()));
    }
    return m;
}

VarianceWeights variance_weights(const WindowMasses& m, const WindowSpec& window,
                                 double u, double rmst_u) {
    if (u <= window.tau1()) {
        // Numerators are S(tau2) - S(tau1) = -f_diff and int_tau1^tau2 S = r_diff.
        return {};
    }
    const double tail = m.rmst_tau2 - rmst_u;
    return {m.surv_tau2 / m.f_diff + tail / m.r_diff,
            m.surv_tau2 / m.r_diff + m.f_diff / (m.r_diff * m.r_diff) * tail};
}

namespace {

struct WindowVariances {
    double log_scale = 0.0;
    double plain_scale = 0.0;
};

// Sum of w(u)^2 dH(u)/G(u) over events u <= tau2, divided by n. With
// dH = d/Y and G = Y/n this is sum of w^2 d / Y^2.
WindowVariances accumulate_variances(const ArmSample& sample, const StepFunction& km,
                                     const WindowMasses& m, const WindowSpec& window) {
    const auto& rt = sample.risk_table();
    WindowVariances v;
    for (std::size_t j = 0; j < rt.event_times.size(); ++j) {
        const double u = rt.event_times[j];
        if (u > window.tau2()) break;
        if (u <= window.tau1()) continue;
        const auto w = variance_weights(m, window, u, km.integral_at_knot(j));
        const double y = rt.at_risk[j];
        const double measure = rt.events[j] / (y * y);
        v.log_scale += w.log_scale * w.log_scale * measure;
        v.plain_scale += w.plain_scale * w.plain_scale * measure;
    }
    return v;
}

}  // namespace

AhEstimate lt_ah_point(const ArmSample& sample, const WindowSpec& window) {
    const auto km = km_estimate(sample);
    const auto m = window_masses(km, window);
    const auto v = accumulate_variances(sample, km, m, window);
    AhEstimate est;
    est.eta_hat = m.f_diff / m.r_diff;
    est.var_log = v.log_scale;
    est.var_plain = v.plain_scale;
    est.n = sample.size();
    est.window = window;
    est.f_diff = m.f_diff;
    est.r_diff = m.r_diff;
    return est;
}

AhEstimate ah_point(const ArmSample& sample, double tau) {
    return lt_ah_point(sample, WindowSpec(0.0, tau));
}

double var_log_scale(const ArmSample& sample, const WindowSpec& window) {
    return lt_ah_point(sample, window).var_log;
}

double var_plain_scale(const ArmSample& sample, const WindowSpec& window) {
    return lt_ah_point(sample, window).var_plain;
}

std::pair<double, double> group_ci(const AhEstimate& est, double alpha) {
    const double z = two_sided_critical(alpha);
    const double half = z * std::sqrt(est.var_log);
    const double log_eta = std::log(est.eta_hat);
    return {std::exp(log_eta - half), std::exp(log_eta + half)};
}

RmstEstimate window_rmst(const ArmSample& sample, const WindowSpec& window) {
    const auto km = km_estimate(sample);
    if (window.tau2() > km.support_end()) {
        throw Error(ErrorKind::WindowBeyondSupport,
                    fmt::format("tau2 = {} exceeds the largest observed time {}",
                                window.tau2(), km.support_end()));
    }
    const double r1 = km.integral(window.tau1());
    const double r2 = km.integral(window.tau2());
    const double r_diff = r2 - r1;

    const auto& rt = sample.risk_table();
    double variance = 0.0;
    for (std::size_t j = 0; j < rt.event_times.size(); ++j) {
        const double u = rt.event_times[j];
        if (u > window.tau2()) break;
        // For u <= tau1 the two tail integrals differ by exactly r_diff.
        const double w = u <= window.tau1() ? r_diff : r2 - km.integral_at_knot(j);
        const double y = rt.at_risk[j];
        variance += w * w * rt.events[j] / (y * y);
    }
    return {r_diff, variance, sample.size(), window};
}

ArmSample landmark_subset(const ArmSample& sample, double tau1) {
    std::vector<Subject> kept;
    bool any_event = false;
    for (const auto& s : sample.subjects()) {
        if (s.observed_time > tau1) {
            kept.push_back({s.observed_time - tau1, s.event, s.arm});
            any_event = any_event || s.event;
        }
    }
    if (kept.size() < 2) {
        throw Error(ErrorKind::TooFewAtRisk,
                    fmt::format("{} subject(s) remain at risk after {}", kept.size(), tau1));
    }
    if (!any_event) {
        throw Error(ErrorKind::ZeroEventMass, fmt::format("no events after {}", tau1));
    }
    return ArmSample(std::move(kept));
}

}  // namespace ltah
