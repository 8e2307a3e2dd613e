#pragma once

// Per-arm window summaries: the (long-term) average hazard with survival
// weight, eta(tau1, tau2) = {F(tau2) - F(tau1)} / {R(tau2) - R(tau1)}, its
// log-scale and plain-scale plug-in variances, and the window RMST.

#include <cstddef>
#include <utility>

#include "ltah/surv_core.hpp"

namespace ltah {

class WindowSpec {
public:
    // Error(InvalidInput) unless 0 <= tau1 < tau2 and both are finite.
    WindowSpec(double tau1, double tau2);

    double tau1() const { return tau1_; }
    double tau2() const { return tau2_; }
    double length() const { return tau2_ - tau1_; }

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

private:
    double tau1_;
    double tau2_;
};

// KM-derived quantities at the window ends. f_diff is formed as
// S(tau1) - S(tau2), which equals F(tau2) - F(tau1).
struct WindowMasses {
    double surv_tau1 = 1.0;
    double surv_tau2 = 1.0;
    double rmst_tau1 = 0.0;
    double rmst_tau2 = 0.0;
    double f_diff = 0.0;
    double r_diff = 0.0;
};

// Checks tau2 against the support (WindowBeyondSupport) and the event mass
// in the window (ZeroEventMass, ZeroTimeMass).
WindowMasses window_masses(const StepFunction& survival, const WindowSpec& window);

struct VarianceWeights {
    double log_scale = 0.0;    // integrand weight of V(Q)
    double plain_scale = 0.0;  // integrand weight of V(U)
};

// Weights at time u given R(u) = integral of S over [0, u]. For u <= tau1
// the numerators reduce to -f_diff and r_diff and both weights are zero.
VarianceWeights variance_weights(const WindowMasses& masses, const WindowSpec& window,
                                 double u, double rmst_u);

struct AhEstimate {
    double eta_hat = 0.0;
    double var_log = 0.0;    // V(Q)/n, variance of log eta_hat
    double var_plain = 0.0;  // V(U)/n, variance of eta_hat
    std::size_t n = 0;
    WindowSpec window{0.0, 1.0};
    double f_diff = 0.0;
    double r_diff = 0.0;
};

AhEstimate lt_ah_point(const ArmSample& sample, const WindowSpec& window);

// Standard average hazard over [0, tau].
AhEstimate ah_point(const ArmSample& sample, double tau);

double var_log_scale(const ArmSample& sample, const WindowSpec& window);
double var_plain_scale(const ArmSample& sample, const WindowSpec& window);

// exp{log eta_hat -/+ z_{1-alpha/2} sqrt(var_log)}
std::pair<double, double> group_ci(const AhEstimate& est, double alpha);

// Area under the KM curve over the window, R(tau2) - R(tau1), with variance
// sum over events u <= tau2 of {int_u^tau2 S - I(u <= tau1) int_u^tau1 S}^2 d/Y^2.
struct RmstEstimate {
    double value = 0.0;
    double variance = 0.0;
    std::size_t n = 0;
    WindowSpec window{0.0, 1.0};
};

RmstEstimate window_rmst(const ArmSample& sample, const WindowSpec& window);

// Subjects with X > tau1, clock restarted at tau1. Error(TooFewAtRisk) when
// fewer than two subjects remain.
ArmSample landmark_subset(const ArmSample& sample, double tau1);

}  // namespace ltah
