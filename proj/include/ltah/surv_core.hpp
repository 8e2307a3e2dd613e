#pragma once

// Right-censored two-arm data and the nonparametric estimators built on it:
// Kaplan-Meier, Nelson-Aalen, the at-risk proportion G(t) = #{X >= t} / n,
// and exact restricted-mean integration of step functions.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ltah {

enum class Arm : int { Control = 0, Treatment = 1 };

struct Subject {
    double observed_time = 0.0;
    bool event = false;
    Arm arm = Arm::Control;
};

// Distinct-time summary of one arm. Ties follow the usual convention:
// events precede censorings at the same time, so a subject censored at an
// event time is counted in that event's risk set.
struct RiskTable {
    std::size_t n = 0;
    std::vector<double> event_times;  // distinct, increasing
    std::vector<int> events;          // d(u)
    std::vector<int> at_risk;         // Y(u) = #{X >= u}
    std::vector<double> times;        // all distinct observed times, increasing
    std::vector<int> at_risk_times;   // #{X >= t} for each entry of `times`
    double max_time = 0.0;
};

class ArmSample {
public:
    // Throws Error(InvalidInput) unless all subjects share one arm label,
    // times are finite and nonnegative, n >= 2 and at least one event occurs.
    explicit ArmSample(std::vector<Subject> subjects);

    static ArmSample from_columns(std::span<const double> times,
                                  std::span<const int> events, Arm arm);

    std::span<const Subject> subjects() const { return subjects_; }
    std::size_t size() const { return subjects_.size(); }
    Arm arm() const { return arm_; }
    double max_time() const { return table_.max_time; }
    const RiskTable& risk_table() const { return table_; }

    // Same data under the other arm label.
    ArmSample relabeled(Arm arm) const;

private:
    std::vector<Subject> subjects_;
    Arm arm_;
    RiskTable table_;
};

// Splits pooled data into (treatment, control). Throws if an arm is empty
// or fails ArmSample validation; the message names the arm.
std::pair<ArmSample, ArmSample> split_arms(std::span<const Subject> pooled);

RiskTable build_risk_table(std::span<const Subject> subjects);

enum class Continuity { Right, Left };

// Piecewise-constant function on [0, inf) with jumps at strictly increasing
// knots. Right-continuous functions take the value of the largest knot <= t;
// left-continuous ones the value of the largest knot < t. support_end marks
// the largest observed time of the data the function was estimated from.
class StepFunction {
public:
    StepFunction(std::vector<double> knots, std::vector<double> values,
                 double initial_value, double support_end,
                 Continuity continuity = Continuity::Right);

    double operator()(double t) const;

    // Exact integral over [0, t] by rectangle summation.
    double integral(double t) const;
    // Integral over [0, knots()[i]].
    double integral_at_knot(std::size_t i) const { return area_[i]; }

    // Jump sizes at each knot.
    std::vector<double> increments() const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }
    double initial_value() const { return initial_; }
    double support_end() const { return support_end_; }
    Continuity continuity() const { return continuity_; }

private:
    // Index of the last knot governing t, or -1 for the initial segment.
    std::ptrdiff_t segment(double t) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> area_;
    double initial_;
    double support_end_;
    Continuity continuity_;
};

StepFunction km_estimate(const ArmSample& sample);
StepFunction nelson_aalen(const ArmSample& sample);
StepFunction at_risk_proportion(const ArmSample& sample);

// 1 - S(t); Error(OutOfSupport) for t outside [0, support_end].
double cuminc_at(const StepFunction& survival, double t);
// Integral of S over [0, t]; Error(OutOfSupport) outside [0, support_end].
double rmst(const StepFunction& survival, double t);

}  // namespace ltah
