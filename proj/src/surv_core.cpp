#include "ltah/surv_core.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ltah/error.hpp"

namespace ltah {

namespace {

const char* arm_name(Arm arm) {
    return arm == Arm::Treatment ? "arm 1 (treatment)" : "arm 0 (control)";
}

}  // namespace

RiskTable build_risk_table(std::span<const Subject> subjects) {
    RiskTable table;
    table.n = subjects.size();
    if (subjects.empty()) return table;

    std::vector<std::pair<double, bool>> sorted;
    sorted.reserve(subjects.size());
    for (const auto& s : subjects) sorted.emplace_back(s.observed_time, s.event);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.first < b.first;
    });

    int remaining = static_cast<int>(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double t = sorted[i].first;
        int d = 0;
        int total = 0;
        while (i < sorted.size() && sorted[i].first == t) {
            d += sorted[i].second ? 1 : 0;
            ++total;
            ++i;
        }
        table.times.push_back(t);
        table.at_risk_times.push_back(remaining);
        if (d > 0) {
            table.event_times.push_back(t);
            table.events.push_back(d);
            table.at_risk.push_back(remaining);
        }
        remaining -= total;
    }
    table.max_time = sorted.back().first;
    return table;
}

ArmSample::ArmSample(std::vector<Subject> subjects) : subjects_(std::move(subjects)) {
    if (subjects_.empty()) {
        throw Error(ErrorKind::InvalidInput, "empty sample");
    }
    arm_ = subjects_.front().arm;
    bool any_event = false;
    for (const auto& s : subjects_) {
        if (s.arm != arm_) {
            throw Error(ErrorKind::InvalidInput, "sample mixes arm labels");
        }
        if (!std::isfinite(s.observed_time) || s.observed_time < 0.0) {
            throw Error(ErrorKind::InvalidInput,
                        fmt::format("{}: observed time {} is not a finite nonnegative number",
                                    arm_name(arm_), s.observed_time));
        }
        any_event = any_event || s.event;
    }
    if (subjects_.size() < 2) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("{} has {} subject(s); at least 2 are required",
                                arm_name(arm_), subjects_.size()));
    }
    if (!any_event) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("{} has no observed events", arm_name(arm_)));
    }
    table_ = build_risk_table(subjects_);
}

ArmSample ArmSample::from_columns(std::span<const double> times,
                                  std::span<const int> events, Arm arm) {
    if (times.size() != events.size()) {
        throw Error(ErrorKind::InvalidInput, "time and event columns differ in length");
    }
    std::vector<Subject> subjects;
    subjects.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (events[i] != 0 && events[i] != 1) {
            throw Error(ErrorKind::InvalidInput, "event flag must be 0 or 1");
        }
        subjects.push_back({times[i], events[i] == 1, arm});
    }
    return ArmSample(std::move(subjects));
}

ArmSample ArmSample::relabeled(Arm arm) const {
    auto copy = subjects_;
    for (auto& s : copy) s.arm = arm;
    return ArmSample(std::move(copy));
}

std::pair<ArmSample, ArmSample> split_arms(std::span<const Subject> pooled) {
    std::vector<Subject> treatment;
    std::vector<Subject> control;
    for (const auto& s : pooled) {
        (s.arm == Arm::Treatment ? treatment : control).push_back(s);
    }
    if (treatment.empty()) throw Error(ErrorKind::InvalidInput, "arm 1 (treatment) is empty");
    if (control.empty()) throw Error(ErrorKind::InvalidInput, "arm 0 (control) is empty");
    return {ArmSample(std::move(treatment)), ArmSample(std::move(control))};
}

StepFunction::StepFunction(std::vector<double> knots, std::vector<double> values,
                           double initial_value, double support_end,
                           Continuity continuity)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      initial_(initial_value),
      support_end_(support_end),
      continuity_(continuity) {
    if (knots_.size() != values_.size()) {
        throw Error(ErrorKind::InvalidInput, "step function knots and values differ in length");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!(knots_[i] >= 0.0) || (i > 0 && !(knots_[i] > knots_[i - 1]))) {
            throw Error(ErrorKind::InvalidInput,
                        "step function knots must be nonnegative and strictly increasing");
        }
    }
    area_.resize(knots_.size());
    double acc = 0.0;
    double prev_t = 0.0;
    double prev_v = initial_;
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        acc += prev_v * (knots_[i] - prev_t);
        area_[i] = acc;
        prev_t = knots_[i];
        prev_v = values_[i];
    }
}

std::ptrdiff_t StepFunction::segment(double t) const {
    auto it = continuity_ == Continuity::Right
                  ? std::upper_bound(knots_.begin(), knots_.end(), t)
                  : std::lower_bound(knots_.begin(), knots_.end(), t);
    return (it - knots_.begin()) - 1;
}

double StepFunction::operator()(double t) const {
    const auto j = segment(t);
    return j < 0 ? initial_ : values_[static_cast<std::size_t>(j)];
}

double StepFunction::integral(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto j = (it - knots_.begin()) - 1;
    if (j < 0) return initial_ * t;
    const auto k = static_cast<std::size_t>(j);
    return area_[k] + values_[k] * (t - knots_[k]);
}

std::vector<double> StepFunction::increments() const {
    std::vector<double> out(values_.size());
    double prev = initial_;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out[i] = values_[i] - prev;
        prev = values_[i];
    }
    return out;
}

StepFunction km_estimate(const ArmSample& sample) {
    const auto& rt = sample.risk_table();
    std::vector<double> values(rt.event_times.size());
    double s = 1.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        s *= static_cast<double>(rt.at_risk[j] - rt.events[j]) / rt.at_risk[j];
        values[j] = s;
    }
    return StepFunction(rt.event_times, std::move(values), 1.0, rt.max_time);
}

StepFunction nelson_aalen(const ArmSample& sample) {
    const auto& rt = sample.risk_table();
    std::vector<double> values(rt.event_times.size());
    double h = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        h += static_cast<double>(rt.events[j]) / rt.at_risk[j];
        values[j] = h;
    }
    return StepFunction(rt.event_times, std::move(values), 0.0, rt.max_time);
}

StepFunction at_risk_proportion(const ArmSample& sample) {
    const auto& rt = sample.risk_table();
    const double n = static_cast<double>(rt.n);
    std::vector<double> values(rt.times.size());
    // Value just past each observed time: #{X > t} / n.
    for (std::size_t j = 0; j < values.size(); ++j) {
        const int next = j + 1 < values.size() ? rt.at_risk_times[j + 1] : 0;
        values[j] = next / n;
    }
    return StepFunction(rt.times, std::move(values), 1.0, rt.max_time, Continuity::Left);
}

namespace {

void check_support(const StepFunction& f, double t) {
    if (!(t >= 0.0) || t > f.support_end()) {
        throw Error(ErrorKind::OutOfSupport,
                    fmt::format("time {} is outside the observed support [0, {}]", t,
                                f.support_end()));
    }
}

}  // namespace

double cuminc_at(const StepFunction& survival, double t) {
    check_support(survival, t);
    return 1.0 - survival(t);
}

double rmst(const StepFunction& survival, double t) {
    check_support(survival, t);
    return survival.integral(t);
}

}  // namespace ltah
