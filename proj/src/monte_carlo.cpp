#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <thread>

#include "ltah/error.hpp"
#include "ltah/inference.hpp"
#include "ltah/simulate.hpp"

namespace ltah {

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::LtAhDifference: return "lt_ah_difference";
        case Metric::LtAhRatio: return "lt_ah_ratio";
        case Metric::AhDifference: return "ah_difference";
        case Metric::AhRatio: return "ah_ratio";
        case Metric::RmstDifference: return "rmst_difference";
        case Metric::RmstRatio: return "rmst_ratio";
        case Metric::LtRmstDifference: return "lt_rmst_difference";
        case Metric::LtRmstRatio: return "lt_rmst_ratio";
        case Metric::Logrank: return "logrank";
    }
    return "?";
}

bool is_ratio(Metric m) {
    return m == Metric::LtAhRatio || m == Metric::AhRatio || m == Metric::RmstRatio ||
           m == Metric::LtRmstRatio;
}

void validate(const ScenarioConfig& c) {
    validate(c.event_dist[0]);
    validate(c.event_dist[1]);
    if (c.censor_dist) validate(*c.censor_dist);
    if (!(c.admin_time > 0.0) || !std::isfinite(c.admin_time)) {
        throw Error(ErrorKind::InvalidInput, "admin_time must be positive and finite");
    }
    if (c.admin_time < c.window.tau2()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("admin_time {} is before window tau2 {}", c.admin_time, c.window.tau2()));
    }
    if (c.n_per_arm < 2) throw Error(ErrorKind::InvalidInput, "n_per_arm must be at least 2");
    if (c.replicates < 1) throw Error(ErrorKind::InvalidInput, "replicates must be at least 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must be in (0, 1)");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

UniformStream::UniformStream(std::uint64_t seed, std::uint64_t replicate, StreamRole role) {
    const auto key = splitmix64(splitmix64(splitmix64(seed) + replicate) +
                                static_cast<std::uint64_t>(role));
    engine_.seed(key);
}

double UniformStream::operator()() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

TrialData simulate_trial(const ScenarioConfig& c, std::uint64_t replicate_index) {
    TrialData data;
    UniformStream e0(c.seed, replicate_index, StreamRole::Arm0Event);
    UniformStream e1(c.seed, replicate_index, StreamRole::Arm1Event);
    UniformStream c0(c.seed, replicate_index, StreamRole::Arm0Censor);
    UniformStream c1(c.seed, replicate_index, StreamRole::Arm1Censor);
    data.control = generate_arm(c.event_dist[0], c.censor_dist, c.admin_time, c.n_per_arm,
                                Arm::Control, e0, c0);
    data.treatment = generate_arm(c.event_dist[1], c.censor_dist, c.admin_time, c.n_per_arm,
                                  Arm::Treatment, e1, c1);
    return data;
}

namespace {

MetricOutcome outcome(const ContrastResult& r) {
    return {true, r.estimate.value_or(std::nan("")), r.ci_lower, r.ci_upper, r.p_two_sided};
}

// Runs one analysis; estimability failures leave the outcome undefined.
template <class Fn>
void record(ReplicateResult& out, Metric m, Fn&& fn) {
    try {
        out[m] = outcome(fn());
    } catch (const Error&) {
        out[m] = MetricOutcome{};
    }
}

}  // namespace

ReplicateResult analyze_trial(const TrialData& data, const WindowSpec& window, double alpha) {
    ReplicateResult out;
    std::optional<ArmSample> trt;
    std::optional<ArmSample> ctl;
    try {
        trt.emplace(data.treatment);
        ctl.emplace(data.control);
    } catch (const Error&) {
        return out;
    }
    const WindowSpec full(0.0, window.tau2());

    auto contrast_pair = [&](const WindowSpec& w, Metric diff, Metric ratio, Measure measure) {
        try {
            const auto t = lt_ah_point(*trt, w);
            const auto c = lt_ah_point(*ctl, w);
            record(out, diff, [&] { return ah_difference(t, c, alpha, measure); });
            record(out, ratio, [&] { return ah_ratio(t, c, alpha, measure); });
        } catch (const Error&) {
        }
    };
    contrast_pair(window, Metric::LtAhDifference, Metric::LtAhRatio, Measure::LT_AH);
    contrast_pair(full, Metric::AhDifference, Metric::AhRatio, Measure::AH);

    auto rmst_pair = [&](const WindowSpec& w, Metric diff, Metric ratio, Measure measure) {
        try {
            const auto t = window_rmst(*trt, w);
            const auto c = window_rmst(*ctl, w);
            record(out, diff, [&] { return rmst_difference(t, c, alpha, measure); });
            record(out, ratio, [&] { return rmst_ratio(t, c, alpha, measure); });
        } catch (const Error&) {
        }
    };
    rmst_pair(window, Metric::LtRmstDifference, Metric::LtRmstRatio, Measure::LT_RMST);
    rmst_pair(full, Metric::RmstDifference, Metric::RmstRatio, Measure::RMST);

    record(out, Metric::Logrank, [&] { return logrank_test(*trt, *ctl); });
    return out;
}

ReplicateResult run_replicate(const ScenarioConfig& config, std::uint64_t replicate_index) {
    return analyze_trial(simulate_trial(config, replicate_index), config.window, config.alpha);
}

std::array<std::optional<double>, kMetricCount> true_values(const ScenarioConfig& c) {
    const auto& d0 = c.event_dist[0];
    const auto& d1 = c.event_dist[1];
    const WindowSpec full(0.0, c.window.tau2());
    const double lt0 = true_lt_ah(d0, c.window), lt1 = true_lt_ah(d1, c.window);
    const double ah0 = true_lt_ah(d0, full), ah1 = true_lt_ah(d1, full);
    const double r0 = true_window_rmst(d0, 0.0, c.window.tau2());
    const double r1 = true_window_rmst(d1, 0.0, c.window.tau2());
    const double lr0 = true_window_rmst(d0, c.window.tau1(), c.window.tau2());
    const double lr1 = true_window_rmst(d1, c.window.tau1(), c.window.tau2());

    std::array<std::optional<double>, kMetricCount> t{};
    auto set = [&](Metric m, double v) { t[static_cast<std::size_t>(m)] = v; };
    set(Metric::LtAhDifference, lt1 - lt0);
    set(Metric::LtAhRatio, lt1 / lt0);
    set(Metric::AhDifference, ah1 - ah0);
    set(Metric::AhRatio, ah1 / ah0);
    set(Metric::RmstDifference, r1 - r0);
    set(Metric::RmstRatio, r1 / r0);
    set(Metric::LtRmstDifference, lr1 - lr0);
    set(Metric::LtRmstRatio, lr1 / lr0);
    return t;
}

std::vector<ReplicateResult> run_replicates(const ScenarioConfig& config, unsigned threads) {
    validate(config);
    const auto total = static_cast<std::size_t>(config.replicates);
    std::vector<ReplicateResult> results(total);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

    constexpr std::size_t kChunk = 32;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= total) return;
            const std::size_t end = std::min(total, begin + kChunk);
            for (std::size_t i = begin; i < end; ++i) results[i] = run_replicate(config, i);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    return results;
}

McSummary summarize(const ScenarioConfig& config, const std::vector<ReplicateResult>& results) {
    McSummary summary;
    summary.config = config;
    const auto truth = true_values(config);
    const double total = static_cast<double>(results.size());

    for (Metric m : kAllMetrics) {
        const auto idx = static_cast<std::size_t>(m);
        MetricSummary& s = summary.metrics[idx];
        s.metric = m;
        s.true_value = truth[idx];

        double sum_est = 0.0, sum_len = 0.0;
        int covered = 0, rejected = 0, defined = 0;
        for (const auto& r : results) {
            const auto& o = r[m];
            if (!o.defined) continue;
            ++defined;
            if (o.p_two_sided < config.alpha) ++rejected;
            if (s.true_value) {
                sum_est += o.estimate;
                sum_len += o.ci_upper - o.ci_lower;
                if (o.ci_lower <= *s.true_value && *s.true_value <= o.ci_upper) ++covered;
            }
        }
        s.defined_count = defined;
        s.undefined_count = static_cast<int>(results.size()) - defined;
        s.rejection_rate = total > 0 ? rejected / total : 0.0;
        s.rejection_se = total > 0 ? std::sqrt(s.rejection_rate * (1.0 - s.rejection_rate) / total) : 0.0;
        if (s.true_value && defined > 0) {
            s.mean_estimate = sum_est / defined;
            s.mean_bias = s.mean_estimate - *s.true_value;
            s.coverage = static_cast<double>(covered) / defined;
            s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / defined);
            s.mean_ci_length = sum_len / defined;
        } else {
            const double nan = std::nan("");
            s.mean_estimate = s.mean_bias = s.coverage = s.coverage_se = s.mean_ci_length = nan;
        }
    }
    return summary;
}

McSummary monte_carlo(const ScenarioConfig& config, unsigned threads) {
    return summarize(config, run_replicates(config, threads));
}

}  // namespace ltah
