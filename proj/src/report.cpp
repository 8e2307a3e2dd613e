#include "ltah/report.hpp"

#include <cmath>
#include <fmt/format.h>

#include "ltah/measures.hpp"

namespace ltah {

std::vector<AnalysisRow> analyze_arms(const ArmSample& treatment, const ArmSample& control,
                                      const WindowSpec& window, double alpha) {
    const WindowSpec full(0.0, window.tau2());
    std::vector<AnalysisRow> rows;

    const auto ah_row = [&](Measure measure, const WindowSpec& w) {
        const auto t = lt_ah_point(treatment, w);
        const auto c = lt_ah_point(control, w);
        rows.push_back({measure, w, ah_difference(t, c, alpha, measure), ah_ratio(t, c, alpha, measure)});
    };
    const auto rmst_row = [&](Measure measure, const WindowSpec& w) {
        const auto t = window_rmst(treatment, w);
        const auto c = window_rmst(control, w);
        rows.push_back({measure, w, rmst_difference(t, c, alpha, measure), rmst_ratio(t, c, alpha, measure)});
    };
    ah_row(Measure::LT_AH, window);
    ah_row(Measure::AH, full);
    rmst_row(Measure::LT_RMST, window);
    rmst_row(Measure::RMST, full);
    return rows;
}

namespace {

int digits_for(Measure m) { return m == Measure::RMST || m == Measure::LT_RMST ? 1 : 3; }

std::string f(double v, int digits) { return fmt::format("{:.{}f}", v, digits); }

std::string with_ci(const ArmSummary& a, int d) {
    return fmt::format("{} ({} to {})", f(a.estimate, d), f(a.ci_lower, d), f(a.ci_upper, d));
}

std::string with_ci_p(const ContrastResult& r, int d) {
    return fmt::format("{} ({} to {}; {})", f(*r.estimate, d), f(r.ci_lower, d), f(r.ci_upper, d),
                       f(r.p_two_sided, 3));
}

std::string window_label(const WindowSpec& w) { return fmt::format("[{:g}, {:g}]", w.tau1(), w.tau2()); }

}  // namespace

std::string render_analysis_table(const std::vector<AnalysisRow>& rows, double alpha) {
    const auto level = fmt::format("{:g}", 1.0 - alpha);
    std::string out = fmt::format(
        "Measure | [tau1, tau2] | Treatment ({0} CI) | Control ({0} CI) | Difference ({0} CI; p-value) | "
        "Ratio ({0} CI; p-value)\n",
        level);
    for (const auto& r : rows) {
        const int d = digits_for(r.measure);
        out += fmt::format("{} | {} | {} | {} | {} | {}\n", to_string(r.measure), window_label(r.window),
                           with_ci(r.treatment(), d), with_ci(r.control(), d),
                           with_ci_p(r.difference, d), with_ci_p(r.ratio, d));
    }
    return out;
}

std::string render_analysis_csv(const std::vector<AnalysisRow>& rows) {
    std::string out =
        "measure,tau1,tau2,treatment,treatment_lower,treatment_upper,control,control_lower,"
        "control_upper,difference,difference_lower,difference_upper,difference_z,difference_p,"
        "ratio,ratio_lower,ratio_upper,ratio_z,ratio_p\n";
    for (const auto& r : rows) {
        const auto& t = r.treatment();
        const auto& c = r.control();
        out += fmt::format(
            "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
            "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
            to_string(r.measure), r.window.tau1(), r.window.tau2(), t.estimate, t.ci_lower, t.ci_upper,
            c.estimate, c.ci_lower, c.ci_upper, *r.difference.estimate, r.difference.ci_lower,
            r.difference.ci_upper, r.difference.z, r.difference.p_two_sided, *r.ratio.estimate,
            r.ratio.ci_lower, r.ratio.ci_upper, r.ratio.z, r.ratio.p_two_sided);
    }
    return out;
}

std::string render_km_export(const ArmSample& treatment, const ArmSample& control) {
    std::string out = "arm,kind,time,value\n";
    for (const ArmSample* arm : {&treatment, &control}) {
        const int label = static_cast<int>(arm->arm());
        const auto km = km_estimate(*arm);
        for (std::size_t i = 0; i < km.knots().size(); ++i) {
            out += fmt::format("{},survival,{:.17g},{:.17g}\n", label, km.knots()[i], km.values()[i]);
        }
        out += fmt::format("{},max_time,{:.17g},NA\n", label, arm->max_time());
        const auto& rt = arm->risk_table();
        std::size_t k = 0;
        for (int t = 0; t <= static_cast<int>(std::floor(arm->max_time())); ++t) {
            while (k < rt.times.size() && rt.times[k] < t) ++k;
            const int at_risk = k < rt.times.size() ? rt.at_risk_times[k] : 0;
            out += fmt::format("{},at_risk,{},{}\n", label, t, at_risk);
        }
    }
    return out;
}

}  // namespace ltah
