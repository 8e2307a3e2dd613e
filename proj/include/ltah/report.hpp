#pragma once

// Dataset ingestion and the one-shot analysis / KM export reports used by
// the command-line tool.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ltah/inference.hpp"
#include "ltah/surv_core.hpp"

namespace ltah {

// CSV with header exactly "time,status,arm"; status 1 = event, 0 = censored;
// arm 1 = treatment, 0 = control. Error(InvalidInput) carrying the 1-based
// line number on the first bad row.
std::vector<Subject> parse_dataset(std::string_view csv_text);
std::vector<Subject> load_dataset(const std::filesystem::path& path);

struct AnalysisRow {
    Measure measure;
    WindowSpec window;
    ContrastResult difference;
    ContrastResult ratio;

    const ArmSummary& treatment() const { return (*difference.per_arm)[0]; }
    const ArmSummary& control() const { return (*difference.per_arm)[1]; }
};

// LT-AH [tau1, tau2], AH [0, tau2], LT-RMST [tau1, tau2], RMST [0, tau2].
std::vector<AnalysisRow> analyze_arms(const ArmSample& treatment, const ArmSample& control,
                                      const WindowSpec& window, double alpha);

// "Measure | [tau1, tau2] | Treatment (CI) | Control (CI) | Difference (CI; p) | Ratio (CI; p)"
// with 3 decimals for hazard rows and 1 decimal for RMST rows; p to 3 decimals.
std::string render_analysis_table(const std::vector<AnalysisRow>& rows, double alpha);
// Comma-separated, full precision, one measure per row.
std::string render_analysis_csv(const std::vector<AnalysisRow>& rows);

// Rows "arm,kind,time,value": KM knots (kind "survival"), the largest observed
// time ("max_time") and at-risk counts #{X >= t} at t = 0, 1, 2, ... ("at_risk").
std::string render_km_export(const ArmSample& treatment, const ArmSample& control);

}  // namespace ltah
