#pragma once

// Scenario files (YAML) and Monte-Carlo summary emission.
//
// A scenario file holds either a single scenario mapping or
//
//   defaults: { <fields shared by all scenarios> }
//   scenarios:
//     - name: ph-light
//       event_dist: ph            # preset, or {arm0: <dist>, arm1: <dist>}
//       censor_dist: light        # preset, a <dist>, or omitted for none
//       admin_time: 10
//       n_per_arm: 100
//       replicates: 5000
//       window: {tau1: 2, tau2: 10}
//       alpha: 0.05
//       seed: 20240501
//
// <dist> is {kind: weibull, shape, scale}, {kind: piecewise_exponential,
// breakpoints: [..], rates: [..]} or {kind: degenerate}. Event presets:
// no-diff, ph, delayed-1, delayed-2, delayed-3. Censoring presets: none,
// light, moderate.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ltah/simulate.hpp"

namespace ltah {

// Error(InvalidInput) on malformed YAML, unknown keys or invalid values.
std::vector<ScenarioConfig> parse_scenarios(std::string_view yaml_text);
std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path);

// One row per metric, full precision, "NA" where a value does not exist.
std::string render_summary_csv(const McSummary& summary);
// Fixed-width report: estimation block (True/Bias/CP/AL) and size/power block.
std::string render_summary_table(const McSummary& summary);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// <out_dir>/<name>.csv and <out_dir>/<name>.txt
void write_summary_files(const McSummary& summary, const std::filesystem::path& out_dir);

}  // namespace ltah
