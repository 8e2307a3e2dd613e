// ltah: long-term average hazard analysis and simulation tool.
//
//   ltah analyze   --data <csv> --tau1 <t> --tau2 <t> [--alpha 0.05] [--format table|csv]
//   ltah simulate  --config <yaml> --out <dir> [--threads N]
//   ltah km-export --data <csv> --out <path>
//
// Exit codes: 0 success, 2 input error, 3 estimability error.

#include <CLI11.hpp>
#include <chrono>
#include <fmt/format.h>
#include <iostream>
#include <optional>

#include "ltah/error.hpp"
#include "ltah/report.hpp"
#include "ltah/scenario_io.hpp"
#include "ltah/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEstimability = 3;

int fail(int code, const std::string& msg) {
    std::cerr << "ltah: " << msg << '\n';
    return code;
}

int exit_code_for(const ltah::Error& e) {
    return ltah::is_estimability(e.kind()) ? kExitEstimability : kExitInput;
}

struct AnalyzeArgs {
    std::string data;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double alpha = 0.05;
    std::string format = "table";
};

int run_analyze(const AnalyzeArgs& a) {
    std::optional<std::pair<ltah::ArmSample, ltah::ArmSample>> arms;
    try {
        arms.emplace(ltah::split_arms(ltah::load_dataset(a.data)));
    } catch (const ltah::Error& e) {
        return fail(kExitInput, fmt::format("{}: {}", a.data, e.what()));
    }
    if (!(a.alpha > 0.0 && a.alpha < 1.0)) return fail(kExitInput, "--alpha must be in (0, 1)");

    std::optional<ltah::WindowSpec> window;
    try {
        window.emplace(a.tau1, a.tau2);
    } catch (const ltah::Error& e) {
        return fail(kExitEstimability, e.what());
    }
    try {
        const auto rows = ltah::analyze_arms(arms->first, arms->second, *window, a.alpha);
        std::cout << (a.format == "csv" ? ltah::render_analysis_csv(rows)
                                        : ltah::render_analysis_table(rows, a.alpha));
    } catch (const ltah::Error& e) {
        return fail(exit_code_for(e), e.what());
    }
    return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& out_dir, unsigned threads) {
    std::vector<ltah::ScenarioConfig> scenarios;
    try {
        scenarios = ltah::load_scenarios(config_path);
    } catch (const ltah::Error& e) {
        return fail(kExitInput, e.what());
    }
    for (const auto& config : scenarios) {
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto summary = ltah::monte_carlo(config, threads);
            ltah::write_summary_files(summary, out_dir);
        } catch (const ltah::Error& e) {
            return fail(exit_code_for(e), fmt::format("scenario '{}': {}", config.name, e.what()));
        } catch (const std::filesystem::filesystem_error& e) {
            return fail(kExitInput, e.what());
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cerr << fmt::format("ltah: scenario '{}' done in {:.1f} s\n", config.name, elapsed.count());
    }
    return kExitOk;
}

int run_km_export(const std::string& data, const std::string& out) {
    try {
        const auto [trt, ctl] = ltah::split_arms(ltah::load_dataset(data));
        ltah::write_file_atomic(out, ltah::render_km_export(trt, ctl));
    } catch (const ltah::Error& e) {
        return fail(kExitInput, fmt::format("{}: {}", data, e.what()));
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(kExitInput, e.what());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-term average hazard analysis and simulation"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Two-arm LT-AH / AH / LT-RMST / RMST report");
    cmd_analyze->add_option("--data", analyze.data, "CSV with header time,status,arm")->required();
    cmd_analyze->add_option("--tau1", analyze.tau1, "Window start")->required();
    cmd_analyze->add_option("--tau2", analyze.tau2, "Window end")->required();
    cmd_analyze->add_option("--alpha", analyze.alpha, "Two-sided level")->capture_default_str();
    cmd_analyze->add_option("--format", analyze.format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}))
        ->capture_default_str();

    std::string config_path, out_dir;
    unsigned threads = 0;
    auto* cmd_sim = app.add_subcommand("simulate", "Run Monte-Carlo scenarios from a YAML file");
    cmd_sim->add_option("--config", config_path, "Scenario file")->required();
    cmd_sim->add_option("--out", out_dir, "Output directory")->required();
    cmd_sim->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

    std::string km_data, km_out;
    auto* cmd_km = app.add_subcommand("km-export", "Export KM step functions and at-risk counts");
    cmd_km->add_option("--data", km_data, "CSV with header time,status,arm")->required();
    cmd_km->add_option("--out", km_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (*cmd_analyze) return run_analyze(analyze);
    if (*cmd_sim) return run_simulate(config_path, out_dir, threads);
    if (*cmd_km) return run_km_export(km_data, km_out);
    return kExitInput;
}
