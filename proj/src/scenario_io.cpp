#include "ltah/scenario_io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "ltah/error.hpp"

namespace ltah {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw Error(ErrorKind::InvalidInput, "scenario config: " + msg);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        config_error(fmt::format("'{}' has an invalid value", key));
    }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) config_error(fmt::format("unknown key '{}' in {}", key, where));
    }
}

DistributionSpec parse_dist(const YAML::Node& node, const std::string& where) {
    if (!node.IsMap() || !node["kind"]) config_error(fmt::format("{} needs a 'kind'", where));
    const auto kind = scalar<std::string>(node["kind"], where + ".kind");
    DistributionSpec dist;
    if (kind == "weibull") {
        check_keys(node, {"kind", "shape", "scale"}, where);
        if (!node["shape"] || !node["scale"]) config_error(where + " needs shape and scale");
        dist = Weibull{scalar<double>(node["shape"], where + ".shape"),
                       scalar<double>(node["scale"], where + ".scale")};
    } else if (kind == "piecewise_exponential") {
        check_keys(node, {"kind", "breakpoints", "rates"}, where);
        if (!node["rates"]) config_error(where + " needs rates");
        PiecewiseExponential pe;
        if (node["breakpoints"]) pe.breakpoints = scalar<std::vector<double>>(node["breakpoints"], where);
        pe.rates = scalar<std::vector<double>>(node["rates"], where);
        dist = pe;
    } else if (kind == "degenerate") {
        check_keys(node, {"kind"}, where);
        dist = Degenerate{};
    } else {
        config_error(fmt::format("{} has unknown kind '{}'", where, kind));
    }
    validate(dist);
    return dist;
}

ScenarioConfig parse_one(const YAML::Node& node) {
    check_keys(node, {"name", "event_dist", "censor_dist", "admin_time", "n_per_arm", "replicates",
                      "window", "alpha", "seed"},
               "scenario");
    ScenarioConfig c;
    if (node["name"]) c.name = scalar<std::string>(node["name"], "name");
    for (char ch : c.name) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' && ch != '.') {
            config_error(fmt::format("scenario name '{}' may only use letters, digits, '-', '_', '.'", c.name));
        }
    }
    if (c.name.empty()) config_error("scenario name is empty");

    const auto ev = node["event_dist"];
    if (!ev) config_error(fmt::format("scenario '{}' needs event_dist", c.name));
    if (ev.IsScalar()) {
        c.event_dist = event_preset(scalar<std::string>(ev, "event_dist"));
    } else {
        check_keys(ev, {"arm0", "arm1"}, "event_dist");
        if (!ev["arm0"] || !ev["arm1"]) config_error("event_dist needs arm0 and arm1");
        c.event_dist = {parse_dist(ev["arm0"], "event_dist.arm0"), parse_dist(ev["arm1"], "event_dist.arm1")};
    }

    if (const auto cd = node["censor_dist"]; cd && !cd.IsNull()) {
        c.censor_dist = cd.IsScalar() ? censoring_preset(scalar<std::string>(cd, "censor_dist"))
                                      : std::optional<DistributionSpec>(parse_dist(cd, "censor_dist"));
    }
    if (node["admin_time"]) c.admin_time = scalar<double>(node["admin_time"], "admin_time");
    if (node["n_per_arm"]) c.n_per_arm = scalar<int>(node["n_per_arm"], "n_per_arm");
    if (node["replicates"]) c.replicates = scalar<int>(node["replicates"], "replicates");
    if (node["alpha"]) c.alpha = scalar<double>(node["alpha"], "alpha");
    if (node["seed"]) c.seed = scalar<std::uint64_t>(node["seed"], "seed");
    if (const auto w = node["window"]) {
        check_keys(w, {"tau1", "tau2"}, "window");
        if (!w["tau1"] || !w["tau2"]) config_error("window needs tau1 and tau2");
        c.window = WindowSpec(scalar<double>(w["tau1"], "window.tau1"), scalar<double>(w["tau2"], "window.tau2"));
    }
    validate(c);
    return c;
}

}  // namespace

std::vector<ScenarioConfig> parse_scenarios(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        config_error(e.what());
    }
    if (!root.IsMap()) config_error("top level must be a mapping");

    std::vector<ScenarioConfig> out;
    if (!root["scenarios"]) {
        out.push_back(parse_one(root));
        return out;
    }
    check_keys(root, {"defaults", "scenarios"}, "top level");
    const auto defaults = root["defaults"];
    if (defaults && !defaults.IsMap()) config_error("defaults must be a mapping");
    const auto list = root["scenarios"];
    if (!list.IsSequence() || list.size() == 0) config_error("scenarios must be a non-empty list");

    std::set<std::string> names;
    for (const auto& item : list) {
        if (!item.IsMap()) config_error("each scenario must be a mapping");
        YAML::Node merged(YAML::NodeType::Map);
        if (defaults) {
            for (const auto& kv : defaults) merged[kv.first.as<std::string>()] = kv.second;
        }
        for (const auto& kv : item) merged[kv.first.as<std::string>()] = kv.second;
        auto config = parse_one(merged);
        if (!names.insert(config.name).second) config_error(fmt::format("duplicate scenario name '{}'", config.name));
        out.push_back(std::move(config));
    }
    return out;
}

std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error(fmt::format("cannot open '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenarios(buf.str());
}

namespace {

std::string num(double v) { return std::isnan(v) ? "NA" : fmt::format("{:.17g}", v); }

std::string fixed(double v, int digits) {
    return std::isnan(v) ? "NA" : fmt::format("{:.{}f}", v, digits);
}

std::string_view label(Metric m) {
    switch (m) {
        case Metric::LtAhDifference: return "LT-AH difference";
        case Metric::LtAhRatio: return "LT-AH ratio";
        case Metric::AhDifference: return "AH difference";
        case Metric::AhRatio: return "AH ratio";
        case Metric::RmstDifference: return "RMST difference";
        case Metric::RmstRatio: return "RMST ratio";
        case Metric::LtRmstDifference: return "LT-RMST difference";
        case Metric::LtRmstRatio: return "LT-RMST ratio";
        case Metric::Logrank: return "Log-rank (Cox score)";
    }
    return "?";
}

}  // namespace

std::string render_summary_csv(const McSummary& s) {
    std::string out =
        "scenario,metric,true_value,mean_estimate,bias,coverage,coverage_se,mean_ci_length,"
        "rejection_rate,rejection_se,defined,undefined\n";
    for (const auto& m : s.metrics) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", s.config.name, to_string(m.metric),
                           num(m.true_value.value_or(std::nan(""))), num(m.mean_estimate),
                           num(m.mean_bias), num(m.coverage), num(m.coverage_se),
                           num(m.mean_ci_length), num(m.rejection_rate), num(m.rejection_se),
                           m.defined_count, m.undefined_count);
    }
    return out;
}

std::string render_summary_table(const McSummary& s) {
    const auto& c = s.config;
    std::string out = fmt::format(
        "Scenario {}: n = {} per arm, {} replicates, window [{:g}, {:g}], admin time {:g}, "
        "alpha {:g}, seed {}\n\n",
        c.name, c.n_per_arm, c.replicates, c.window.tau1(), c.window.tau2(), c.admin_time, c.alpha,
        c.seed);
    out += fmt::format("{:<22}{:>9}{:>9}{:>9}{:>9}{:>11}\n", "Estimation", "True", "Bias", "CP",
                       "AL", "Undefined");
    for (const auto& m : s.metrics) {
        if (!m.true_value) continue;
        out += fmt::format("{:<22}{:>9}{:>9}{:>9}{:>9}{:>11}\n", label(m.metric),
                           fixed(*m.true_value, 3), fixed(m.mean_bias, 3), fixed(m.coverage, 3),
                           fixed(m.mean_ci_length, 3), m.undefined_count);
    }
    out += fmt::format("\n{:<22}{:>9}{:>9}{:>11}\n", "Size/power (p < alpha)", "Rate", "MC SE",
                       "Undefined");
    for (const auto& m : s.metrics) {
        out += fmt::format("{:<22}{:>9}{:>9}{:>11}\n", label(m.metric), fixed(m.rejection_rate, 3),
                           fixed(m.rejection_se, 3), m.undefined_count);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::InvalidInput, fmt::format("cannot write '{}'", tmp.string()));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorKind::InvalidInput, fmt::format("write failed for '{}'", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

void write_summary_files(const McSummary& summary, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto csv = render_summary_csv(summary);
    const auto table = render_summary_table(summary);
    write_file_atomic(out_dir / (summary.config.name + ".csv"), csv);
    write_file_atomic(out_dir / (summary.config.name + ".txt"), table);
}

}  // namespace ltah
