#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "ltah/error.hpp"
#include "ltah/report.hpp"

namespace ltah {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void row_error(std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::InvalidInput, fmt::format("line {}: {}", line, msg));
}

int parse_flag(std::string_view field, std::size_t line, const char* name) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    row_error(line, fmt::format("{} must be 0 or 1, got '{}'", name, field));
}

}  // namespace

std::vector<Subject> parse_dataset(std::string_view text) {
    std::vector<Subject> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != "time,status,arm") {
                row_error(line_no, fmt::format("expected header 'time,status,arm', got '{}'", line));
            }
            header_seen = true;
            continue;
        }

        std::string_view fields[3];
        std::size_t count = 0;
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            if (count == 3) row_error(line_no, "expected 3 fields");
            fields[count++] = trim(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (count != 3) row_error(line_no, "expected 3 fields");

        double time = 0.0;
        const auto& tf = fields[0];
        const auto [ptr, ec] = std::from_chars(tf.data(), tf.data() + tf.size(), time);
        if (ec != std::errc{} || ptr != tf.data() + tf.size() || !std::isfinite(time) || time < 0.0) {
            row_error(line_no, fmt::format("time must be a nonnegative number, got '{}'", tf));
        }
        const int status = parse_flag(fields[1], line_no, "status");
        const int arm = parse_flag(fields[2], line_no, "arm");
        out.push_back({time, status == 1, arm == 1 ? Arm::Treatment : Arm::Control});
    }
    if (!header_seen) row_error(line_no == 0 ? 1 : line_no, "missing header 'time,status,arm'");
    return out;
}

std::vector<Subject> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, fmt::format("cannot open '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

}  // namespace ltah
