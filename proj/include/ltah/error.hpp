#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ltah {

enum class ErrorKind {
    InvalidInput,        // malformed data or arguments
    OutOfSupport,        // evaluation past the largest observed time
    WindowBeyondSupport, // tau2 past the largest observed time
    ZeroEventMass,       // F(tau2) == F(tau1)
    ZeroTimeMass,        // R(tau2) == R(tau1)
    TooFewAtRisk,        // landmark subset smaller than 2
    NoEvents,            // pooled log-rank data without events
    DegenerateVariance,  // zero standard error for a test statistic
    CalibrationFailed,
};

std::string_view to_string(ErrorKind kind);

// Errors that arise from the data not supporting the requested window,
// as opposed to malformed input. The CLI maps these to exit code 3.
constexpr bool is_estimability(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfSupport:
        case ErrorKind::WindowBeyondSupport:
        case ErrorKind::ZeroEventMass:
        case ErrorKind::ZeroTimeMass:
        case ErrorKind::TooFewAtRisk:
        case ErrorKind::NoEvents:
        case ErrorKind::DegenerateVariance:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ltah
