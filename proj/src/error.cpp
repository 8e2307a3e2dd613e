#include "ltah/error.hpp"

namespace ltah {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::OutOfSupport: return "OutOfSupport";
        case ErrorKind::WindowBeyondSupport: return "WindowBeyondSupport";
        case ErrorKind::ZeroEventMass: return "ZeroEventMass";
        case ErrorKind::ZeroTimeMass: return "ZeroTimeMass";
        case ErrorKind::TooFewAtRisk: return "TooFewAtRisk";
        case ErrorKind::NoEvents: return "NoEvents";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    }
    return "Unknown";
}

}  // namespace ltah
