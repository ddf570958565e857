#include "polling/error.hpp"

namespace polling {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameters: return "InvalidParameters";
        case ErrorKind::Unstable: return "Unstable";
        case ErrorKind::MalformedScenario: return "MalformedScenario";
        case ErrorKind::RegularityViolation: return "RegularityViolation";
        case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace polling
