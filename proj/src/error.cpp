#include "nsk/error.hpp"

namespace nsk {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::NotTwoShock: return "not a 2-shock";
        case ErrorKind::VacuumExceeded: return "vacuum exceeded";
        case ErrorKind::InconsistentParams: return "inconsistent parameters";
        case ErrorKind::Monotonicity: return "monotonicity failure";
        case ErrorKind::Overshoot: return "overshoot";
        case ErrorKind::Positivity: return "positivity failure";
        case ErrorKind::Fit: return "fit error";
        case ErrorKind::Truncation: return "truncation error";
        case ErrorKind::DegenerateShock: return "degenerate shock";
        case ErrorKind::StepFailure: return "step failure";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Audit: return "audit violation";
    }
    return "error";
}

}  // namespace nsk
