#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsk {

enum class ErrorKind {
    Domain,
    NotTwoShock,
    VacuumExceeded,
    InconsistentParams,
    Monotonicity,
    Overshoot,
    Positivity,
    Fit,
    Truncation,
    DegenerateShock,
    StepFailure,
    Config,
    Audit,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nsk
