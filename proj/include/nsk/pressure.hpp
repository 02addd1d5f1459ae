#pragma once

#include <cmath>

namespace nsk {

/// Gamma-law pressure p(v) = p0 * v^(-gamma). Positive, decreasing and
/// strictly convex on v > 0 whenever p0 > 0 and gamma >= 1.
struct PressureLaw {
    double p0 = 1.0;
    double gamma = 1.0;

    [[nodiscard]] double p(double v) const { return p0 * std::pow(v, -gamma); }
    [[nodiscard]] double dp(double v) const { return -gamma * p0 * std::pow(v, -gamma - 1.0); }
    [[nodiscard]] double d2p(double v) const {
        return gamma * (gamma + 1.0) * p0 * std::pow(v, -gamma - 2.0);
    }

    friend bool operator==(const PressureLaw&, const PressureLaw&) = default;
};

}  // namespace nsk
