#pragma once

#include "nsk/pressure.hpp"

#include <utility>

namespace nsk {

/// Fluid constants and the end states of a 2-shock with u_minus = 0.
struct ModelParams {
    double mu = 1.0;
    double kappa = 0.1;
    PressureLaw pressure{};
    double v_plus = 1.0;
    double u_plus = 0.0;
    double v_minus = 1.0;
    double u_minus = 0.0;
    double s = 0.0;
    double delta = 0.0;
};

/// Characteristic speed of the second family, sqrt(-p'(v)).
double char_speed(const PressureLaw& pressure, double v);

/// Left state and shock speed from the jump conditions, for given fluid
/// constants and right state (v_plus, u_plus < 0). Throws Error.
ModelParams solve_rankine_hugoniot(const PressureLaw& pressure, double v_plus, double u_plus,
                                   double mu = 1.0, double kappa = 0.1);

/// (s - lambda2(v_plus), lambda2(v_minus) - s); both positive for an admissible shock.
std::pair<double, double> lax_entropy_margin(const ModelParams& params);

/// mu^2 s^2 v-^8 / kappa - (10 v+/v- - 6) v+^5 (p'(v+) + s^2).
/// Positive means a monotone profile is guaranteed.
double profile_existence_margin(const ModelParams& params);

/// Relative residuals of the two jump identities.
std::pair<double, double> rankine_hugoniot_residuals(const ModelParams& params);

}  // namespace nsk
