#pragma once

#include "nsk/grid.hpp"
#include "nsk/profile.hpp"

#include <array>
#include <memory>
#include <span>

namespace nsk {

/// Offset beta, the resulting shift alpha, and the mass identity residual I(alpha).
struct ShiftData {
    std::shared_ptr<const ShockProfile> profile;
    double beta = 0.0;
    double alpha = 0.0;
    double I_residual = 0.0;
    double c1_hat = 0.0;
};

/// Smallest beta with exp(-c1_hat beta) <= floor.
double default_beta(const ShockProfile& profile, double floor = 1e-6);

/// Closed-form shift: alpha = (int_0^inf [v0 - V(x - beta)] dx + int_0^inf U(-st - beta) dt) / delta.
ShiftData compute_alpha(std::span<const double> v0, const Grid& grid,
                        std::shared_ptr<const ShockProfile> profile, double beta);

/// I(alpha) by direct quadrature, independent of the closed form.
double eval_I(double alpha, std::span<const double> v0, const Grid& grid,
              const ShockProfile& profile, double beta);

/// k-th derivative (k = 0..3) of the boundary function A(t) = int_t^inf U(-s tau + alpha - beta) d tau.
double eval_A(const ShiftData& shift, double t, int order);

/// Integrals int_0^inf |A^(k)(t)| dt for k = 0..3.
std::array<double, 4> boundary_data_l1(const ShiftData& shift);

}  // namespace nsk
