#pragma once

#include "nsk/grid.hpp"
#include "nsk/profile.hpp"
#include "nsk/solver.hpp"

#include <string_view>

namespace nsk {

enum class PerturbationKind { None, Bump };

PerturbationKind parse_perturbation_kind(std::string_view name);
std::string_view to_string(PerturbationKind kind);

/// Gaussian bump a exp(-((x - x0)/w)^2), cut to zero beyond 8w. The same
/// bump scaled by -s is added to u, so u0 - (a1 - s v0) is unchanged by it.
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::None;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 2.0;

    [[nodiscard]] double bump(double x) const;
};

/// v0 = V(x + alpha0 - beta) + bump, u0 = U(x + alpha0 - beta) - U(alpha0 - beta) exp(-c1 x) - s bump,
/// with the far node pinned to (v_plus, u_plus).
FieldState make_initial_data(const Grid& grid, const ShockProfile& profile, double beta,
                             const PerturbationSpec& perturbation, double alpha0 = 0.0);

}  // namespace nsk
