#include "nsk/initial_data.hpp"

#include "nsk/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace nsk {

PerturbationKind parse_perturbation_kind(std::string_view name) {
    if (name == "none") return PerturbationKind::None;
    if (name == "bump") return PerturbationKind::Bump;
    throw Error(ErrorKind::Config, "unknown perturbation kind '" + std::string(name) + "'");
}

std::string_view to_string(PerturbationKind kind) {
    return kind == PerturbationKind::Bump ? "bump" : "none";
}

double PerturbationSpec::bump(double x) const {
    if (kind == PerturbationKind::None || amplitude == 0.0) return 0.0;
    const double z = (x - center) / width;
    if (std::abs(z) > 8.0) return 0.0;
    return amplitude * std::exp(-z * z);
}

FieldState make_initial_data(const Grid& grid, const ShockProfile& profile, double beta,
                             const PerturbationSpec& perturbation, double alpha0) {
    const ModelParams& params = profile.params;
    if (perturbation.kind == PerturbationKind::Bump) {
        if (!(std::abs(perturbation.amplitude) <= 0.1 * params.delta)) {
            std::ostringstream os;
            os << "bump amplitude " << perturbation.amplitude << " exceeds 0.1 delta = "
               << 0.1 * params.delta;
            throw Error(ErrorKind::Domain, os.str());
        }
        if (!(perturbation.width > 0.0)) throw Error(ErrorKind::Domain, "bump width must be positive");
        if (perturbation.center - 8.0 * perturbation.width <= 0.0) {
            throw Error(ErrorKind::Domain, "bump support must stay clear of the wall (u0(0) = 0)");
        }
    }
    const double c1 = profile.c1_hat();
    const double wall_u = profile.evaluate(alpha0 - beta).U;
    FieldState state;
    state.t = 0.0;
    state.v.resize(grid.nodes());
    state.u.resize(grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double x = grid.x(j);
        const ProfileSample ref = profile.evaluate(x + alpha0 - beta);
        const double g = perturbation.bump(x);
        state.v[j] = ref.V + g;
        state.u[j] = ref.U - wall_u * std::exp(-c1 * x) - params.s * g;
    }
    state.u.front() = 0.0;
    state.v.back() = params.v_plus;
    state.u.back() = params.u_plus;
    return state;
}

}  // namespace nsk
