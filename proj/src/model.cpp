#include "nsk/model.hpp"

#include "nsk/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nsk {

double char_speed(const PressureLaw& pressure, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "char_speed requires v > 0, got " << v;
        throw Error(ErrorKind::Domain, os.str());
    }
    return std::sqrt(-pressure.dp(v));
}

ModelParams solve_rankine_hugoniot(const PressureLaw& pressure, double v_plus, double u_plus,
                                   double mu, double kappa) {
    if (!(v_plus > 0.0)) throw Error(ErrorKind::Domain, "v_plus must be positive");
    if (u_plus >= -1e-12) {
        std::ostringstream os;
        os << "u_plus = " << u_plus << " must be negative";
        throw Error(ErrorKind::NotTwoShock, os.str());
    }

    const double p_plus = pressure.p(v_plus);
    const double target = u_plus * u_plus;
    // Decreasing in v_minus for convex decreasing p.
    auto g = [&](double vm) { return (pressure.p(vm) - p_plus) * (v_plus - vm) - target; };

    const double eps_v = 1e-12 * v_plus;
    double lo = eps_v;
    double hi = v_plus - eps_v;
    if (!(g(lo) > 0.0)) {
        throw Error(ErrorKind::VacuumExceeded,
                    "no left state in (0, v_plus): |u_plus| too large for the pressure law");
    }
    if (g(hi) >= 0.0) {
        throw Error(ErrorKind::NotTwoShock, "shock strength below resolution");
    }
    // Bisect down to adjacent doubles; the jump identities are checked at 1e-12.
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0) lo = mid; else hi = mid;
    }
    const double v_minus = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;

    ModelParams params;
    params.mu = mu;
    params.kappa = kappa;
    params.pressure = pressure;
    params.v_plus = v_plus;
    params.u_plus = u_plus;
    params.v_minus = v_minus;
    params.u_minus = 0.0;
    params.delta = v_plus - v_minus;
    params.s = (params.u_minus - u_plus) / params.delta;

    const auto [lax_right, lax_left] = lax_entropy_margin(params);
    if (!(lax_right > 0.0 && lax_left > 0.0)) {
        throw Error(ErrorKind::InconsistentParams, "Lax entropy condition violated");
    }
    return params;
}

std::pair<double, double> lax_entropy_margin(const ModelParams& params) {
    return {params.s - char_speed(params.pressure, params.v_plus),
            char_speed(params.pressure, params.v_minus) - params.s};
}

double profile_existence_margin(const ModelParams& params) {
    const double s2 = params.s * params.s;
    const double vm = params.v_minus;
    const double vp = params.v_plus;
    return params.mu * params.mu * s2 * std::pow(vm, 8) / params.kappa
           - (10.0 * vp / vm - 6.0) * std::pow(vp, 5) * (params.pressure.dp(vp) + s2);
}

std::pair<double, double> rankine_hugoniot_residuals(const ModelParams& params) {
    const double lhs1 = params.s * (params.v_plus - params.v_minus);
    const double rhs1 = params.u_minus - params.u_plus;
    const double lhs2 = params.s * (params.u_plus - params.u_minus);
    const double rhs2 = params.pressure.p(params.v_plus) - params.pressure.p(params.v_minus);
    return {std::abs(lhs1 - rhs1) / std::max(std::abs(rhs1), 1e-300),
            std::abs(lhs2 - rhs2) / std::max(std::abs(rhs2), 1e-300)};
}

}  // namespace nsk
