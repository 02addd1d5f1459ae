#include "nsk/shift.hpp"

#include "nsk/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <vector>

namespace nsk {

namespace {

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;

/// int_0^inf f(tau) d tau for f(tau) = g(-s tau + zeta0), where g is the
/// piecewise-cubic profile interpolant. Pieces are aligned with the profile
/// knots so each panel sees a smooth integrand.
template <class F>
double integrate_profile_pieces(F f, const ShockProfile& profile, double zeta0) {
    const double s = profile.params.s;
    const double Xi = profile.half_width();
    if (zeta0 <= -Xi) return 0.0;
    std::vector<double> breaks{0.0};
    if (zeta0 > Xi) breaks.push_back((zeta0 - Xi) / s);
    const double h = profile.spacing();
    auto i = static_cast<long>(std::floor((std::min(zeta0, Xi) + Xi) / h));
    for (; i >= 0; --i) {
        const double tau = (zeta0 - profile.xi[static_cast<std::size_t>(i)]) / s;
        if (tau > breaks.back() + 1e-12 * h) breaks.push_back(tau);
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        total += Quadrature::integrate(f, breaks[k], breaks[k + 1], 3, 1e-14);
    }
    return total;
}
void require_decayed_tail(std::span<const double> v0, const Grid& grid,
                          const ShockProfile& profile, double beta) {
    if (v0.size() != grid.nodes()) {
        throw Error(ErrorKind::Domain, "initial field size does not match the grid");
    }
    const double tail = std::abs(v0.back() - profile.evaluate(grid.L - beta).V);
    if (!(tail < 1e-8)) {
        std::ostringstream os;
        os << "v0 - V(x - beta) has not decayed at x = L (|value| = " << tail << ")";
        throw Error(ErrorKind::Truncation, os.str());
    }
}

}  // namespace

double default_beta(const ShockProfile& profile, double floor) {
    return -std::log(floor) / profile.c1_hat();
}

double eval_I(double alpha, std::span<const double> v0, const Grid& grid,
              const ShockProfile& profile, double beta) {
    require_decayed_tail(v0, grid, profile, beta);
    std::vector<double> diff(grid.nodes());
    for (std::size_t j = 0; j < diff.size(); ++j) {
        diff[j] = v0[j] - profile.evaluate(grid.x(j) + alpha - beta).V;
    }
    const double mass = trapezoid(diff, grid.dx());

    const double s = profile.params.s;
    const double boundary = integrate_profile_pieces(
        [&](double tau) { return profile.evaluate(-s * tau + alpha - beta).U; }, profile, alpha - beta);
    return mass + boundary;
}

ShiftData compute_alpha(std::span<const double> v0, const Grid& grid,
                        std::shared_ptr<const ShockProfile> profile, double beta) {
    const ShockProfile& pr = *profile;
    const double delta = pr.params.v_plus - pr.params.v_minus;
    if (!(delta > 0.0)) throw Error(ErrorKind::DegenerateShock, "v_plus equals v_minus");
    require_decayed_tail(v0, grid, pr, beta);

    std::vector<double> diff(grid.nodes());
    for (std::size_t j = 0; j < diff.size(); ++j) {
        diff[j] = v0[j] - pr.evaluate(grid.x(j) - beta).V;
    }
    const double mass = trapezoid(diff, grid.dx());
    const double lo = std::min(-pr.half_width(), -beta) - 1.0;
    const double boundary = pr.integrate_U(lo, -beta) / pr.params.s;

    ShiftData out;
    out.beta = beta;
    out.alpha = (mass + boundary) / delta;
    out.c1_hat = pr.c1_hat();
    out.I_residual = eval_I(out.alpha, v0, grid, pr, beta);
    out.profile = std::move(profile);
    if (!(std::abs(out.alpha) < beta)) {
        std::ostringstream os;
        os << "shift alpha = " << out.alpha << " does not satisfy |alpha| < beta = " << beta;
        throw Error(ErrorKind::Domain, os.str());
    }
    return out;
}

double eval_A(const ShiftData& shift, double t, int order) {
    const ShockProfile& pr = *shift.profile;
    const double s = pr.params.s;
    const double zeta = -s * t + shift.alpha - shift.beta;
    switch (order) {
        case 0: {
            const double lo = std::min(-pr.half_width(), zeta) - 1.0;
            return pr.integrate_U(lo, zeta) / s;
        }
        case 1: return -pr.evaluate(zeta).U;
        case 2: return -s * s * pr.evaluate(zeta).Vp;
        case 3: return s * s * s * pr.evaluate(zeta).Vpp;
        default: throw Error(ErrorKind::Domain, "eval_A supports derivative orders 0..3");
    }
}

std::array<double, 4> boundary_data_l1(const ShiftData& shift) {
    const ShockProfile& pr = *shift.profile;
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) {
        out[k] = integrate_profile_pieces([&](double t) { return std::abs(eval_A(shift, t, k)); }, pr,
                                          shift.alpha - shift.beta);
    }
    return out;
}

}  // namespace nsk
