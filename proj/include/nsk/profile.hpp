#pragma once

#include "nsk/model.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace nsk {

/// Constants of the once-integrated traveling-wave equations:
/// sV + U = a1 and mu U'/V - kappa V''/V^5 + 5 kappa V'^2/(2V^6) = -sU + p(V) + a2.
struct FirstIntegrals {
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Point (V, W = V') of the planar profile system, or its derivative (V', W').
struct PhaseState {
    double V = 0.0;
    double W = 0.0;
};

enum class EndState { Minus, Plus };

FirstIntegrals compute_first_integrals(const ModelParams& params);

/// Right-hand side of the planar system V' = W, W' = f(V, W).
PhaseState profile_ode_rhs(const ModelParams& params, const FirstIntegrals& fi, PhaseState state);

/// Eigenvalues of the linearization at (v_minus, 0) or (v_plus, 0), ordered
/// by decreasing real part.
std::pair<std::complex<double>, std::complex<double>> equilibrium_eigenvalues(
    const ModelParams& params, const FirstIntegrals& fi, EndState at);

/// Decay rates predicted by the linearization: the unstable eigenvalue at
/// v_minus and the slowest stable rate at v_plus.
std::pair<double, double> predicted_decay_rates(const ModelParams& params);

struct ProfileOptions {
    double xi_half_width = 0.0;  ///< 0 selects 20 / (slowest predicted rate)
    double ode_tol = 1e-10;
    double eps_init = 1e-6;      ///< initial offset along the unstable eigenvector, in units of delta
    std::size_t samples = 4096;
};

struct ProfileSample {
    double V = 0.0;
    double U = 0.0;
    double Vp = 0.0;
    double Vpp = 0.0;
};

/// Monotone viscous shock profile sampled on a uniform grid over [-Xi, Xi],
/// normalized by V(0) = (v_minus + v_plus)/2. Immutable once built.
struct ShockProfile {
    ModelParams params;
    FirstIntegrals integrals;
    std::vector<double> xi;
    std::vector<double> V;
    std::vector<double> U;
    std::vector<double> Vp;
    std::vector<double> Vpp;
    double c1_hat_left = 0.0;
    double c1_hat_right = 0.0;

    [[nodiscard]] double half_width() const { return xi.back(); }
    [[nodiscard]] double spacing() const { return xi[1] - xi[0]; }
    /// Binding decay rate min(left, right).
    [[nodiscard]] double c1_hat() const { return std::min(c1_hat_left, c1_hat_right); }

    /// Shape-preserving cubic interpolation inside [-Xi, Xi]; exact end
    /// states outside.
    [[nodiscard]] ProfileSample evaluate(double at) const;

    /// Integral of U over [lo, hi] with the same clamp as evaluate().
    [[nodiscard]] double integrate_U(double lo, double hi) const;
    /// Integral of V - v_minus over [lo, hi].
    [[nodiscard]] double integrate_V_excess(double lo, double hi) const;

    /// Rebuild the cumulative integral table; call after filling the samples by hand.
    void finalize();

private:
    [[nodiscard]] double cumulative_excess(double at) const;
    std::vector<double> cumulative_;
};

ShockProfile solve_profile(const ModelParams& params, const ProfileOptions& options = {});

inline ProfileSample evaluate_profile(const ShockProfile& profile, double xi) {
    return profile.evaluate(xi);
}

/// Log-linear least-squares fit of |V - v_-+| against |xi| over the outer
/// quarter of each tail.
std::pair<double, double> estimate_decay_rate(const ShockProfile& profile);

/// Smallest C with |V - v_-+| <= C delta exp(-c1 |xi|) on each tail.
std::pair<double, double> decay_envelope_constants(const ShockProfile& profile, double c1);

/// Max over samples of |mu U'/V - kappa V''/V^5 + 5 kappa V'^2/(2V^6) + sU - p(V) - a2|,
/// using the stored derivative columns.
double first_integral_residual(const ShockProfile& profile);

}  // namespace nsk
