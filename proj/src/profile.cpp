#include "nsk/profile.hpp"

#include "hermite.hpp"
#include "nsk/error.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsk {

FirstIntegrals compute_first_integrals(const ModelParams& params) {
    const double s = params.s;
    const auto& p = params.pressure;
    const double a1_plus = s * params.v_plus + params.u_plus;
    const double a1_minus = s * params.v_minus + params.u_minus;
    const double a2_plus = s * params.u_plus - p.p(params.v_plus);
    const double a2_minus = s * params.u_minus - p.p(params.v_minus);

    auto mismatch = [](double x, double y) {
        return std::abs(x - y) > 1e-12 * std::max({std::abs(x), std::abs(y), 1e-300});
    };
    if (mismatch(a1_plus, a1_minus) || mismatch(a2_plus, a2_minus)) {
        std::ostringstream os;
        os.precision(17);
        os << "first integrals disagree across the shock: a1 " << a1_minus << " vs " << a1_plus
           << ", a2 " << a2_minus << " vs " << a2_plus;
        throw Error(ErrorKind::InconsistentParams, os.str());
    }
    // The minus side carries u_minus = 0 exactly, so U(-inf) = a1 - s v_minus vanishes.
    return {a1_minus, a2_minus};
}

PhaseState profile_ode_rhs(const ModelParams& params, const FirstIntegrals& fi, PhaseState state) {
    const double V = state.V;
    const double W = state.W;
    if (!(V > 0.0)) {
        std::ostringstream os;
        os << "profile state requires V > 0, got " << V;
        throw Error(ErrorKind::Domain, os.str());
    }
    const double s = params.s;
    const double kappa = params.kappa;
    const double V5 = std::pow(V, 5);
    const double bracket = -params.mu * s * W / V + 5.0 * kappa * W * W / (2.0 * V5 * V)
                           + s * (fi.a1 - s * V) - params.pressure.p(V) - fi.a2;
    return {W, V5 / kappa * bracket};
}

std::pair<std::complex<double>, std::complex<double>> equilibrium_eigenvalues(
    const ModelParams& params, const FirstIntegrals& /*fi*/, EndState at) {
    const double v = at == EndState::Minus ? params.v_minus : params.v_plus;
    const double s = params.s;
    const double b = std::pow(v, 5) / params.kappa * (-s * s - params.pressure.dp(v));
    const double a = -params.mu * s * std::pow(v, 4) / params.kappa;
    const std::complex<double> root = std::sqrt(std::complex<double>(a * a + 4.0 * b, 0.0));
    std::complex<double> hi = 0.5 * (a + root);
    std::complex<double> lo = 0.5 * (a - root);
    // For real roots of opposite size, recompute the small one from the product -b.
    if (root.imag() == 0.0 && hi.real() != 0.0 && lo.real() != 0.0) {
        if (std::abs(hi.real()) < std::abs(lo.real())) hi = -b / lo.real();
        else lo = -b / hi.real();
    }
    return {hi, lo};
}

std::pair<double, double> predicted_decay_rates(const ModelParams& params) {
    const auto fi = compute_first_integrals(params);
    const auto left = equilibrium_eigenvalues(params, fi, EndState::Minus);
    const auto right = equilibrium_eigenvalues(params, fi, EndState::Plus);
    return {left.first.real(), -right.first.real()};
}

// ---------------------------------------------------------------------------
// ShockProfile

ProfileSample ShockProfile::evaluate(double at) const {
    const double Xi = half_width();
    if (at <= -Xi) {
        if (at < -Xi) return {params.v_minus, params.u_minus, 0.0, 0.0};
        return {V.front(), U.front(), Vp.front(), Vpp.front()};
    }
    if (at >= Xi) {
        if (at > Xi) return {params.v_plus, params.u_plus, 0.0, 0.0};
        return {V.back(), U.back(), Vp.back(), Vpp.back()};
    }
    const double h = spacing();
    auto i = static_cast<std::size_t>((at - xi.front()) / h);
    if (i >= xi.size() - 1) i = xi.size() - 2;
    const double t = (at - xi[i]) / h;
    if (t == 0.0) return {V[i], U[i], Vp[i], Vpp[i]};

    double m0 = Vp[i];
    double m1 = Vp[i + 1];
    detail::limit_monotone((V[i + 1] - V[i]) / h, m0, m1);
    ProfileSample out;
    out.V = detail::hermite(V[i], V[i + 1], m0, m1, h, t);
    out.U = integrals.a1 - params.s * out.V;
    out.Vp = detail::hermite(Vp[i], Vp[i + 1], Vpp[i], Vpp[i + 1], h, t);
    out.Vpp = profile_ode_rhs(params, integrals, {out.V, out.Vp}).W;
    return out;
}

void ShockProfile::finalize() {
    const double h = spacing();
    cumulative_.assign(xi.size(), 0.0);
    for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
        double m0 = Vp[i];
        double m1 = Vp[i + 1];
        detail::limit_monotone((V[i + 1] - V[i]) / h, m0, m1);
        cumulative_[i + 1] = cumulative_[i]
                             + detail::hermite_integral(V[i] - params.v_minus,
                                                        V[i + 1] - params.v_minus, m0, m1, h, 1.0);
    }
}

double ShockProfile::cumulative_excess(double at) const {
    const double Xi = half_width();
    if (at <= -Xi) return 0.0;
    if (at >= Xi) return cumulative_.back() + params.delta * (at - Xi);
    const double h = spacing();
    auto i = static_cast<std::size_t>((at - xi.front()) / h);
    if (i >= xi.size() - 1) i = xi.size() - 2;
    const double t = (at - xi[i]) / h;
    double m0 = Vp[i];
    double m1 = Vp[i + 1];
    detail::limit_monotone((V[i + 1] - V[i]) / h, m0, m1);
    return cumulative_[i]
           + detail::hermite_integral(V[i] - params.v_minus, V[i + 1] - params.v_minus, m0, m1,
                                      h, t);
}

double ShockProfile::integrate_V_excess(double lo, double hi) const {
    return cumulative_excess(hi) - cumulative_excess(lo);
}

double ShockProfile::integrate_U(double lo, double hi) const {
    // U = u_minus - s (V - v_minus) because a1 = s v_minus + u_minus.
    return params.u_minus * (hi - lo) - params.s * integrate_V_excess(lo, hi);
}

// ---------------------------------------------------------------------------
// Shooting along the unstable manifold of (v_minus, 0).

namespace {

struct Node {
    double tau;
    double V;
    double W;
    double dW;
};

/// Dormand-Prince 5(4) with FSAL; accepted steps are kept as Hermite nodes.
class Dopri5 {
public:
    Dopri5(const ModelParams& params, const FirstIntegrals& fi, double rtol, double atol)
        : params_(params), fi_(fi), rtol_(rtol), atol_(atol) {}

    PhaseState f(PhaseState y) const { return profile_ode_rhs(params_, fi_, y); }

    /// Attempts one step of size h from y (with derivative k1). Returns the
    /// error norm; on return y_new and k_new hold the proposed state.
    double attempt(PhaseState y, PhaseState k1, double h, PhaseState& y_new, PhaseState& k_new) const {
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        auto comb = [&](std::initializer_list<std::pair<double, PhaseState>> terms) {
            PhaseState out = y;
            for (const auto& [c, k] : terms) {
                out.V += h * c * k.V;
                out.W += h * c * k.W;
            }
            return out;
        };
        const PhaseState y2 = comb({{a21, k1}});
        if (!(y2.V > 0.0)) return std::numeric_limits<double>::infinity();
        const PhaseState k2 = f(y2);
        const PhaseState y3 = comb({{a31, k1}, {a32, k2}});
        if (!(y3.V > 0.0)) return std::numeric_limits<double>::infinity();
        const PhaseState k3 = f(y3);
        const PhaseState y4 = comb({{a41, k1}, {a42, k2}, {a43, k3}});
        if (!(y4.V > 0.0)) return std::numeric_limits<double>::infinity();
        const PhaseState k4 = f(y4);
        const PhaseState y5 = comb({{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}});
        if (!(y5.V > 0.0)) return std::numeric_limits<double>::infinity();
        const PhaseState k5 = f(y5);
        const PhaseState y6 = comb({{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}});
        if (!(y6.V > 0.0)) return std::numeric_limits<double>::infinity();
        const PhaseState k6 = f(y6);
        y_new = comb({{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
        if (!(y_new.V > 0.0)) return std::numeric_limits<double>::infinity();
        k_new = f(y_new);

        const double errV = h * (e1 * k1.V + e3 * k3.V + e4 * k4.V + e5 * k5.V + e6 * k6.V
                                 + e7 * k_new.V);
        const double errW = h * (e1 * k1.W + e3 * k3.W + e4 * k4.W + e5 * k5.W + e6 * k6.W
                                 + e7 * k_new.W);
        const double scV = atol_ + rtol_ * std::max(std::abs(y.V), std::abs(y_new.V));
        const double scW = atol_ + rtol_ * std::max(std::abs(y.W), std::abs(y_new.W));
        return std::sqrt(0.5 * ((errV / scV) * (errV / scV) + (errW / scW) * (errW / scW)));
    }

private:
    const ModelParams& params_;
    const FirstIntegrals& fi_;
    double rtol_;
    double atol_;
};

/// Local coordinate in [0, 1] where the Hermite cubic of V crosses `level`.
double locate_crossing(const Node& n0, const Node& n1, double level) {
    const double h = n1.tau - n0.tau;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::hermite(n0.V, n1.V, n0.W, n1.W, h, mid) < level) lo = mid; else hi = mid;
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ShockProfile solve_profile(const ModelParams& params, const ProfileOptions& options) {
    if (options.samples < 16) throw Error(ErrorKind::Domain, "profile needs at least 16 samples");
    if (!(options.ode_tol > 0.0) || !(options.eps_init > 0.0)) {
        throw Error(ErrorKind::Domain, "ode_tol and eps_init must be positive");
    }
    const FirstIntegrals fi = compute_first_integrals(params);
    const double delta = params.delta;
    const double v_minus = params.v_minus;
    const double v_plus = params.v_plus;
    const double v_mid = 0.5 * (v_minus + v_plus);

    const auto left_eig = equilibrium_eigenvalues(params, fi, EndState::Minus);
    const double lambda_u = left_eig.first.real();
    if (!(lambda_u > 0.0) || left_eig.first.imag() != 0.0) {
        throw Error(ErrorKind::InconsistentParams, "(v_minus, 0) is not a saddle");
    }
    const auto right_eig = equilibrium_eigenvalues(params, fi, EndState::Plus);
    const double lambda_s = right_eig.first.real();  // slowest stable rate (negative)
    const double rate = std::min(lambda_u, -lambda_s);
    const double Xi = options.xi_half_width > 0.0 ? options.xi_half_width : 20.0 / rate;

    // Unit unstable eigenvector (1, lambda_u)/norm has positive components.
    const double norm = std::hypot(1.0, lambda_u);
    const double eps = options.eps_init * delta;
    const double eV = eps / norm;
    PhaseState y{v_minus + eV, lambda_u * eV};

    Dopri5 rk(params, fi, options.ode_tol, 1e-3 * options.ode_tol * delta);
    std::vector<Node> nodes;
    PhaseState k = rk.f(y);
    nodes.push_back({0.0, y.V, y.W, k.W});

    double h = std::min(1e-2 / std::abs(lambda_u), 1e-3);
    double tau = 0.0;
    double tau_cross = std::numeric_limits<double>::quiet_NaN();
    const std::size_t max_steps = 20'000'000;
    bool converged = false;
    for (std::size_t step = 0; step < max_steps; ++step) {
        if (!std::isnan(tau_cross) && tau - tau_cross >= Xi) break;
        double h_try = h;
        if (!std::isnan(tau_cross)) h_try = std::min(h_try, tau_cross + Xi - tau);
        PhaseState y_new{};
        PhaseState k_new{};
        double err = rk.attempt(y, k, h_try, y_new, k_new);
        int rejects = 0;
        while (!(err <= 1.0)) {
            const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            h_try *= factor;
            if (++rejects > 200 || h_try < 1e-14 * std::max(1.0, std::abs(tau))) {
                if (!std::isfinite(err)) {
                    throw Error(ErrorKind::Positivity, "profile orbit reached V <= 0");
                }
                throw Error(ErrorKind::Fit, "profile integration step size underflow");
            }
            err = rk.attempt(y, k, h_try, y_new, k_new);
        }
        tau += h_try;
        y = y_new;
        k = k_new;
        nodes.push_back({tau, y.V, y.W, k.W});
        const double factor = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
        h = h_try * factor;

        if (!(y.V > 0.0)) throw Error(ErrorKind::Positivity, "profile orbit reached V <= 0");
        if (y.V > v_plus + 1e-3 * delta) {
            std::ostringstream os;
            os << "profile overshoots v_plus (V = " << y.V << ") - orbit spirals into (v_plus, 0)";
            throw Error(ErrorKind::Overshoot, os.str());
        }
        const double distance = std::abs(y.V - v_plus) + std::abs(y.W);
        if (std::isnan(tau_cross) && y.V >= v_mid) {
            const Node& n0 = nodes[nodes.size() - 2];
            const Node& n1 = nodes.back();
            tau_cross = n0.tau + locate_crossing(n0, n1, v_mid) * (n1.tau - n0.tau);
        }
        if (!std::isnan(tau_cross) && distance < 1e-8 * delta) {
            converged = true;
            break;
        }
        if (y.W <= 0.0) {
            std::ostringstream os;
            os << "V' vanished at V = " << y.V << " before reaching v_plus (non-monotone orbit)";
            throw Error(ErrorKind::Monotonicity, os.str());
        }
    }
    if (std::isnan(tau_cross)) {
        throw Error(ErrorKind::Monotonicity, "orbit never reached the midpoint state");
    }
    (void)converged;

    const Node start = nodes.front();
    const Node end = nodes.back();
    const double xi_start = start.tau - tau_cross;
    const double xi_end = end.tau - tau_cross;

    ShockProfile profile;
    profile.params = params;
    profile.integrals = fi;
    const std::size_t n = options.samples;
    profile.xi.resize(n);
    profile.V.resize(n);
    profile.U.resize(n);
    profile.Vp.resize(n);
    profile.Vpp.resize(n);
    const double spacing = 2.0 * Xi / static_cast<double>(n - 1);

    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i + 1 == n ? Xi : -Xi + spacing * static_cast<double>(i);
        profile.xi[i] = x;
        double V = 0.0;
        double W = 0.0;
        if (x <= xi_start) {
            // Linear unstable manifold below the launch point.
            V = v_minus + (start.V - v_minus) * std::exp(lambda_u * (x - xi_start));
            W = lambda_u * (V - v_minus);
        } else if (x >= xi_end) {
            // Slow stable mode beyond the last integrated point.
            V = v_plus + (end.V - v_plus) * std::exp(lambda_s * (x - xi_end));
            W = lambda_s * (V - v_plus);
        } else {
            const double tau_x = x + tau_cross;
            while (seg + 2 < nodes.size() && nodes[seg + 1].tau < tau_x) ++seg;
            const Node& n0 = nodes[seg];
            const Node& n1 = nodes[seg + 1];
            const double hh = n1.tau - n0.tau;
            const double t = (tau_x - n0.tau) / hh;
            V = detail::hermite(n0.V, n1.V, n0.W, n1.W, hh, t);
            W = detail::hermite(n0.W, n1.W, n0.dW, n1.dW, hh, t);
        }
        profile.V[i] = V;
        profile.Vp[i] = W;
        profile.U[i] = fi.a1 - params.s * V;
        profile.Vpp[i] = profile_ode_rhs(params, fi, {V, W}).W;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(profile.V[i + 1] > profile.V[i])) {
            std::ostringstream os;
            os << "resampled profile not strictly increasing near xi = " << profile.xi[i];
            throw Error(ErrorKind::Monotonicity, os.str());
        }
    }
    profile.finalize();
    const auto [left, right] = estimate_decay_rate(profile);
    profile.c1_hat_left = left;
    profile.c1_hat_right = right;
    return profile;
}

// ---------------------------------------------------------------------------

namespace {

double fit_log_slope(const std::vector<double>& abs_xi, const std::vector<double>& log_dev) {
    const double n = static_cast<double>(abs_xi.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < abs_xi.size(); ++i) {
        sx += abs_xi[i];
        sy += log_dev[i];
        sxx += abs_xi[i] * abs_xi[i];
        sxy += abs_xi[i] * log_dev[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::pair<double, double> estimate_decay_rate(const ShockProfile& profile) {
    const double Xi = profile.half_width();
    auto fit_tail = [&](bool left) {
        const double limit = left ? profile.params.v_minus : profile.params.v_plus;
        std::vector<double> ax;
        std::vector<double> ly;
        for (std::size_t i = 0; i < profile.xi.size(); ++i) {
            const double x = profile.xi[i];
            const bool in_window = left ? x <= -0.75 * Xi : x >= 0.75 * Xi;
            if (!in_window) continue;
            const double dev = std::abs(profile.V[i] - limit);
            if (dev < 1e-14) continue;  // lost to rounding
            ax.push_back(std::abs(x));
            ly.push_back(std::log(dev));
        }
        if (ax.size() < 8) {
            throw Error(ErrorKind::Fit, std::string("fewer than 8 usable samples on the ")
                                            + (left ? "left" : "right") + " tail");
        }
        const double rate = -fit_log_slope(ax, ly);
        if (!(rate > 0.0)) throw Error(ErrorKind::Fit, "tail does not decay");
        return rate;
    };
    return {fit_tail(true), fit_tail(false)};
}

std::pair<double, double> decay_envelope_constants(const ShockProfile& profile, double c1) {
    double left = 0.0;
    double right = 0.0;
    const double delta = profile.params.delta;
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
        const double x = profile.xi[i];
        const double envelope = delta * std::exp(-c1 * std::abs(x));
        if (x <= 0.0) left = std::max(left, std::abs(profile.V[i] - profile.params.v_minus) / envelope);
        if (x >= 0.0) right = std::max(right, std::abs(profile.V[i] - profile.params.v_plus) / envelope);
    }
    return {left, right};
}

double first_integral_residual(const ShockProfile& profile) {
    const auto& pr = profile.params;
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
        const double V = profile.V[i];
        const double Up = -pr.s * profile.Vp[i];
        const double lhs = pr.mu * Up / V - pr.kappa * profile.Vpp[i] / std::pow(V, 5)
                           + 2.5 * pr.kappa * profile.Vp[i] * profile.Vp[i] / std::pow(V, 6);
        const double rhs = -pr.s * profile.U[i] + pr.pressure.p(V) + profile.integrals.a2;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace nsk
