#include "nsk/diagnostics.hpp"

#include "nsk/csv.hpp"
#include "nsk/error.hpp"

#include <algorithm>
#include <cmath>

namespace nsk {

namespace {

struct Differences {
    std::vector<double> dv;  // v - V
    std::vector<double> du;  // u - U
};

Differences differences(const FieldState& state, const Grid& grid, const ShiftData& shift) {
    const ShockProfile& pr = *shift.profile;
    const double offset = -pr.params.s * state.t + shift.alpha - shift.beta;
    Differences d;
    d.dv.resize(grid.nodes());
    d.du.resize(grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const ProfileSample ref = pr.evaluate(grid.x(j) + offset);
        d.dv[j] = state.v[j] - ref.V;
        d.du[j] = state.u[j] - ref.U;
    }
    return d;
}

std::vector<double> tail_antiderivative(const std::vector<double>& f, double dx) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = f.size() - 1; j-- > 0;) out[j] = out[j + 1] - 0.5 * dx * (f[j] + f[j + 1]);
    return out;
}

double squared_norm(const std::vector<double>& f, double dx) {
    double sum = 0.5 * (f.front() * f.front() + f.back() * f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j] * f[j];
    return sum * dx;
}

}  // namespace

std::vector<double> differentiate(const std::vector<double>& f, double dx, int order) {
    const std::size_t n = f.size();
    if (n < 6) throw Error(ErrorKind::Domain, "differentiate needs at least 6 nodes");
    std::vector<double> out(n);
    switch (order) {
        case 1: {
            for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
            out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
            out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
            break;
        }
        case 2: {
            const double h2 = dx * dx;
            for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
            out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
            out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
            break;
        }
        case 3: {
            const double h3 = 2.0 * dx * dx * dx;
            for (std::size_t j = 2; j + 2 < n; ++j) {
                out[j] = (f[j + 2] - 2.0 * f[j + 1] + 2.0 * f[j - 1] - f[j - 2]) / h3;
            }
            for (std::size_t j : {std::size_t{0}, std::size_t{1}}) {
                out[j] = (-5.0 * f[j] + 18.0 * f[j + 1] - 24.0 * f[j + 2] + 14.0 * f[j + 3]
                          - 3.0 * f[j + 4]) / h3;
                const std::size_t r = n - 1 - j;
                out[r] = (5.0 * f[r] - 18.0 * f[r - 1] + 24.0 * f[r - 2] - 14.0 * f[r - 3]
                          + 3.0 * f[r - 4]) / h3;
            }
            break;
        }
        default: throw Error(ErrorKind::Domain, "differentiate supports orders 1..3");
    }
    return out;
}

PerturbationFields compute_perturbation(const FieldState& state, const Grid& grid, const ShiftData& shift) {
    const double dx = grid.dx();
    Differences d = differences(state, grid, shift);
    PerturbationFields f;
    f.t = state.t;
    f.dx = dx;
    f.tail_decayed = std::abs(d.dv.back()) < 1e-8 && std::abs(d.du.back()) < 1e-8;
    f.phi = tail_antiderivative(d.dv, dx);
    f.psi = tail_antiderivative(d.du, dx);
    f.phi_xx = differentiate(d.dv, dx, 1);
    f.phi_xxx = differentiate(d.dv, dx, 2);
    f.phi_xxxx = differentiate(d.dv, dx, 3);
    f.psi_xx = differentiate(d.du, dx, 1);
    f.psi_xxx = differentiate(d.du, dx, 2);
    f.phi_x = std::move(d.dv);
    f.psi_x = std::move(d.du);
    return f;
}

SobolevNorms sobolev_norms(const PerturbationFields& f) {
    const double dx = f.dx;
    const double phi_sq = squared_norm(f.phi, dx);
    const double phix_sq = squared_norm(f.phi_x, dx);
    const double phixx_sq = squared_norm(f.phi_xx, dx);
    const double phixxx_sq = squared_norm(f.phi_xxx, dx);
    const double phixxxx_sq = squared_norm(f.phi_xxxx, dx);
    const double psi_sq = squared_norm(f.psi, dx);
    const double psix_sq = squared_norm(f.psi_x, dx);
    const double psixx_sq = squared_norm(f.psi_xx, dx);
    const double psixxx_sq = squared_norm(f.psi_xxx, dx);

    SobolevNorms n;
    const double phi_h3_sq = phi_sq + phix_sq + phixx_sq + phixxx_sq;
    const double psi_h2_sq = psi_sq + psix_sq + psixx_sq;
    n.phi_h3 = std::sqrt(phi_h3_sq);
    n.psi_h2 = std::sqrt(psi_h2_sq);
    n.N = std::sqrt(phi_h3_sq + psi_h2_sq);
    n.dissipation_rate = phix_sq + phixx_sq + phixxx_sq + phixxxx_sq + psix_sq + psixx_sq + psixxx_sq;
    return n;
}

SobolevNorms sobolev_norms_direct(const FieldState& state, const Grid& grid, const ShiftData& shift) {
    const double dx = grid.dx();
    const Differences d = differences(state, grid, shift);
    // Accumulate the antiderivatives and their norms in a single backward sweep.
    double phi = 0.0;
    double psi = 0.0;
    double phi_sq = 0.0;
    double psi_sq = 0.0;
    const std::size_t n = d.dv.size();
    for (std::size_t j = n; j-- > 0;) {
        if (j + 1 < n) {
            phi -= 0.5 * dx * (d.dv[j] + d.dv[j + 1]);
            psi -= 0.5 * dx * (d.du[j] + d.du[j + 1]);
        }
        const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        phi_sq += w * phi * phi;
        psi_sq += w * psi * psi;
    }
    phi_sq *= dx;
    psi_sq *= dx;
    double phi_h3_sq = phi_sq;
    double psi_h2_sq = psi_sq;
    double dissipation = 0.0;
    for (int order = 0; order <= 3; ++order) {
        const std::vector<double> g = order == 0 ? d.dv : differentiate(d.dv, dx, order);
        const double sq = squared_norm(g, dx);
        if (order <= 2) phi_h3_sq += sq;
        dissipation += sq;
    }
    for (int order = 0; order <= 2; ++order) {
        const std::vector<double> g = order == 0 ? d.du : differentiate(d.du, dx, order);
        const double sq = squared_norm(g, dx);
        if (order <= 1) psi_h2_sq += sq;
        dissipation += sq;
    }
    SobolevNorms out;
    out.phi_h3 = std::sqrt(phi_h3_sq);
    out.psi_h2 = std::sqrt(psi_h2_sq);
    out.N = std::sqrt(phi_h3_sq + psi_h2_sq);
    out.dissipation_rate = dissipation;
    return out;
}

std::pair<double, double> sup_distance(const FieldState& state, const Grid& grid, const ShiftData& shift) {
    const Differences d = differences(state, grid, shift);
    double sv = 0.0;
    double su = 0.0;
    for (std::size_t j = 0; j < d.dv.size(); ++j) {
        sv = std::max(sv, std::abs(d.dv[j]));
        su = std::max(su, std::abs(d.du[j]));
    }
    return {sv, su};
}

double mass_balance_residual(const FieldState& state, const FieldState& initial, const Grid& grid,
                             const ShiftData& shift) {
    const double lhs = trapezoid(differences(state, grid, shift).dv, grid.dx());
    const double initial_mass = trapezoid(differences(initial, grid, shift).dv, grid.dx());
    const double t0 = initial.t;
    const double inflow = eval_A(shift, t0, 0) - eval_A(shift, state.t, 0);
    return lhs - (initial_mass + inflow);
}

// ---------------------------------------------------------------------------

DiagnosticsMonitor::DiagnosticsMonitor(const Grid& grid, const ShiftData& shift, const FieldState& initial)
    : grid_(grid), shift_(shift), initial_(initial) {}

const DiagnosticsRecord& DiagnosticsMonitor::observe(const FieldState& state) {
    const ShockProfile& pr = *shift_.profile;
    const double s = pr.params.s;
    const PerturbationFields f = compute_perturbation(state, grid_, shift_);
    const SobolevNorms norms = sobolev_norms(f);
    const auto [sup_v, sup_u] = sup_distance(state, grid_, shift_);

    WallValues w{};
    w.t = state.t;
    w.phi = f.phi[0];
    w.phi_x = f.phi_x[0];
    w.phi_xx = f.phi_xx[0];
    w.psi = f.psi[0];
    w.psi_x = f.psi_x[0];
    w.psi_xx = f.psi_xx[0];
    w.v = state.v[0];
    w.V = pr.evaluate(-s * state.t + shift_.alpha - shift_.beta).V;
    const double v5 = std::pow(w.v, 5);
    w.smooth = {w.phi * w.psi,
                w.psi * w.psi_x,
                w.psi_x * w.phi_x,
                w.psi_x * w.psi_xx,
                w.phi_xx * w.psi / (pr.params.pressure.dp(w.V) * v5),
                w.phi_x * w.phi_xx / v5};
    const double phixx_psixx_v5 = w.phi_xx * w.psi_xx / v5;

    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.phi_h3 = norms.phi_h3;
    rec.psi_h2 = norms.psi_h2;
    rec.N = norms.N;
    rec.sup_v = sup_v;
    rec.sup_u = sup_u;
    rec.mass_residual = mass_balance_residual(state, initial_, grid_, shift_);
    rec.boundary_residuals = {w.phi - eval_A(shift_, state.t, 0), w.psi_x - eval_A(shift_, state.t, 1),
                              w.phi_xx - eval_A(shift_, state.t, 2) / (s * s)};
    rec.tail_decayed = f.tail_decayed;

    if (records_.empty()) {
        initial_energy_ = norms.phi_h3 * norms.phi_h3 + norms.psi_h2 * norms.psi_h2;
        signed_integrals_.fill(0.0);
    } else {
        const double dt = state.t - prev_.t;
        const double prev_pp = prev_.phi_xx * prev_.psi_xx / std::pow(prev_.v, 5);
        auto trap = [&](double a, double b) { return 0.5 * dt * (a + b); };
        // Integrands with a time derivative use the difference across the interval.
        const double dpsi = w.psi - prev_.psi;
        const double dpsix = w.psi_x - prev_.psi_x;
        signed_integrals_[0] += trap(prev_.smooth[0], w.smooth[0]);
        signed_integrals_[1] += trap(prev_.smooth[1], w.smooth[1]);
        signed_integrals_[2] += trap(prev_.smooth[2], w.smooth[2]);
        signed_integrals_[3] += dpsi * 0.5 * (w.psi_x + prev_.psi_x);
        signed_integrals_[4] += trap(prev_.smooth[3], w.smooth[3]);
        signed_integrals_[5] += dpsix * 0.5 * (w.psi_xx + prev_.psi_xx);
        signed_integrals_[6] += trap(prev_.smooth[4], w.smooth[4]);
        signed_integrals_[7] += trap(prev_.smooth[5], w.smooth[5]);
        signed_integrals_[8] += trap(prev_pp, phixx_psixx_v5);
        signed_integrals_[9] += dpsi * 0.5 * (w.phi_xx + prev_.phi_xx);
        rec.dissipation_integral = records_.back().dissipation_integral
                                   + trap(prev_dissipation_rate_, norms.dissipation_rate);
    }
    for (std::size_t k = 0; k < signed_integrals_.size(); ++k) {
        rec.boundary_integrals[k] = std::abs(signed_integrals_[k]);
    }
    const double floor = std::exp(-shift_.c1_hat * shift_.beta);
    rec.C0_ratio = (norms.phi_h3 * norms.phi_h3 + norms.psi_h2 * norms.psi_h2 + rec.dissipation_integral)
                   / (initial_energy_ + floor);
    rec.C0_empirical = records_.empty() ? rec.C0_ratio : std::max(records_.back().C0_empirical, rec.C0_ratio);

    prev_ = w;
    prev_dissipation_rate_ = norms.dissipation_rate;
    records_.push_back(rec);
    return records_.back();
}

double theorem_bound_audit(const std::vector<DiagnosticsRecord>& records) {
    double worst = 0.0;
    for (const auto& r : records) worst = std::max(worst, r.C0_ratio);
    return worst;
}

std::string series_header() {
    std::string h = "t,phi_h3,psi_h2,N,sup_v,sup_u,mass_res,bres_phi0,bres_psix0,bres_phixx0,C0_ratio";
    for (const auto name : kBoundaryIntegralNames) {
        h += ',';
        h += name;
    }
    return h;
}

std::string series_row(const DiagnosticsRecord& r) {
    std::vector<double> values = {r.t,      r.phi_h3, r.psi_h2, r.N, r.sup_v, r.sup_u, r.mass_residual,
                                  r.boundary_residuals[0], r.boundary_residuals[1],
                                  r.boundary_residuals[2], r.C0_ratio};
    values.insert(values.end(), r.boundary_integrals.begin(), r.boundary_integrals.end());
    return csv::join(values);
}

}  // namespace nsk
