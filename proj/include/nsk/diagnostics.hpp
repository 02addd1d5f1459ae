#pragma once

#include "nsk/grid.hpp"
#include "nsk/shift.hpp"
#include "nsk/solver.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace nsk {

/// Antiderivative perturbations phi = -int_x^L (v - V), psi = -int_x^L (u - U)
/// against the shifted profile (V, U)(x - st + alpha - beta), with spatial
/// derivatives: phi up to order 4, psi up to order 3.
struct PerturbationFields {
    double t = 0.0;
    double dx = 0.0;
    std::vector<double> phi, phi_x, phi_xx, phi_xxx, phi_xxxx;
    std::vector<double> psi, psi_x, psi_xx, psi_xxx;
    bool tail_decayed = true;
};

PerturbationFields compute_perturbation(const FieldState& state, const Grid& grid, const ShiftData& shift);

/// Derivative of nodal data: central differences inside, one-sided second order at the ends.
std::vector<double> differentiate(const std::vector<double>& f, double dx, int order);

struct SobolevNorms {
    double phi_h3 = 0.0;            ///< ||phi||_3
    double psi_h2 = 0.0;            ///< ||psi||_2
    double N = 0.0;                 ///< sqrt(||phi||_3^2 + ||psi||_2^2)
    double dissipation_rate = 0.0;  ///< ||phi_x||_3^2 + ||psi_x||_2^2
};

SobolevNorms sobolev_norms(const PerturbationFields& fields);

/// Same quantities recomputed straight from the state, without a PerturbationFields.
SobolevNorms sobolev_norms_direct(const FieldState& state, const Grid& grid, const ShiftData& shift);

/// (max |v - V|, max |u - U|) over the nodes.
std::pair<double, double> sup_distance(const FieldState& state, const Grid& grid, const ShiftData& shift);

/// int_0^L [v - V(x - st + alpha - beta)] minus
/// ( int_0^L [v0 - V(x + alpha - beta)] + int_0^t U(-s tau + alpha - beta) d tau ).
double mass_balance_residual(const FieldState& state, const FieldState& initial, const Grid& grid,
                             const ShiftData& shift);

inline constexpr std::array<std::string_view, 10> kBoundaryIntegralNames = {
    "bi_phi_psi",        "bi_psi_psix",        "bi_psix_phix",      "bi_psit_psix",
    "bi_psix_psixx",     "bi_psixt_psixx",     "bi_phixx_psi_pv5",  "bi_phix_phixx_v5",
    "bi_phixx_psixx_v5", "bi_psit_phixx",
};

struct DiagnosticsRecord {
    double t = 0.0;
    double phi_h3 = 0.0;
    double psi_h2 = 0.0;
    double N = 0.0;
    double sup_v = 0.0;
    double sup_u = 0.0;
    double mass_residual = 0.0;
    std::array<double, 3> boundary_residuals{};  ///< phi(0)-A, psi_x(0)-A', phi_xx(0)-A''/s^2
    std::array<double, 10> boundary_integrals{}; ///< |running int_0^t| of the wall integrands
    double dissipation_integral = 0.0;
    double C0_ratio = 0.0;
    double C0_empirical = 0.0;  ///< running sup of C0_ratio
    bool tail_decayed = true;
};

/// Observer that turns a stream of states into DiagnosticsRecords, keeping
/// the running time integrals.
class DiagnosticsMonitor {
public:
    DiagnosticsMonitor(const Grid& grid, const ShiftData& shift, const FieldState& initial);

    const DiagnosticsRecord& observe(const FieldState& state);

    [[nodiscard]] const std::vector<DiagnosticsRecord>& records() const { return records_; }
    [[nodiscard]] double initial_energy() const { return initial_energy_; }

private:
    struct WallValues {
        double t, phi, phi_x, phi_xx, psi, psi_x, psi_xx, v, V;
        std::array<double, 6> smooth;  // integrands without time derivatives
    };

    Grid grid_;
    ShiftData shift_;
    FieldState initial_;
    std::vector<DiagnosticsRecord> records_;
    WallValues prev_{};
    double prev_dissipation_rate_ = 0.0;
    double initial_energy_ = 0.0;
    std::array<double, 10> signed_integrals_{};
};

/// Sup over records of C0_ratio.
double theorem_bound_audit(const std::vector<DiagnosticsRecord>& records);

/// Time-series CSV header, one column per record field.
std::string series_header();
std::string series_row(const DiagnosticsRecord& record);

}  // namespace nsk
