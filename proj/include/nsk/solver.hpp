#pragma once

#include "nsk/banded.hpp"
#include "nsk/grid.hpp"
#include "nsk/model.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nsk {

/// Grid-sampled (v, u) at time t. On the half line u[0] = 0 and
/// (v[N], u[N]) = (v_plus, u_plus).
struct FieldState {
    double t = 0.0;
    std::vector<double> v;
    std::vector<double> u;
};

struct SolverConfig {
    double dt = 0.0;
    double theta = 0.5;
    double newton_tol = 1e-10;
    int newton_max = 25;
    double t_final = 0.0;
    bool fd_jacobian = false;
};

enum class Boundary {
    /// Wall at x = 0 (v even, u odd ghosts), Dirichlet pin at x = L.
    HalfLine,
    /// Nodes 0..N-1 wrap around; node N duplicates node 0. Test harness only.
    Periodic,
};

/// Second-order flux-form discretization of
///   v_t = u_x,  u_t = -p(v)_x + mu (u_x / v)_x + kappa (-v_xx / v^5 + 5 v_x^2 / (2 v^6))_x.
class Discretization {
public:
    Discretization(const Grid& grid, const ModelParams& params, Boundary boundary = Boundary::HalfLine);

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] Boundary boundary() const { return boundary_; }

    /// Time derivatives at every node; entries of fixed nodes are zero.
    void rhs(std::span<const double> v, std::span<const double> u, std::span<double> dv,
             std::span<double> du) const;

    /// d(rhs)/d(state) in interleaved ordering (v0, u0, v1, u1, ...). Half line only.
    void jacobian(std::span<const double> v, std::span<const double> u, BandedMatrix& jac) const;

    /// Same matrix by banded finite differences (column coloring).
    void jacobian_fd(std::span<const double> v, std::span<const double> u, BandedMatrix& jac) const;

    /// True for unknowns that the boundary conditions hold fixed.
    [[nodiscard]] bool is_fixed(std::size_t unknown) const;

    static constexpr int half_bandwidth = 5;

private:
    struct KortewegTerm {
        double value = 0.0;
        std::size_t nodes[4] = {0, 0, 0, 0};
        double grad[4] = {0, 0, 0, 0};
        int count = 0;
    };

    [[nodiscard]] KortewegTerm korteweg(std::span<const double> v, long j) const;
    [[nodiscard]] long wrap(long j) const;
    void check_positive(std::span<const double> v) const;

    Grid grid_;
    ModelParams params_;
    Boundary boundary_;
};

struct StepReport {
    int newton_iterations = 0;
    double residual = 0.0;
};

/// Implicit theta-method time stepper with banded Newton.
class Solver {
public:
    Solver(const Grid& grid, const ModelParams& params, const SolverConfig& config);

    [[nodiscard]] const Discretization& discretization() const { return disc_; }
    [[nodiscard]] const SolverConfig& config() const { return config_; }

    /// Advances by dt (default: config.dt). Throws Error(StepFailure) when
    /// Newton fails and Error(Positivity) when positivity cannot be kept.
    FieldState step(const FieldState& state, StepReport* report = nullptr);
    FieldState step(const FieldState& state, double dt, StepReport* report = nullptr);

private:
    Discretization disc_;
    SolverConfig config_;
    BandedMatrix jac_;
    std::vector<double> z_, z_old_, f_old_, f_, res_, dv_, du_, vbuf_, ubuf_;
};

/// Semidiscrete right-hand side for a state on the half line.
void semidiscrete_rhs(const FieldState& state, const ModelParams& params, const Grid& grid,
                      std::vector<double>& dv, std::vector<double>& du);

struct RunObservers {
    std::size_t series_every = 1;
    std::function<void(const FieldState&, std::size_t step)> on_series;
    std::size_t snapshot_every = 0;
    std::function<void(const FieldState&, std::size_t step)> on_snapshot;
    /// Corridor v_minus/2 <= v <= 3 v_plus/2; a violation aborts the run.
    bool monitor_corridor = true;
};

struct RunResult {
    FieldState final_state;
    std::size_t steps = 0;
    std::size_t total_newton_iterations = 0;
    std::size_t dt_halvings = 0;
};

/// Advances from initial.t to config.t_final. The observer sees step 0, every
/// series_every-th step and the final step.
RunResult run(const Grid& grid, const SolverConfig& config, const ModelParams& params,
              const FieldState& initial, const RunObservers& observers = {});

}  // namespace nsk
