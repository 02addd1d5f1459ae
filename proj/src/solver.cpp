#include "nsk/solver.hpp"

#include "nsk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsk {

Discretization::Discretization(const Grid& grid, const ModelParams& params, Boundary boundary)
    : grid_(grid), params_(params), boundary_(boundary) {}

long Discretization::wrap(long j) const {
    const auto N = static_cast<long>(grid_.N);
    if (boundary_ == Boundary::Periodic) return ((j % N) + N) % N;
    return j < 0 ? -j : j;  // even extension of v across the wall
}

void Discretization::check_positive(std::span<const double> v) const {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] > 0.0)) {
            std::ostringstream os;
            os << "specific volume lost positivity at node " << j << " (v = " << v[j] << ")";
            throw Error(ErrorKind::Positivity, os.str());
        }
    }
}

Discretization::KortewegTerm Discretization::korteweg(std::span<const double> v, long j) const {
    const double dx = grid_.dx();
    KortewegTerm out;
    long offsets[4] = {0, 0, 0, 0};
    double w1[4] = {0, 0, 0, 0};
    double w2[4] = {0, 0, 0, 0};
    int count = 0;
    if (boundary_ == Boundary::HalfLine && j == static_cast<long>(grid_.N)) {
        // One-sided second-order differences at the pinned right end.
        count = 4;
        const long o[4] = {0, -1, -2, -3};
        const double a[4] = {3.0, -4.0, 1.0, 0.0};
        const double b[4] = {2.0, -5.0, 4.0, -1.0};
        for (int k = 0; k < 4; ++k) {
            offsets[k] = o[k];
            w1[k] = a[k] / (2.0 * dx);
            w2[k] = b[k] / (dx * dx);
        }
    } else {
        count = 3;
        const long o[3] = {-1, 0, 1};
        const double a[3] = {-1.0, 0.0, 1.0};
        const double b[3] = {1.0, -2.0, 1.0};
        for (int k = 0; k < 3; ++k) {
            offsets[k] = o[k];
            w1[k] = a[k] / (2.0 * dx);
            w2[k] = b[k] / (dx * dx);
        }
    }
    const double vc = v[static_cast<std::size_t>(wrap(j))];
    double d1 = 0.0;
    double d2 = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto node = static_cast<std::size_t>(wrap(j + offsets[k]));
        out.nodes[k] = node;
        d1 += w1[k] * v[node];
        d2 += w2[k] * v[node];
    }
    const double inv5 = 1.0 / std::pow(vc, 5);
    const double inv6 = inv5 / vc;
    const double inv7 = inv6 / vc;
    out.value = -d2 * inv5 + 2.5 * d1 * d1 * inv6;
    out.count = count;
    for (int k = 0; k < count; ++k) {
        out.grad[k] = -inv5 * w2[k] + 5.0 * d1 * inv6 * w1[k];
        if (offsets[k] == 0) out.grad[k] += 5.0 * d2 * inv6 - 15.0 * d1 * d1 * inv7;
    }
    return out;
}

void Discretization::rhs(std::span<const double> v, std::span<const double> u,
                         std::span<double> dv, std::span<double> du) const {
    check_positive(v);
    const std::size_t N = grid_.N;
    const double dx = grid_.dx();
    const double mu = params_.mu;
    const double kappa = params_.kappa;
    const auto& pressure = params_.pressure;
    const bool periodic = boundary_ == Boundary::Periodic;
    const std::size_t nodes_k = periodic ? N : N + 1;

    std::vector<double> K(nodes_k);
    for (std::size_t j = 0; j < nodes_k; ++j) K[j] = korteweg(v, static_cast<long>(j)).value;

    // Momentum flux G at faces j + 1/2, j = 0..N-1.
    std::vector<double> G(N);
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t jp = periodic ? (j + 1) % N : j + 1;
        const double m = 0.5 * (v[j] + v[jp]);
        G[j] = -pressure.p(m) + mu * (u[jp] - u[j]) / (dx * m) + 0.5 * kappa * (K[j] + K[jp]);
    }

    std::fill(dv.begin(), dv.end(), 0.0);
    std::fill(du.begin(), du.end(), 0.0);
    if (periodic) {
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t jp = (j + 1) % N;
            const std::size_t jm = (j + N - 1) % N;
            dv[j] = (u[jp] - u[jm]) / (2.0 * dx);
            du[j] = (G[j] - G[jm]) / dx;
        }
        dv[N] = dv[0];
        du[N] = du[0];
        return;
    }
    dv[0] = u[1] / dx;  // u_{-1} = -u_1
    for (std::size_t j = 1; j < N; ++j) {
        dv[j] = (u[j + 1] - u[j - 1]) / (2.0 * dx);
        du[j] = (G[j] - G[j - 1]) / dx;
    }
}

bool Discretization::is_fixed(std::size_t unknown) const {
    const std::size_t N = grid_.N;
    return unknown == 1 || unknown == 2 * N || unknown == 2 * N + 1;
}

void Discretization::jacobian(std::span<const double> v, std::span<const double> u,
                              BandedMatrix& jac) const {
    if (boundary_ != Boundary::HalfLine) {
        throw Error(ErrorKind::Domain, "analytic Jacobian is only assembled on the half line");
    }
    check_positive(v);
    jac.zero();
    const std::size_t N = grid_.N;
    const double dx = grid_.dx();
    const double mu = params_.mu;
    const double kappa = params_.kappa;
    const auto& pressure = params_.pressure;

    std::vector<KortewegTerm> K(N + 1);
    for (std::size_t j = 0; j <= N; ++j) K[j] = korteweg(v, static_cast<long>(j));

    auto vcol = [](std::size_t n) { return 2 * n; };
    auto ucol = [](std::size_t n) { return 2 * n + 1; };

    // Each face flux feeds the momentum rows on both sides.
    for (std::size_t j = 0; j < N; ++j) {
        const double m = 0.5 * (v[j] + v[j + 1]);
        const double dG_dv = 0.5 * (-pressure.dp(m) - mu * (u[j + 1] - u[j]) / (dx * m * m));
        const double dG_du = mu / (dx * m);
        struct Term { std::size_t col; double value; };
        std::vector<Term> terms;
        terms.reserve(12);
        terms.push_back({vcol(j), dG_dv});
        terms.push_back({vcol(j + 1), dG_dv});
        terms.push_back({ucol(j), -dG_du});
        terms.push_back({ucol(j + 1), dG_du});
        for (const std::size_t side : {j, j + 1}) {
            for (int k = 0; k < K[side].count; ++k) {
                terms.push_back({vcol(K[side].nodes[k]), 0.5 * kappa * K[side].grad[k]});
            }
        }
        const auto add_row = [&](std::size_t node, double sign) {
            if (node < 1 || node >= N) return;
            for (const auto& t : terms) jac(ucol(node), t.col) += sign * t.value / dx;
        };
        add_row(j, 1.0);
        add_row(j + 1, -1.0);
    }

    jac(vcol(0), ucol(1)) += 1.0 / dx;
    for (std::size_t j = 1; j < N; ++j) {
        jac(vcol(j), ucol(j + 1)) += 1.0 / (2.0 * dx);
        jac(vcol(j), ucol(j - 1)) -= 1.0 / (2.0 * dx);
    }
}

void Discretization::jacobian_fd(std::span<const double> v, std::span<const double> u,
                                 BandedMatrix& jac) const {
    if (boundary_ != Boundary::HalfLine) {
        throw Error(ErrorKind::Domain, "finite-difference Jacobian is only assembled on the half line");
    }
    jac.zero();
    const std::size_t N = grid_.N;
    const std::size_t n = 2 * (N + 1);
    const int bw = half_bandwidth;
    const std::size_t colors = static_cast<std::size_t>(2 * bw + 1);

    std::vector<double> vp(v.begin(), v.end()), up(u.begin(), u.end());
    std::vector<double> vm(v.begin(), v.end()), um(u.begin(), u.end());
    std::vector<double> dvp(N + 1), dup(N + 1), dvm(N + 1), dum(N + 1);
    std::vector<double> step(n, 0.0);

    auto value = [&](std::vector<double>& vv, std::vector<double>& uu, std::size_t k) -> double& {
        return k % 2 == 0 ? vv[k / 2] : uu[k / 2];
    };
    for (std::size_t color = 0; color < colors; ++color) {
        vp.assign(v.begin(), v.end());
        up.assign(u.begin(), u.end());
        vm.assign(v.begin(), v.end());
        um.assign(u.begin(), u.end());
        for (std::size_t k = color; k < n; k += colors) {
            const double base = k % 2 == 0 ? v[k / 2] : u[k / 2];
            step[k] = 1e-6 * std::max(1.0, std::abs(base));
            value(vp, up, k) = base + step[k];
            value(vm, um, k) = base - step[k];
        }
        rhs(vp, up, dvp, dup);
        rhs(vm, um, dvm, dum);
        for (std::size_t k = color; k < n; k += colors) {
            const std::size_t lo = k >= static_cast<std::size_t>(bw) ? k - bw : 0;
            const std::size_t hi = std::min(n - 1, k + bw);
            for (std::size_t r = lo; r <= hi; ++r) {
                const double fp = r % 2 == 0 ? dvp[r / 2] : dup[r / 2];
                const double fm = r % 2 == 0 ? dvm[r / 2] : dum[r / 2];
                jac(r, k) = (fp - fm) / (2.0 * step[k]);
            }
        }
    }
}

void semidiscrete_rhs(const FieldState& state, const ModelParams& params, const Grid& grid,
                      std::vector<double>& dv, std::vector<double>& du) {
    dv.resize(grid.nodes());
    du.resize(grid.nodes());
    Discretization(grid, params).rhs(state.v, state.u, dv, du);
}

// ---------------------------------------------------------------------------

Solver::Solver(const Grid& grid, const ModelParams& params, const SolverConfig& config)
    : disc_(grid, params), config_(config),
      jac_(2 * grid.nodes(), Discretization::half_bandwidth, Discretization::half_bandwidth) {
    if (!(config.theta >= 0.5 && config.theta <= 1.0)) {
        throw Error(ErrorKind::Domain, "theta must lie in [0.5, 1]");
    }
    if (config.newton_max < 1) throw Error(ErrorKind::Domain, "newton_max must be positive");
    const std::size_t n = 2 * grid.nodes();
    for (auto* buf : {&z_, &z_old_, &f_old_, &f_, &res_}) buf->assign(n, 0.0);
    for (auto* buf : {&dv_, &du_, &vbuf_, &ubuf_}) buf->assign(grid.nodes(), 0.0);
}

FieldState Solver::step(const FieldState& state, StepReport* report) {
    return step(state, config_.dt, report);
}

FieldState Solver::step(const FieldState& state, double dt, StepReport* report) {
    if (!(dt > 0.0)) throw Error(ErrorKind::Domain, "time step must be positive");
    const std::size_t nodes = disc_.grid().nodes();
    const std::size_t n = 2 * nodes;
    const double theta = config_.theta;

    auto interleave = [&](std::span<const double> v, std::span<const double> u, std::vector<double>& z) {
        for (std::size_t j = 0; j < nodes; ++j) {
            z[2 * j] = v[j];
            z[2 * j + 1] = u[j];
        }
    };
    auto split = [&](const std::vector<double>& z) {
        for (std::size_t j = 0; j < nodes; ++j) {
            vbuf_[j] = z[2 * j];
            ubuf_[j] = z[2 * j + 1];
        }
    };
    auto eval_f = [&](std::vector<double>& out) {
        split(z_);
        disc_.rhs(vbuf_, ubuf_, dv_, du_);
        interleave(dv_, du_, out);
    };
    auto residual = [&]() {
        eval_f(f_);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            res_[k] = disc_.is_fixed(k)
                          ? z_[k] - z_old_[k]
                          : z_[k] - z_old_[k] - dt * (theta * f_[k] + (1.0 - theta) * f_old_[k]);
            worst = std::max(worst, std::abs(res_[k]));
        }
        return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
    };

    interleave(state.v, state.u, z_old_);
    z_ = z_old_;
    eval_f(f_old_);
    double rnorm = residual();

    int iterations = 0;
    while (iterations == 0 || !(rnorm < config_.newton_tol)) {
        if (iterations == config_.newton_max) {
            std::ostringstream os;
            os << "Newton did not converge in " << config_.newton_max << " iterations (residual "
               << rnorm << ", dt = " << dt << ")";
            throw Error(ErrorKind::StepFailure, os.str());
        }
        split(z_);
        if (config_.fd_jacobian) disc_.jacobian_fd(vbuf_, ubuf_, jac_);
        else disc_.jacobian(vbuf_, ubuf_, jac_);
        // J_R = I - dt theta df/dz on free rows, identity on fixed rows.
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t lo = r >= 5 ? r - 5 : 0;
            const std::size_t hi = std::min(n - 1, r + 5);
            for (std::size_t c = lo; c <= hi; ++c) {
                double& entry = jac_(r, c);
                entry = disc_.is_fixed(r) ? 0.0 : -dt * theta * entry;
            }
            jac_(r, r) += 1.0;
        }
        std::vector<double> delta(res_.size());
        for (std::size_t k = 0; k < n; ++k) delta[k] = -res_[k];
        if (!jac_.solve(delta)) throw Error(ErrorKind::StepFailure, "singular Newton matrix");

        double lambda = 1.0;
        bool positive = false;
        std::vector<double> trial(n);
        for (int attempt = 0; attempt <= 10; ++attempt) {
            positive = true;
            for (std::size_t k = 0; k < n; ++k) {
                trial[k] = z_[k] + lambda * delta[k];
                if (k % 2 == 0 && !(trial[k] > 0.0)) positive = false;
            }
            if (positive) break;
            lambda *= 0.5;
        }
        if (!positive) {
            throw Error(ErrorKind::StepFailure, "Newton update keeps losing positivity after 10 halvings");
        }
        z_ = trial;
        ++iterations;
        rnorm = residual();
        if (!std::isfinite(rnorm)) throw Error(ErrorKind::StepFailure, "Newton iterate diverged");
    }

    if (report != nullptr) {
        report->newton_iterations = iterations;
        report->residual = rnorm;
    }
    FieldState out;
    out.t = state.t + dt;
    split(z_);
    out.v = vbuf_;
    out.u = ubuf_;
    return out;
}

// ---------------------------------------------------------------------------

RunResult run(const Grid& grid, const SolverConfig& config, const ModelParams& params,
              const FieldState& initial, const RunObservers& observers) {
    if (initial.v.size() != grid.nodes() || initial.u.size() != grid.nodes()) {
        throw Error(ErrorKind::Domain, "initial state does not match the grid");
    }
    if (initial.u.front() != 0.0) throw Error(ErrorKind::Domain, "initial data must satisfy u(0) = 0");
    Solver solver(grid, params, config);

    RunResult result;
    result.final_state = initial;
    const double span = config.t_final - initial.t;
    std::size_t steps = 0;
    double dt = config.dt;
    if (span > 0.0) {
        if (!(config.dt > 0.0)) throw Error(ErrorKind::Domain, "time step must be positive");
        steps = static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9));
        dt = span / static_cast<double>(steps);
    }

    const double lo = 0.5 * params.v_minus;
    const double hi = 1.5 * params.v_plus;
    auto check_corridor = [&](const FieldState& s) {
        if (!observers.monitor_corridor) return;
        for (std::size_t j = 0; j < s.v.size(); ++j) {
            if (s.v[j] < lo || s.v[j] > hi) {
                std::ostringstream os;
                os << "v = " << s.v[j] << " left the corridor [" << lo << ", " << hi << "] at x = "
                   << grid.x(j) << ", t = " << s.t;
                throw Error(ErrorKind::Positivity, os.str());
            }
        }
    };

    check_corridor(initial);
    if (observers.on_series) observers.on_series(initial, 0);
    if (observers.on_snapshot && observers.snapshot_every > 0) observers.on_snapshot(initial, 0);

    FieldState state = initial;
    for (std::size_t k = 1; k <= steps; ++k) {
        StepReport report;
        const double t_target = initial.t + static_cast<double>(k) * dt;
        try {
            state = solver.step(state, t_target - state.t, &report);
            result.total_newton_iterations += static_cast<std::size_t>(report.newton_iterations);
        } catch (const Error& first) {
            if (first.kind() != ErrorKind::StepFailure && first.kind() != ErrorKind::Positivity) throw;
            try {
                const double half = 0.5 * (t_target - state.t);
                FieldState mid = solver.step(state, half, &report);
                result.total_newton_iterations += static_cast<std::size_t>(report.newton_iterations);
                state = solver.step(mid, t_target - mid.t, &report);
                result.total_newton_iterations += static_cast<std::size_t>(report.newton_iterations);
                ++result.dt_halvings;
            } catch (const Error& second) {
                std::ostringstream os;
                os << "at t = " << state.t << ": " << second.what();
                throw Error(ErrorKind::StepFailure, os.str());
            }
        }
        state.t = t_target;
        check_corridor(state);
        const bool last = k == steps;
        if (observers.on_series && (last || (observers.series_every > 0 && k % observers.series_every == 0))) {
            observers.on_series(state, k);
        }
        if (observers.on_snapshot
            && (last || (observers.snapshot_every > 0 && k % observers.snapshot_every == 0))) {
            observers.on_snapshot(state, k);
        }
    }
    if (steps == 0 && observers.on_snapshot && observers.snapshot_every == 0) {
        observers.on_snapshot(state, 0);
    }
    result.final_state = std::move(state);
    result.steps = steps;
    return result;
}

}  // namespace nsk
