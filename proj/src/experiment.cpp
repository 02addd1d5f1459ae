#include "nsk/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace nsk {

namespace {

void set_phase(Phase* phase, Phase value) {
    if (phase) *phase = value;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    out << text;
}

double column_max_abs(const csv::Table& table, const std::string& name) {
    const std::size_t c = table.column(name);
    double m = 0.0;
    for (const auto& row : table.rows) m = std::max(m, std::abs(row.at(c)));
    return m;
}

// Row whose t is closest to the requested time.
const std::vector<double>& row_near(const csv::Table& table, double t) {
    const std::size_t c = table.column("t");
    const auto best = std::min_element(table.rows.begin(), table.rows.end(), [&](const auto& a, const auto& b) {
        return std::abs(a[c] - t) < std::abs(b[c] - t);
    });
    return *best;
}

}  // namespace

int exit_code(const Error& error, Phase phase) {
    switch (error.kind()) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Audit: return 5;
        case ErrorKind::Monotonicity:
        case ErrorKind::Overshoot:
        case ErrorKind::Fit: return 3;
        case ErrorKind::StepFailure: return 4;
        case ErrorKind::Positivity: return phase == Phase::Profile ? 3 : 4;
        default: break;
    }
    if (phase == Phase::Solve) return 4;
    if (phase == Phase::Profile) return 3;
    return 2;
}

ModelParams build_model(const RunConfig& config) {
    const PressureLaw pressure{config.model.p0, config.model.gamma};
    return solve_rankine_hugoniot(pressure, config.model.v_plus, config.model.u_plus, config.model.mu,
                                  config.model.kappa);
}

ProfileOptions profile_options(const RunConfig& config) {
    ProfileOptions options;
    options.xi_half_width = config.profile.xi_half_width.value_or(0.0);
    options.ode_tol = config.profile.ode_tol;
    options.eps_init = config.profile.eps_init;
    options.samples = config.profile.samples;
    return options;
}

double minimum_length(const ModelParams& params, double c1_hat, double beta, double t_final) {
    return beta + params.s * t_final + 20.0 / c1_hat;
}

Setup prepare(const RunConfig& config, Phase* phase) {
    set_phase(phase, Phase::Config);
    validate(config);
    const ModelParams params = build_model(config);
    set_phase(phase, Phase::Profile);
    auto profile = std::make_shared<const ShockProfile>(solve_profile(params, profile_options(config)));
    set_phase(phase, Phase::Setup);
    return prepare(config, std::move(profile));
}

Setup prepare(const RunConfig& config, std::shared_ptr<const ShockProfile> profile) {
    validate(config);
    Setup s;
    s.resolved = config;
    s.params = profile->params;
    s.profile = profile;
    RunConfig& r = s.resolved;
    const double c1 = profile->c1_hat();

    r.profile.xi_half_width = profile->half_width();
    s.beta = config.shift.beta.value_or(default_beta(*profile));
    r.shift.beta = s.beta;
    if (std::exp(-c1 * s.beta) > 1e-3) {
        std::ostringstream os;
        os << "beta = " << s.beta << " leaves a large initial boundary layer: exp(-c1 beta) = "
           << std::exp(-c1 * s.beta) << " > 1e-3";
        s.warnings.push_back(os.str());
    }
    if (profile_existence_margin(s.params) <= 0.0) {
        s.warnings.push_back("existence margin is not positive; the profile was checked for monotonicity only");
    }

    const double l_min = minimum_length(s.params, c1, s.beta, config.time.t_final);
    const double L = config.grid.L.value_or(std::floor(l_min) + 1.0);
    if (!(L > l_min)) {
        std::ostringstream os;
        os << "grid.L: " << L << " must exceed beta + s t_final + 20/c1 = " << l_min;
        throw Error(ErrorKind::Config, os.str());
    }
    r.grid.L = L;
    s.grid = Grid(L, config.grid.N);
    r.time.dt = config.time.dt.value_or(s.grid.dx());

    s.perturbation.kind = parse_perturbation_kind(config.perturbation.kind);
    s.perturbation.amplitude = config.perturbation.amplitude;
    s.perturbation.center = config.perturbation.center.value_or(s.beta);
    s.perturbation.width = config.perturbation.width;
    r.perturbation.center = s.perturbation.center;

    s.initial = make_initial_data(s.grid, *profile, s.beta, s.perturbation);
    s.shift = compute_alpha(s.initial.v, s.grid, profile, s.beta);

    s.solver.dt = *r.time.dt;
    s.solver.theta = config.time.theta;
    s.solver.newton_tol = config.newton.tol;
    s.solver.newton_max = config.newton.max_iter;
    s.solver.t_final = config.time.t_final;
    s.solver.fd_jacobian = config.newton.fd_jacobian;
    return s;
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snap_t%.6f.csv", t);
    return buf;
}

std::string snapshot_csv(const FieldState& state, const Grid& grid, const ShiftData& shift) {
    const PerturbationFields fields = compute_perturbation(state, grid, shift);
    const ModelParams& params = shift.profile->params;
    std::string out = "x,v,u,V,U,phi,psi\n";
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double x = grid.x(j);
        const ProfileSample ref = shift.profile->evaluate(x - params.s * state.t + shift.alpha - shift.beta);
        const double row[] = {x, state.v[j], state.u[j], ref.V, ref.U, fields.phi[j], fields.psi[j]};
        out += csv::join(row);
        out += '\n';
    }
    return out;
}

SimulationOutput simulate(const Setup& setup, const std::optional<std::filesystem::path>& out_dir) {
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_file(*out_dir / "effective_config.json", emit_config(setup.resolved));
    }
    DiagnosticsMonitor monitor(setup.grid, setup.shift, setup.initial);
    RunObservers observers;
    observers.series_every = setup.resolved.output.series_every;
    observers.on_series = [&](const FieldState& state, std::size_t) { monitor.observe(state); };
    observers.snapshot_every = setup.resolved.output.snapshot_every;
    if (out_dir) {
        observers.on_snapshot = [&](const FieldState& state, std::size_t) {
            write_file(*out_dir / snapshot_name(state.t), snapshot_csv(state, setup.grid, setup.shift));
        };
    }

    SimulationOutput output;
    output.result = run(setup.grid, setup.solver, setup.params, setup.initial, observers);
    output.records = monitor.records();

    if (out_dir) {
        std::string series = series_header() + "\n";
        for (const auto& record : output.records) series += series_row(record) + "\n";
        write_file(*out_dir / "series.csv", series);
    }
    return output;
}

std::vector<AuditCheck> audit_series(const Setup& setup, const csv::Table& series) {
    if (series.rows.empty()) throw Error(ErrorKind::Config, "series has no rows");
    std::vector<AuditCheck> checks;
    auto add = [&](std::string name, double value, double bound) {
        checks.push_back({std::move(name), value, bound, std::isfinite(value) && value <= bound});
    };

    const double dx = setup.grid.dx();
    const double dt = setup.solver.dt;
    const double grid_tol = 10.0 * (dx * dx + dt * dt);
    const double layer = std::exp(-setup.profile->c1_hat() * setup.beta);

    double non_finite = 0.0;
    for (const auto& row : series.rows) {
        for (double value : row) non_finite += std::isfinite(value) ? 0.0 : 1.0;
    }
    add("finite_values", non_finite, 0.0);
    add("mass_balance", column_max_abs(series, "mass_res"), 1e-4 * setup.params.delta * setup.grid.L);
    for (const char* name : {"bres_phi0", "bres_psix0", "bres_phixx0"}) {
        add(name, column_max_abs(series, name), grid_tol);
    }
    for (const auto name : kBoundaryIntegralNames) {
        add(std::string(name), column_max_abs(series, std::string(name)), 10.0 * layer + grid_tol);
    }
    add("C0_ratio", column_max_abs(series, "C0_ratio"), std::numeric_limits<double>::max());

    const double T = series.rows.back()[series.column("t")];
    if (setup.perturbation.kind == PerturbationKind::Bump && T >= 50.0) {
        const std::size_t n = series.column("N");
        const double n_end = series.rows.back()[n];
        const double n_half = row_near(series, 0.5 * T)[n];
        const double n_five = row_near(series, 5.0)[n];
        add("N_end_below_N_half", n_end / n_half, 1.0 - 1e-12);
        add("N_half_below_N_5", n_half / n_five, 1.0 - 1e-12);
        for (const char* name : {"sup_v", "sup_u"}) {
            const std::size_t c = series.column(name);
            add(std::string(name) + "_decay", series.rows.back()[c] / column_max_abs(series, name), 0.2);
        }
    }
    return checks;
}

ConvergenceStudy convergence_study(const RunConfig& config, std::size_t factor, std::size_t levels,
                                   Phase* phase) {
    if (factor < 2) throw Error(ErrorKind::Config, "convergence factor must be >= 2");
    if (levels < 2) throw Error(ErrorKind::Config, "convergence needs at least 2 levels");
    const Setup base = prepare(config, phase);

    std::vector<Setup> setups;
    std::size_t scale = 1;
    for (std::size_t k = 0; k < levels; ++k, scale *= factor) {
        RunConfig level = base.resolved;
        level.grid.N = base.grid.N * scale;
        level.time.dt = base.solver.dt / static_cast<double>(scale);
        setups.push_back(prepare(level, base.profile));
    }

    set_phase(phase, Phase::Solve);
    std::vector<std::future<std::pair<FieldState, double>>> jobs;
    for (const Setup& s : setups) {
        jobs.push_back(std::async(std::launch::async, [&s] {
            const auto start = std::chrono::steady_clock::now();
            FieldState final_state = run(s.grid, s.solver, s.params, s.initial).final_state;
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            return std::make_pair(std::move(final_state), elapsed.count());
        }));
    }
    std::vector<FieldState> finals;
    ConvergenceStudy study;
    // the finest level has nothing to compare against

    for (std::size_t k = 0; k < levels; ++k) {
        auto [state, seconds] = jobs[k].get();
        const auto [ev, eu] = sup_distance(state, setups[k].grid, setups[k].shift);
        study.levels.push_back({setups[k].grid.N, setups[k].grid.dx(), setups[k].solver.dt, std::max(ev, eu),
                                std::numeric_limits<double>::quiet_NaN(), seconds});
        finals.push_back(std::move(state));
    }
    for (std::size_t k = 0; k + 1 < levels; ++k) {
        double diff = 0.0;
        for (std::size_t j = 0; j < finals[k].v.size(); ++j) {
            diff = std::max(diff, std::abs(finals[k].v[j] - finals[k + 1].v[j * factor]));
            diff = std::max(diff, std::abs(finals[k].u[j] - finals[k + 1].u[j * factor]));
        }
        study.levels[k].self_difference = diff;
    }
    const double log_f = std::log(static_cast<double>(factor));
    for (std::size_t k = 0; k + 1 < levels; ++k) {
        study.profile_orders.push_back(std::log(study.levels[k].profile_error / study.levels[k + 1].profile_error)
                                       / log_f);
        if (k + 2 < levels) {
            study.self_orders.push_back(
                std::log(study.levels[k].self_difference / study.levels[k + 1].self_difference) / log_f);
        }
    }
    return study;
}

}  // namespace nsk
