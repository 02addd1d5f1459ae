// nsk_lab: command-line front end for the shock-profile laboratory.
#include "nsk/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nsk;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::string> out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_path, "JSON configuration file")->required();
    cmd->add_option("--out", common.out, "output directory (overrides output.dir)");
    cmd->add_option("--set", common.overrides, "override, section.key=value (repeatable)");
}

RunConfig load(const Common& common) {
    RunConfig config = load_config(common.config_path);
    for (const auto& assignment : common.overrides) apply_override(config, assignment);
    if (common.out) config.output.dir = *common.out;
    return config;
}

void print_kv(const char* key, double value) { std::printf("%s=%.10g\n", key, value); }

void print_warnings(const Setup& setup) {
    for (const auto& w : setup.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int cmd_rh(const Common& common, Phase& phase) {
    const RunConfig config = load(common);
    const ModelParams p = build_model(config);
    const auto [lax_plus, lax_minus] = lax_entropy_margin(p);
    const auto [r1, r2] = rankine_hugoniot_residuals(p);
    print_kv("v_minus", p.v_minus);
    print_kv("u_minus", p.u_minus);
    print_kv("v_plus", p.v_plus);
    print_kv("u_plus", p.u_plus);
    print_kv("s", p.s);
    print_kv("delta", p.delta);
    print_kv("lax_margin_plus", lax_plus);
    print_kv("lax_margin_minus", lax_minus);
    print_kv("existence_margin", profile_existence_margin(p));
    print_kv("rh_residual_mass", r1);
    print_kv("rh_residual_momentum", r2);
    if (profile_existence_margin(p) <= 0.0) {
        std::fprintf(stderr, "warning: existence margin is not positive; a monotone profile is not guaranteed\n");
    }
    phase = Phase::Config;
    return 0;
}

int cmd_profile(const Common& common, Phase& phase) {
    const RunConfig config = load(common);
    const ModelParams p = build_model(config);
    phase = Phase::Profile;
    const ShockProfile profile = solve_profile(p, profile_options(config));
    const fs::path dir(config.output.dir);
    fs::create_directories(dir);
    std::ofstream out(dir / "profile.csv", std::ios::binary);
    out << "xi,V,U,Vp,Vpp\n";
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
        const double row[] = {profile.xi[i], profile.V[i], profile.U[i], profile.Vp[i], profile.Vpp[i]};
        out << csv::join(row) << '\n';
    }
    const auto [fit_left, fit_right] = estimate_decay_rate(profile);
    print_kv("xi_half_width", profile.half_width());
    print_kv("c1_hat_left", profile.c1_hat_left);
    print_kv("c1_hat_right", profile.c1_hat_right);
    print_kv("fitted_rate_left", fit_left);
    print_kv("fitted_rate_right", fit_right);
    print_kv("first_integral_residual", first_integral_residual(profile));
    std::printf("wrote %s\n", (dir / "profile.csv").string().c_str());
    return 0;
}

int cmd_shift(const Common& common, Phase& phase, std::size_t samples) {
    const Setup setup = prepare(load(common), &phase);
    print_warnings(setup);
    const ShiftData& shift = setup.shift;
    print_kv("beta", shift.beta);
    print_kv("alpha", shift.alpha);
    print_kv("I_residual", shift.I_residual);
    print_kv("c1_hat", shift.c1_hat);
    const auto l1 = boundary_data_l1(shift);
    print_kv("A_W31_norm", l1[0] + l1[1] + l1[2] + l1[3]);

    const double T = setup.solver.t_final;
    std::printf("t,A,A1,A2,A3\n");
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(samples);
        const double row[] = {t, eval_A(shift, t, 0), eval_A(shift, t, 1), eval_A(shift, t, 2), eval_A(shift, t, 3)};
        std::printf("%s\n", csv::join(row).c_str());
    }
    return 0;
}

int cmd_simulate(const Common& common, Phase& phase) {
    const Setup setup = prepare(load(common), &phase);
    print_warnings(setup);
    phase = Phase::Solve;
    const fs::path dir(setup.resolved.output.dir);
    const SimulationOutput output = simulate(setup, dir);
    const DiagnosticsRecord& first = output.records.front();
    const DiagnosticsRecord& last = output.records.back();
    print_kv("alpha", setup.shift.alpha);
    print_kv("steps", static_cast<double>(output.result.steps));
    print_kv("newton_iterations", static_cast<double>(output.result.total_newton_iterations));
    print_kv("dt_halvings", static_cast<double>(output.result.dt_halvings));
    print_kv("N_initial", first.N);
    print_kv("N_final", last.N);
    print_kv("C0_empirical", last.C0_empirical);
    std::printf("wrote %s\n", (dir / "series.csv").string().c_str());
    return 0;
}

int cmd_audit(const Common& common, Phase& phase, const std::string& series_path) {
    const Setup setup = prepare(load(common), &phase);
    phase = Phase::Audit;
    const csv::Table series = csv::read(series_path);
    bool ok = true;
    for (const auto& check : audit_series(setup, series)) {
        std::printf("%s %-22s value=%.6e bound=%.6e\n", check.ok ? "PASS" : "FAIL", check.name.c_str(),
                    check.value, check.bound);
        ok = ok && check.ok;
    }
    if (!ok) {
        std::fprintf(stderr, "audit: violations found in %s\n", series_path.c_str());
        return 5;
    }
    return 0;
}

int cmd_convergence(const Common& common, Phase& phase, std::size_t factor, std::size_t levels) {
    const ConvergenceStudy study = convergence_study(load(common), factor, levels, &phase);
    std::printf("N,dx,dt,profile_error,self_difference,seconds\n");
    for (const auto& level : study.levels) {
        const double row[] = {static_cast<double>(level.N), level.dx, level.dt, level.profile_error,
                              level.self_difference, level.seconds};
        std::printf("%s\n", csv::join(row).c_str());
    }
    for (std::size_t k = 0; k < study.profile_orders.size(); ++k) {
        std::printf("order_profile_%zu=%.4f\n", k, study.profile_orders[k]);
    }
    for (std::size_t k = 0; k < study.self_orders.size(); ++k) {
        std::printf("order_self_%zu=%.4f\n", k, study.self_orders[k]);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Navier-Stokes-Korteweg viscous shock laboratory"};
    app.require_subcommand(1);

    Common common;
    std::size_t shift_samples = 200;
    std::string series_path;
    std::size_t factor = 2;
    std::size_t levels = 3;

    auto* rh = app.add_subcommand("rh", "end states, shock speed and margins");
    auto* profile = app.add_subcommand("profile", "solve the viscous shock profile and write profile.csv");
    auto* shift = app.add_subcommand("shift", "print alpha, I residual and the A(t) table");
    auto* simulate_cmd = app.add_subcommand("simulate", "run the half-line problem");
    auto* audit = app.add_subcommand("audit", "re-check invariants on a stored series");
    auto* convergence = app.add_subcommand("convergence", "grid refinement study");
    for (auto* cmd : {rh, profile, shift, simulate_cmd, audit, convergence}) add_common(cmd, common);
    shift->add_option("--samples", shift_samples, "number of t intervals in the table")->check(CLI::PositiveNumber);
    audit->add_option("--series", series_path, "series.csv from a previous simulate")->required();
    convergence->add_option("--factor", factor, "refinement factor")->check(CLI::Range(2, 8));
    convergence->add_option("--levels", levels, "number of levels")->check(CLI::Range(2, 6));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Phase phase = Phase::Config;
    try {
        if (*rh) return cmd_rh(common, phase);
        if (*profile) return cmd_profile(common, phase);
        if (*shift) return cmd_shift(common, phase, shift_samples);
        if (*simulate_cmd) return cmd_simulate(common, phase);
        if (*audit) return cmd_audit(common, phase, series_path);
        if (*convergence) return cmd_convergence(common, phase, factor, levels);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e, phase);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return phase == Phase::Solve ? 4 : 2;
    }
    return 0;
}
