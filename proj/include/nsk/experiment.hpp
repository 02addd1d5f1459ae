#pragma once

#include "nsk/config.hpp"
#include "nsk/csv.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/error.hpp"
#include "nsk/grid.hpp"
#include "nsk/initial_data.hpp"
#include "nsk/model.hpp"
#include "nsk/profile.hpp"
#include "nsk/shift.hpp"
#include "nsk/solver.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nsk {

/// Stage of an experiment; decides the exit code of an Error.
enum class Phase { Config, Profile, Setup, Solve, Audit };

/// 0 ok, 2 config, 3 profile existence, 4 solver, 5 audit.
int exit_code(const Error& error, Phase phase);

ModelParams build_model(const RunConfig& config);

ProfileOptions profile_options(const RunConfig& config);

/// Smallest admissible domain length: beta + s t_final + 20 / c1_hat.
double minimum_length(const ModelParams& params, double c1_hat, double beta, double t_final);

/// Everything a run needs, with every optional config field resolved.
struct Setup {
    RunConfig resolved;
    ModelParams params;
    std::shared_ptr<const ShockProfile> profile;
    double beta = 0.0;
    Grid grid;
    PerturbationSpec perturbation;
    FieldState initial;
    ShiftData shift;
    SolverConfig solver;
    std::vector<std::string> warnings;
};

/// Resolves defaults once the profile is known. `phase` tracks progress so a
/// caller catching Error can map it to an exit code.
Setup prepare(const RunConfig& config, Phase* phase = nullptr);

/// Same as prepare() but reuses an already solved profile (refinement studies).
Setup prepare(const RunConfig& config, std::shared_ptr<const ShockProfile> profile);

struct SimulationOutput {
    RunResult result;
    std::vector<DiagnosticsRecord> records;
};

/// Runs the prepared problem. With an output directory, writes series.csv,
/// effective_config.json and snap_t<time>.csv files there.
SimulationOutput simulate(const Setup& setup, const std::optional<std::filesystem::path>& out_dir = {});

std::string snapshot_name(double t);
std::string snapshot_csv(const FieldState& state, const Grid& grid, const ShiftData& shift);

struct AuditCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// Re-checks the invariants on a stored time series. Decay checks are only
/// applied to perturbed runs reaching t = 50, the horizon they are calibrated on.
std::vector<AuditCheck> audit_series(const Setup& setup, const csv::Table& series);

struct ConvergenceLevel {
    std::size_t N = 0;
    double dx = 0.0;
    double dt = 0.0;
    double profile_error = 0.0;  ///< sup |(v, u) - shifted profile| at t_final
    double self_difference = 0.0;  ///< sup difference to the next finer level on shared nodes
    double seconds = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceLevel> levels;
    std::vector<double> profile_orders;  ///< log(e_k / e_k+1) / log(factor)
    std::vector<double> self_orders;     ///< same for successive differences
};

/// Runs the configured problem with (dx, dt) divided by factor^k, k < levels,
/// on one fixed domain. Levels run concurrently.
ConvergenceStudy convergence_study(const RunConfig& config, std::size_t factor, std::size_t levels,
                                   Phase* phase = nullptr);

}  // namespace nsk
