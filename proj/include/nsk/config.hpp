#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace nsk {

/// Every tunable of an experiment. Fields left unset are resolved once the
/// profile is known (see resolve_defaults).
struct RunConfig {
    struct Model {
        double p0 = 1.0;
        double gamma = 1.0;
        double v_plus = 0.0;
        double u_plus = 0.0;
        double mu = 0.0;
        double kappa = 0.0;
        bool operator==(const Model&) const = default;
    } model;

    struct Profile {
        std::optional<double> xi_half_width;
        double ode_tol = 1e-10;
        double eps_init = 1e-6;
        std::size_t samples = 4096;
        bool operator==(const Profile&) const = default;
    } profile;

    struct Shift {
        std::optional<double> beta;
        bool operator==(const Shift&) const = default;
    } shift;

    struct GridSection {
        std::optional<double> L;
        std::size_t N = 1600;
        bool operator==(const GridSection&) const = default;
    } grid;

    struct Time {
        std::optional<double> dt;
        double t_final = 50.0;
        double theta = 0.5;
        bool operator==(const Time&) const = default;
    } time;

    struct Newton {
        double tol = 1e-10;
        int max_iter = 25;
        bool fd_jacobian = false;
        bool operator==(const Newton&) const = default;
    } newton;

    struct Perturbation {
        std::string kind = "none";
        double amplitude = 0.0;
        std::optional<double> center;
        double width = 2.0;
        bool operator==(const Perturbation&) const = default;
    } perturbation;

    struct Output {
        std::string dir = "out";
        std::size_t series_every = 1;
        std::size_t snapshot_every = 0;
        bool operator==(const Output&) const = default;
    } output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses JSON configuration text with the sections above. Unknown keys,
/// missing required keys (model.v_plus, model.u_plus, model.mu,
/// model.kappa) and constraint violations raise Error(Config) naming the key.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Applies a `section.key=value` override; value is JSON, or a bare string.
void apply_override(RunConfig& config, std::string_view assignment);

/// JSON text of the config, optional fields omitted when unset.
std::string emit_config(const RunConfig& config);

/// Checks the constraints that do not depend on the profile.
void validate(const RunConfig& config);

}  // namespace nsk
