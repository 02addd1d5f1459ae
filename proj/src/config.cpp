#include "nsk/config.hpp"

#include "nsk/error.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nsk {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
    throw Error(ErrorKind::Config, key + ": " + message);
}

double as_number(const json& value, const std::string& key) {
    if (!value.is_number()) fail(key, "expected a number");
    return value.get<double>();
}

std::size_t as_count(const json& value, const std::string& key) {
    if (!value.is_number_integer() && !value.is_number_unsigned()) fail(key, "expected an integer");
    const auto n = value.get<long long>();
    if (n < 0) fail(key, "must be non-negative");
    return static_cast<std::size_t>(n);
}

bool as_bool(const json& value, const std::string& key) {
    if (!value.is_boolean()) fail(key, "expected true or false");
    return value.get<bool>();
}

std::string as_string(const json& value, const std::string& key) {
    if (!value.is_string()) fail(key, "expected a string");
    return value.get<std::string>();
}

std::optional<double> as_optional(const json& value, const std::string& key) {
    if (value.is_null()) return std::nullopt;
    return as_number(value, key);
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;
using Section = std::map<std::string, Setter>;

const std::map<std::string, Section>& schema() {
    static const std::map<std::string, Section> table = {
        {"model",
         {{"p0", [](RunConfig& c, const json& v, const std::string& k) { c.model.p0 = as_number(v, k); }},
          {"gamma", [](RunConfig& c, const json& v, const std::string& k) { c.model.gamma = as_number(v, k); }},
          {"v_plus", [](RunConfig& c, const json& v, const std::string& k) { c.model.v_plus = as_number(v, k); }},
          {"u_plus", [](RunConfig& c, const json& v, const std::string& k) { c.model.u_plus = as_number(v, k); }},
          {"mu", [](RunConfig& c, const json& v, const std::string& k) { c.model.mu = as_number(v, k); }},
          {"kappa", [](RunConfig& c, const json& v, const std::string& k) { c.model.kappa = as_number(v, k); }}}},
        {"profile",
         {{"xi_half_width",
           [](RunConfig& c, const json& v, const std::string& k) { c.profile.xi_half_width = as_optional(v, k); }},
          {"ode_tol", [](RunConfig& c, const json& v, const std::string& k) { c.profile.ode_tol = as_number(v, k); }},
          {"eps_init", [](RunConfig& c, const json& v, const std::string& k) { c.profile.eps_init = as_number(v, k); }},
          {"samples", [](RunConfig& c, const json& v, const std::string& k) { c.profile.samples = as_count(v, k); }}}},
        {"shift",
         {{"beta", [](RunConfig& c, const json& v, const std::string& k) { c.shift.beta = as_optional(v, k); }}}},
        {"grid",
         {{"L", [](RunConfig& c, const json& v, const std::string& k) { c.grid.L = as_optional(v, k); }},
          {"N", [](RunConfig& c, const json& v, const std::string& k) { c.grid.N = as_count(v, k); }}}},
        {"time",
         {{"dt", [](RunConfig& c, const json& v, const std::string& k) { c.time.dt = as_optional(v, k); }},
          {"t_final", [](RunConfig& c, const json& v, const std::string& k) { c.time.t_final = as_number(v, k); }},
          {"theta", [](RunConfig& c, const json& v, const std::string& k) { c.time.theta = as_number(v, k); }}}},
        {"newton",
         {{"tol", [](RunConfig& c, const json& v, const std::string& k) { c.newton.tol = as_number(v, k); }},
          {"max_iter",
           [](RunConfig& c, const json& v, const std::string& k) {
               c.newton.max_iter = static_cast<int>(as_count(v, k));
           }},
          {"fd_jacobian",
           [](RunConfig& c, const json& v, const std::string& k) { c.newton.fd_jacobian = as_bool(v, k); }}}},
        {"perturbation",
         {{"kind", [](RunConfig& c, const json& v, const std::string& k) { c.perturbation.kind = as_string(v, k); }},
          {"amplitude",
           [](RunConfig& c, const json& v, const std::string& k) { c.perturbation.amplitude = as_number(v, k); }},
          {"center",
           [](RunConfig& c, const json& v, const std::string& k) { c.perturbation.center = as_optional(v, k); }},
          {"width", [](RunConfig& c, const json& v, const std::string& k) { c.perturbation.width = as_number(v, k); }}}},
        {"output",
         {{"dir", [](RunConfig& c, const json& v, const std::string& k) { c.output.dir = as_string(v, k); }},
          {"series_every",
           [](RunConfig& c, const json& v, const std::string& k) { c.output.series_every = as_count(v, k); }},
          {"snapshot_every",
           [](RunConfig& c, const json& v, const std::string& k) { c.output.snapshot_every = as_count(v, k); }}}},
    };
    return table;
}

json to_json(const RunConfig& c) {
    json j;
    j["model"] = {{"p0", c.model.p0},         {"gamma", c.model.gamma}, {"v_plus", c.model.v_plus},
                  {"u_plus", c.model.u_plus}, {"mu", c.model.mu},       {"kappa", c.model.kappa}};
    j["profile"] = {{"ode_tol", c.profile.ode_tol},
                    {"eps_init", c.profile.eps_init},
                    {"samples", c.profile.samples}};
    if (c.profile.xi_half_width) j["profile"]["xi_half_width"] = *c.profile.xi_half_width;
    j["shift"] = json::object();
    if (c.shift.beta) j["shift"]["beta"] = *c.shift.beta;
    j["grid"] = {{"N", c.grid.N}};
    if (c.grid.L) j["grid"]["L"] = *c.grid.L;
    j["time"] = {{"t_final", c.time.t_final}, {"theta", c.time.theta}};
    if (c.time.dt) j["time"]["dt"] = *c.time.dt;
    j["newton"] = {{"tol", c.newton.tol}, {"max_iter", c.newton.max_iter}, {"fd_jacobian", c.newton.fd_jacobian}};
    j["perturbation"] = {{"kind", c.perturbation.kind},
                         {"amplitude", c.perturbation.amplitude},
                         {"width", c.perturbation.width}};
    if (c.perturbation.center) j["perturbation"]["center"] = *c.perturbation.center;
    j["output"] = {{"dir", c.output.dir},
                   {"series_every", c.output.series_every},
                   {"snapshot_every", c.output.snapshot_every}};
    return j;
}

RunConfig from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::Config, "configuration must be a JSON object");
    RunConfig config;
    for (const auto& [section_name, section] : doc.items()) {
        const auto it = schema().find(section_name);
        if (it == schema().end()) fail(section_name, "unknown section");
        if (!section.is_object()) fail(section_name, "section must be an object");
        for (const auto& [key, value] : section.items()) {
            const std::string full = section_name + "." + key;
            const auto setter = it->second.find(key);
            if (setter == it->second.end()) fail(full, "unknown key");
            setter->second(config, value, full);
        }
    }
    for (const char* key : {"v_plus", "u_plus", "mu", "kappa"}) {
        if (!doc.contains("model") || !doc["model"].contains(key)) {
            fail(std::string("model.") + key, "required key is missing");
        }
    }
    validate(config);
    return config;
}

}  // namespace

void validate(const RunConfig& c) {
    auto require = [](bool ok, const char* key, const char* message) {
        if (!ok) fail(key, message);
    };
    require(c.model.p0 > 0.0, "model.p0", "must be positive");
    require(c.model.gamma >= 1.0, "model.gamma", "must be >= 1");
    require(c.model.v_plus > 0.0, "model.v_plus", "must be positive");
    require(c.model.u_plus < 0.0, "model.u_plus", "must be negative (2-shock with u_minus = 0)");
    require(c.model.mu > 0.0, "model.mu", "must be positive");
    require(c.model.kappa > 0.0, "model.kappa", "must be positive");
    require(!c.profile.xi_half_width || *c.profile.xi_half_width > 0.0, "profile.xi_half_width",
            "must be positive");
    require(c.profile.ode_tol > 0.0 && c.profile.ode_tol < 1e-3, "profile.ode_tol", "must lie in (0, 1e-3)");
    require(c.profile.eps_init > 0.0 && c.profile.eps_init < 1e-2, "profile.eps_init", "must lie in (0, 1e-2)");
    require(c.profile.samples >= 16, "profile.samples", "must be >= 16");
    require(!c.shift.beta || *c.shift.beta > 1.0, "shift.beta", "must be > 1");
    require(!c.grid.L || *c.grid.L > 0.0, "grid.L", "must be positive");
    require(c.grid.N >= 64, "grid.N", "must be >= 64");
    require(!c.time.dt || *c.time.dt > 0.0, "time.dt", "must be positive");
    require(c.time.t_final >= 0.0, "time.t_final", "must be non-negative");
    require(c.time.theta >= 0.5 && c.time.theta <= 1.0, "time.theta", "must lie in [0.5, 1]");
    require(c.newton.tol > 0.0, "newton.tol", "must be positive");
    require(c.newton.max_iter >= 1, "newton.max_iter", "must be >= 1");
    require(c.perturbation.kind == "none" || c.perturbation.kind == "bump", "perturbation.kind",
            "must be 'none' or 'bump'");
    require(c.perturbation.width > 0.0, "perturbation.width", "must be positive");
    require(c.output.series_every >= 1, "output.series_every", "must be >= 1");
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, std::string("malformed configuration: ") + e.what());
    }
    return from_json(doc);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw Error(ErrorKind::Config, "override must look like section.key=value, got '"
                                           + std::string(assignment) + "'");
    }
    const std::string section(assignment.substr(0, dot));
    const std::string key(assignment.substr(dot + 1, eq - dot - 1));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json doc = to_json(config);
    doc[section][key] = value;
    config = from_json(doc);
}

std::string emit_config(const RunConfig& config) {
    return to_json(config).dump(2) + "\n";
}

}  // namespace nsk
