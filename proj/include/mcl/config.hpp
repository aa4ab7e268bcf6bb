// Flat `section.key = value` run configuration. Unknown keys are rejected;
// all module preconditions are validated at parse time with errors naming
// the offending key and line.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcl/initial.hpp"
#include "mcl/stepper.hpp"

namespace mcl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double Lx = 2.0 * std::numbers::pi;
    int Nx = 64;
    int Ny = 33;
    PhysParams physics;     // defaults: beta=1, a=1, delta=0, nu=mobility=relax=1
    StepConfig stepping;    // dt=1e-3, picard_tol=1e-10, picard_max=25
    int n_steps = 100;
    InitialCondition ic;    // flat interface at Lx/2, width 1
    std::string directory = "out";
    int snapshot_stride = 0;
    bool timeseries = true;
    int checkpoint_stride = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view v, const std::string& key, int line) {
    std::string buf(v);
    char* end = nullptr;
    const double x = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0')
        throw ConfigError("line " + std::to_string(line) + ": " + key +
                          ": expected a number, got '" + buf + "'");
    return x;
}

inline int parse_int(std::string_view v, const std::string& key, int line) {
    const double x = parse_double(v, key, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("line " + std::to_string(line) + ": " + key + ": expected an integer");
    return i;
}

inline bool parse_bool(std::string_view v, const std::string& key, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": " + key + ": expected a boolean");
}

inline InitialKind parse_kind(std::string_view v, int line) {
    if (v == "equilibrium") return InitialKind::Equilibrium;
    if (v == "flat") return InitialKind::FlatInterface;
    if (v == "tilted") return InitialKind::TiltedInterface;
    if (v == "perturbed") return InitialKind::PerturbedInterface;
    if (v == "shear") return InitialKind::ShearFlow;
    throw ConfigError("line " + std::to_string(line) +
                      ": ic.kind: expected equilibrium|flat|tilted|perturbed|shear");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view raw(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line;

        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = detail::trim(raw);
        if (raw.empty()) continue;

        const std::size_t eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'section.key = value'");
        const std::string key(detail::trim(raw.substr(0, eq)));
        const std::string_view val = detail::trim(raw.substr(eq + 1));
        if (val.empty())
            throw ConfigError("line " + std::to_string(line) + ": " + key + ": empty value");

        using detail::parse_bool;
        using detail::parse_double;
        using detail::parse_int;

        if (key == "grid.Lx") cfg.Lx = parse_double(val, key, line);
        else if (key == "grid.Nx") cfg.Nx = parse_int(val, key, line);
        else if (key == "grid.Ny") cfg.Ny = parse_int(val, key, line);
        else if (key == "physics.beta") cfg.physics.beta = parse_double(val, key, line);
        else if (key == "physics.a") cfg.physics.a = parse_double(val, key, line);
        else if (key == "physics.delta") cfg.physics.delta = parse_double(val, key, line);
        else if (key == "physics.nu") cfg.physics.nu = parse_double(val, key, line);
        else if (key == "physics.mobility") cfg.physics.mobility = parse_double(val, key, line);
        else if (key == "physics.relax") cfg.physics.relax = parse_double(val, key, line);
        else if (key == "stepping.dt") cfg.stepping.dt = parse_double(val, key, line);
        else if (key == "stepping.n_steps") cfg.n_steps = parse_int(val, key, line);
        else if (key == "stepping.picard_tol") cfg.stepping.picard_tol = parse_double(val, key, line);
        else if (key == "stepping.picard_max") cfg.stepping.picard_max = parse_int(val, key, line);
        else if (key == "stepping.freeze_velocity")
            cfg.stepping.freeze_velocity = parse_bool(val, key, line);
        else if (key == "ic.kind") cfg.ic.kind = detail::parse_kind(val, line);
        else if (key == "ic.x0") cfg.ic.x0 = parse_double(val, key, line);
        else if (key == "ic.width") cfg.ic.width = parse_double(val, key, line);
        else if (key == "ic.angle") cfg.ic.angle = parse_double(val, key, line);
        else if (key == "ic.amplitude") cfg.ic.amplitude = parse_double(val, key, line);
        else if (key == "ic.mode") cfg.ic.mode = parse_int(val, key, line);
        else if (key == "ic.value") cfg.ic.value = parse_double(val, key, line);
        else if (key == "output.directory") cfg.directory = std::string(val);
        else if (key == "output.snapshot_stride") cfg.snapshot_stride = parse_int(val, key, line);
        else if (key == "output.timeseries") cfg.timeseries = parse_bool(val, key, line);
        else if (key == "output.checkpoint_stride")
            cfg.checkpoint_stride = parse_int(val, key, line);
        else
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }

    // validate module preconditions, naming the offending key
    try {
        cfg.physics.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("physics: ") + e.what());
    }
    try {
        cfg.stepping.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("stepping: ") + e.what());
    }
    if (cfg.Lx <= 0.0) throw ConfigError("grid.Lx must be > 0");
    if (cfg.Nx < 4 || cfg.Nx % 2 != 0) throw ConfigError("grid.Nx must be even and >= 4");
    if (cfg.Ny < 5) throw ConfigError("grid.Ny must be >= 5");
    if (cfg.n_steps < 0) throw ConfigError("stepping.n_steps must be >= 0");
    if (cfg.snapshot_stride < 0) throw ConfigError("output.snapshot_stride must be >= 0");
    if (cfg.checkpoint_stride < 0) throw ConfigError("output.checkpoint_stride must be >= 0");
    if (!(cfg.ic.width > 0.0)) throw ConfigError("ic.width must be > 0");
    if (!(cfg.ic.angle > 0.0 && cfg.ic.angle < 180.0))
        throw ConfigError("ic.angle must be in (0, 180)");
    if (cfg.ic.mode < 0) throw ConfigError("ic.mode must be >= 0");
    return cfg;
}

}  // namespace mcl
