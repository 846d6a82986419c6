#include "shocksim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "shocksim/errors.hpp"

namespace shocksim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_num(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has non-numeric value '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_num(key, v);
    if (x != std::floor(x)) throw ConfigError("key '" + key + "' must be an integer");
    return static_cast<int>(x);
}

datagen::Bump parse_bump(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    std::string field;
    datagen::Bump b;
    if (!(is >> field >> b.amp >> b.center.x1 >> b.center.x2 >> b.center.x3 >> b.radius.x1 >>
          b.radius.x2 >> b.radius.x3))
        throw ConfigError("key '" + key +
                          "' wants: <field> <amp> <c1> <c2> <c3> <r1> <r2> <r3>");
    if (field == "w")
        b.field = 0;
    else if (field == "z")
        b.field = 1;
    else if (field == "a2")
        b.field = 2;
    else if (field == "a3")
        b.field = 3;
    else
        throw ConfigError("key '" + key + "' has unknown field '" + field + "'");
    std::string rest;
    if (is >> rest) throw ConfigError("key '" + key + "' has trailing data '" + rest + "'");
    return b;
}

void apply(RunConfig& c, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "run.mode") {
        if (value == "profile-table") c.mode = RunMode::ProfileTable;
        else if (value == "family") c.mode = RunMode::Family;
        else if (value == "burgers-1d") c.mode = RunMode::Burgers1D;
        else if (value == "burgers-3d") c.mode = RunMode::Burgers3D;
        else if (value == "euler-3d") c.mode = RunMode::Euler3D;
        else if (value == "validate-ic") c.mode = RunMode::ValidateIC;
        else throw ConfigError("unknown mode '" + value + "'");
        return;
    }
    if (full == "run.epsilon") { c.epsilon = to_num(full, value); return; }
    if (full == "run.kappa0") { c.kappa0 = to_num(full, value); return; }
    if (full == "run.alpha") { c.alpha = to_num(full, value); return; }
    if (full == "grid.n1") { c.n1 = to_int(full, value); return; }
    if (full == "grid.n2") { c.n2 = to_int(full, value); return; }
    if (full == "grid.n3") { c.n3 = to_int(full, value); return; }
    if (full == "grid.extent1") { c.extent.x1 = to_num(full, value); return; }
    if (full == "grid.extent2") { c.extent.x2 = to_num(full, value); return; }
    if (full == "grid.extent3") { c.extent.x3 = to_num(full, value); return; }
    if (full == "time.ds") { c.ds = to_num(full, value); return; }
    if (full == "time.feedback") { c.feedback = to_num(full, value); return; }
    if (full == "time.s_max") { c.s_max = to_num(full, value); return; }
    if (full == "time.tau_t_floor") { c.tau_t_floor = to_num(full, value); return; }
    if (full == "output.dir") { c.out_dir = value; return; }
    if (full == "output.snapshot_format") {
        if (value != "csv" && value != "binary")
            throw ConfigError("output.snapshot_format must be csv or binary");
        c.snapshot_format = value;
        return;
    }
    if (full == "output.snapshot_every") { c.snapshot_every = to_num(full, value); return; }
    if (full == "output.monitor_every") { c.monitor_every = to_num(full, value); return; }
    if (full == "monitor.M") { c.M = to_num(full, value); return; }
    if (full == "monitor.ell") { c.ell = to_num(full, value); return; }
    if (full == "monitor.L") { c.L = to_num(full, value); return; }
    if (full == "monitor.delta") { c.delta = to_num(full, value); return; }
    if (full == "monitor.k") { c.k_energy = to_int(full, value); return; }
    if (full == "perturbation.random_bumps") {
        c.perturbation.random_bumps = to_int(full, value);
        return;
    }
    if (full == "perturbation.seed") {
        c.perturbation.seed = static_cast<unsigned>(to_int(full, value));
        return;
    }
    if (full == "perturbation.origin_hess") {
        std::istringstream is(value);
        if (!(is >> c.perturbation.origin_hess.a22 >> c.perturbation.origin_hess.a23 >>
              c.perturbation.origin_hess.a33))
            throw ConfigError("perturbation.origin_hess wants: <h22> <h23> <h33>");
        return;
    }
    if (full.rfind("perturbation.bump", 0) == 0) {
        c.perturbation.bumps.push_back(parse_bump(full, value));
        return;
    }
    if (full == "data.profile_taper") {
        if (value == "true" || value == "1") c.profile_taper = true;
        else if (value == "false" || value == "0") c.profile_taper = false;
        else throw ConfigError("data.profile_taper must be boolean");
        return;
    }
    if (full == "family.order") { c.family_order = to_int(full, value); return; }

    throw ConfigError("unknown key '" + full + "'");
}

} // namespace

double RunConfig::s0() const { return -std::log(epsilon); }

double RunConfig::stop_s() const {
    double stop = s_max;
    if (tau_t_floor > 0.0) {
        const double s_floor = -std::log(tau_t_floor);
        stop = stop > 0.0 ? std::min(stop, s_floor) : s_floor;
    }
    if (stop <= 0.0) stop = s0() + 2.0;
    return stop;
}

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
    RunConfig c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' at line " + std::to_string(lineno));
        apply(c, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    std::string canon = text;
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set wants section.key=value, got '" + ov + "'");
        const std::string full = trim(ov.substr(0, eq));
        const auto dot = full.find('.');
        if (dot == std::string::npos)
            throw ConfigError("--set key must be section.key, got '" + full + "'");
        apply(c, full.substr(0, dot), full.substr(dot + 1), trim(ov.substr(eq + 1)));
        canon += "\n--set " + ov;
    }
    c.canonical = canon;

    if (c.ds <= 0.0) throw ConfigError("time.ds must be positive");
    if (c.epsilon <= 0.0 || c.epsilon >= 1.0) throw ConfigError("run.epsilon out of (0,1)");
    if (c.alpha <= 0.0) throw ConfigError("run.alpha must be positive");
    if (c.mode == RunMode::Burgers1D) {
        c.n2 = 1;
        c.n3 = 1;
        c.extent.x2 = 0.0;
        c.extent.x3 = 0.0;
    }
    return c;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::ProfileTable: return "profile-table";
        case RunMode::Family: return "family";
        case RunMode::Burgers1D: return "burgers-1d";
        case RunMode::Burgers3D: return "burgers-3d";
        case RunMode::Euler3D: return "euler-3d";
        case RunMode::ValidateIC: return "validate-ic";
    }
    return "?";
}

} // namespace shocksim
