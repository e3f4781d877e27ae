// config.hpp: run configuration from a sectioned key = value text file.
// Unknown sections or keys are hard errors, and every constraint violation
// names the offending key. Initial data comes from explicit piece lists or
// from named generators.
#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fronttrack/diagnostics.hpp"

namespace fronttrack {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

}  // namespace detail

// Parsed key/value file with consumption tracking.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in, const std::string& name) {
        ConfigFile cf;
        cf.name_ = name;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
                section = detail::trim(line.substr(1, line.size() - 2));
                cf.sections_.insert(section);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = section + "." + detail::trim(line.substr(0, eq));
            cf.values_[key] = detail::trim(line.substr(eq + 1));
        }
        return cf;
    }

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        return parse(in, path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        consumed_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) {
        consumed_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key + ": not a number: '" + it->second + "'");
        }
    }

    long get_long(const std::string& key, long fallback) {
        consumed_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stol(it->second);
        } catch (const std::exception&) {
            throw ConfigError(key + ": not an integer: '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        consumed_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError(key + ": expected true/false");
    }

    std::vector<double> get_doubles(const std::string& key) {
        consumed_.insert(key);
        std::vector<double> out;
        const auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            if (!tok.empty()) out.push_back(std::stod(tok));
        }
        return out;
    }

    // every provided key must have been consumed by the schema
    void reject_unknown() const {
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key)) throw ConfigError("unknown key " + key + " in " + name_);
    }

private:
    std::string name_;
    std::set<std::string> sections_;
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

struct InitialSpec {
    std::string kind = "pieces";  // pieces | single-shock | single-rarefaction | random-bv
    std::vector<double> breakpoints;
    std::vector<Vec2> states;
    int family = 1;
    double strength = 0.1;
    double position = 0.0;
    double base_rho = 1.1;
    double base_v = 0.0;
    int jumps = 8;
    double tv = 0.15;
    double span = 0.8;
};

struct WildSpec {
    double dx = 1.0 / 200.0;
    double cfl = 0.45;
    int perturb_component = 1;  // 0 density, 1 momentum
    double perturb_center = 0.0;
    double perturb_width = 0.1;
    double perturb_l2 = 0.0;
    double trace_window = 0.05;
};

struct RunConfig {
    SystemParams system;
    EngineParams engine;
    double t_end = 0.5;
    int samples = 40;
    InitialSpec initial;
    WildSpec wild;
    double cone_r = 0.8;
    double cone_v = 0.0;

    static RunConfig load(const std::string& path) {
        ConfigFile cf = ConfigFile::load(path);
        return from_file(cf);
    }

    static RunConfig from_file(ConfigFile& cf) {
        RunConfig rc;
        rc.system.gamma = cf.get_double("system.gamma", 2.0);
        rc.system.state_box.rho_lo = cf.get_double("system.rho_min", 0.25);
        rc.system.state_box.rho_hi = cf.get_double("system.rho_max", 4.0);
        rc.system.state_box.v_abs = cf.get_double("system.v_abs", 2.0);
        rc.system.inv_bound = cf.get_double("system.inv_bound", 8.0);
        rc.system.c1 = cf.get_double("system.c1", 0.0);

        rc.engine.delta_nu = cf.get_double("engine.delta_nu", 0.02);
        rc.engine.eps_nu = cf.get_double("engine.eps_nu", 1e-4);
        rc.engine.kappa = cf.get_double("engine.kappa", 10.0);
        rc.engine.weight_c = cf.get_double("engine.weight_c", 1.0);
        rc.engine.track_weights = cf.get_bool("engine.track_weights", false);
        rc.engine.checkpoint_dt = cf.get_double("engine.checkpoint_dt", 0.0);
        rc.engine.max_events = cf.get_long("engine.max_events", 1000000);
        rc.engine.tv_limit = cf.get_double("engine.tv_limit", 0.5);
        rc.engine.solve.closeness_radius = cf.get_double("engine.closeness_radius", 0.5);
        const std::string policy = cf.get_string("engine.policy", "rankine-hugoniot");
        if (policy == "rankine-hugoniot")
            rc.engine.policy.mode = ShiftPolicySpec::Mode::rankine_hugoniot;
        else if (policy == "constant-offset")
            rc.engine.policy.mode = ShiftPolicySpec::Mode::constant_offset;
        else if (policy == "dissipation-greedy")
            rc.engine.policy.mode = ShiftPolicySpec::Mode::dissipation_greedy;
        else
            throw ConfigError("engine.policy: unknown mode '" + policy + "'");
        rc.engine.policy.offset = cf.get_double("engine.offset", 0.0);
        rc.t_end = cf.get_double("engine.t_end", 0.5);
        rc.samples = static_cast<int>(cf.get_long("engine.samples", 40));
        if (!(rc.t_end > 0.0)) throw ConfigError("engine.t_end must be > 0");
        if (rc.samples < 1) throw ConfigError("engine.samples must be >= 1");

        rc.initial.kind = cf.get_string("initial.kind", "pieces");
        if (rc.initial.kind != "pieces" && rc.initial.kind != "single-shock" &&
            rc.initial.kind != "single-rarefaction" && rc.initial.kind != "random-bv")
            throw ConfigError("initial.kind: unknown generator '" + rc.initial.kind + "'");
        rc.initial.breakpoints = cf.get_doubles("initial.breakpoints");
        const std::string states = cf.get_string("initial.states", "");
        if (!states.empty()) {
            std::stringstream ss(states);
            std::string tok;
            while (std::getline(ss, tok, ';')) {
                std::stringstream ps(tok);
                double rho = 0.0, v = 0.0;
                if (!(ps >> rho >> v)) throw ConfigError("initial.states: expected 'rho v' pairs separated by ';'");
                rc.initial.states.push_back({rho, rho * v});
            }
        }
        rc.initial.family = static_cast<int>(cf.get_long("initial.family", 1));
        rc.initial.strength = cf.get_double("initial.strength", 0.1);
        rc.initial.position = cf.get_double("initial.position", 0.0);
        rc.initial.base_rho = cf.get_double("initial.base_rho", 1.1);
        rc.initial.base_v = cf.get_double("initial.base_v", 0.0);
        rc.initial.jumps = static_cast<int>(cf.get_long("initial.jumps", 8));
        rc.initial.tv = cf.get_double("initial.tv", 0.15);
        rc.initial.span = cf.get_double("initial.span", 0.8);
        if (rc.initial.family != 1 && rc.initial.family != 2)
            throw ConfigError("initial.family must be 1 or 2");

        rc.wild.dx = cf.get_double("wild.dx", 1.0 / 200.0);
        rc.wild.cfl = cf.get_double("wild.cfl", 0.45);
        const std::string comp = cf.get_string("wild.perturb_component", "mom");
        if (comp == "mom")
            rc.wild.perturb_component = 1;
        else if (comp == "rho")
            rc.wild.perturb_component = 0;
        else
            throw ConfigError("wild.perturb_component must be rho or mom");
        rc.wild.perturb_center = cf.get_double("wild.perturb_center", 0.0);
        rc.wild.perturb_width = cf.get_double("wild.perturb_width", 0.1);
        rc.wild.perturb_l2 = cf.get_double("wild.perturb_l2", 0.0);
        rc.wild.trace_window = cf.get_double("wild.trace_window", 0.05);
        if (!(rc.wild.dx > 0.0)) throw ConfigError("wild.dx must be > 0");

        rc.cone_r = cf.get_double("cone.r", 0.8);
        rc.cone_v = cf.get_double("cone.v", 0.0);

        cf.reject_unknown();
        rc.system.validate();
        rc.engine.validate();
        return rc;
    }

    // Materialize the initial data; random-bv consumes the rng.
    PiecewiseConstant<Vec2> build_initial(const EulerSystem& sys, Rng& rng) const {
        PiecewiseConstant<Vec2> u0;
        if (initial.kind == "pieces") {
            if (initial.states.size() != initial.breakpoints.size() + 1)
                throw ConfigError("initial.states must have one more entry than initial.breakpoints");
            u0.xs = initial.breakpoints;
            u0.values = initial.states;
            if (!u0.valid()) throw ConfigError("initial.breakpoints must be ascending");
            return u0;
        }
        if (initial.kind == "single-shock" || initial.kind == "single-rarefaction") {
            const double sgn = initial.kind == "single-shock" ? 1.0 : -1.0;
            const Vec2 base{initial.base_rho, initial.base_rho * initial.base_v};
            const Family fam = initial.family == 1 ? Family::one : Family::two;
            u0.values.push_back(base);
            u0.values.push_back(forward_wave_curve(sys, base, fam, sgn * std::fabs(initial.strength)));
            u0.xs.push_back(initial.position);
            return u0;
        }
        if (initial.kind == "random-bv") {
            for (int attempt = 0; attempt < 100; ++attempt) {
                PiecewiseConstant<Vec2> cand;
                const Vec2 base{initial.base_rho, initial.base_rho * initial.base_v};
                cand.values.push_back(base);
                std::vector<double> sigmas(static_cast<std::size_t>(initial.jumps));
                double total = 0.0;
                for (auto& s : sigmas) {
                    s = rng.uniform(-1.0, 1.0);
                    total += std::fabs(s);
                }
                bool ok = true;
                Vec2 cur = base;
                for (int j = 0; j < initial.jumps; ++j) {
                    cand.xs.push_back(-0.5 * initial.span +
                                      initial.span * (j + rng.uniform(0.2, 0.8)) / initial.jumps);
                    const Family fam = rng.uniform() < 0.5 ? Family::one : Family::two;
                    try {
                        cur = forward_wave_curve(sys, cur, fam, sigmas[static_cast<std::size_t>(j)] *
                                                                    initial.tv / total);
                    } catch (const std::range_error&) {
                        ok = false;
                        break;
                    }
                    if (!sys.in_box(cur)) {
                        ok = false;
                        break;
                    }
                    cand.values.push_back(cur);
                }
                if (ok) return cand;
            }
            throw ConfigError("initial random-bv: could not generate data inside the box; widen the box or lower tv");
        }
        throw ConfigError("initial.kind: unknown generator '" + initial.kind + "'");
    }

    StabilityConfig stability_config(const EulerSystem& sys, Rng& rng) const {
        StabilityConfig sc;
        sc.psi0 = build_initial(sys, rng);
        sc.engine = engine;
        sc.dx = wild.dx;
        sc.cfl = wild.cfl;
        sc.perturb_component = wild.perturb_component;
        sc.perturb_center = wild.perturb_center;
        sc.perturb_width = wild.perturb_width;
        sc.perturb_l2 = wild.perturb_l2;
        sc.trace_window = wild.trace_window;
        sc.cone_r = cone_r;
        sc.cone_v = cone_v;
        sc.t_end = t_end;
        sc.samples = samples;
        return sc;
    }
};

}  // namespace fronttrack
