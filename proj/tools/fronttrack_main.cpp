// fronttrack: front-tracking evolution and stability diagnostics for the
// isentropic Euler system.
//
// Subcommands:
//   riemann    exact two-wave resolution of a state pair, JSON on stdout
//   evolve     run the front-tracking evolution, emit snapshots + logs
//   stability  compare against the finite-volume reference inside the cone
//   check      canned property suites (interactions, weights, conditionH)
//   sweep      parameter sweeps with concurrent workers, aggregated CSV

#include <filesystem>
#include <future>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fronttrack/config.hpp"
#include "fronttrack/io.hpp"

using namespace fronttrack;
namespace fs = std::filesystem;

namespace {

Vec2 parse_state(const std::string& text, const std::string& what) {
    std::stringstream ss(text);
    double rho = 0.0, v = 0.0;
    if (!(ss >> rho >> v)) throw ConfigError(what + ": expected 'rho v'");
    return {rho, rho * v};
}

// Shared by evolve/stability: the reference trajectory from the projected
// initial data plus the configured perturbation.
WildTrajectory make_wild(const EulerSystem& sys, const RunConfig& rc, const PiecewiseConstant<Vec2>& u0,
                         double t_end) {
    const double lambda_hat = 2.0 * sys.certificate().big_l;
    const double pad = lambda_hat * t_end + std::max(4.0 * rc.wild.trace_window, 16.0 * rc.wild.dx);
    GridSolution g0 = project_to_grid(u0, -rc.cone_r - pad, rc.cone_r + pad, rc.wild.dx);
    apply_bump(g0, rc.wild.perturb_component, rc.wild.perturb_center, rc.wild.perturb_width,
               rc.wild.perturb_l2);
    WildTrajectory traj(sys, g0, rc.wild.cfl, lambda_hat);
    traj.run_to(t_end);
    return traj;
}

int cmd_riemann(const std::string& left, const std::string& right, double gamma, double rho_min,
                double rho_max, double v_abs) {
    SystemParams sp;
    sp.gamma = gamma;
    sp.state_box = {rho_min, rho_max, v_abs};
    EulerSystem sys(sp);
    const Vec2 ul = parse_state(left, "--left");
    const Vec2 ur = parse_state(right, "--right");
    if (!sys.in_box(ul)) throw ConfigError("--left: state outside the certified box");
    if (!sys.in_box(ur)) throw ConfigError("--right: state outside the certified box");

    const auto fan = solve_riemann(sys, ul, ur);
    nlohmann::json j;
    j["schema"] = "fronttrack-riemann v1";
    j["sigma1"] = fan.sigma1;
    j["sigma2"] = fan.sigma2;
    j["middle"] = {fan.middle.rho, fan.middle.mom};
    auto& waves = j["waves"] = nlohmann::json::array();
    const double floor = 1e-11;
    Vec2 cur = ul;
    for (int fami = 1; fami <= 2; ++fami) {
        const double sigma = fami == 1 ? fan.sigma1 : fan.sigma2;
        const Family fam = fami == 1 ? Family::one : Family::two;
        if (std::fabs(sigma) <= floor) continue;
        nlohmann::json w;
        w["family"] = fami;
        w["strength"] = sigma;
        const Vec2 nxt = forward_wave_curve(sys, cur, fam, sigma);
        w["left"] = {cur.rho, cur.mom};
        w["right"] = {nxt.rho, nxt.mom};
        if (sigma > 0.0) {
            w["kind"] = "shock";
            const double speed = detail::rh_speed(cur, nxt);
            w["speed"] = speed;
            w["rh_residual"] = rankine_hugoniot_residual(sys, cur, nxt, speed);
            w["entropy_dissipation"] = shock_entropy_dissipation(sys, cur, nxt, speed);
        } else {
            w["kind"] = "rarefaction";
            const auto sl = sys.eigen(cur);
            const auto sr = sys.eigen(nxt);
            w["head_speed"] = fami == 1 ? sl.lambda1 : sl.lambda2;
            w["tail_speed"] = fami == 1 ? sr.lambda1 : sr.lambda2;
        }
        waves.push_back(w);
        cur = nxt;
    }
    j["reconstruction_residual"] = norm(cur - ur);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_evolve(const std::string& config_path, const std::string& out_dir, std::uint64_t seed, int level,
               bool quiet) {
    RunConfig rc = RunConfig::load(config_path);
    rc.wild.dx /= static_cast<double>(1 << level);
    EulerSystem sys(rc.system);
    Rng rng(seed);
    const auto u0 = rc.build_initial(sys, rng);

    std::optional<WildTrajectory> wild;
    TraceProvider traces;
    if (rc.engine.policy.mode == ShiftPolicySpec::Mode::dissipation_greedy) {
        wild.emplace(make_wild(sys, rc, u0, rc.t_end));
        const int k = std::max(2, static_cast<int>(std::lround(rc.wild.trace_window / rc.wild.dx)));
        traces = wild->trace_provider(k);
    }
    FrontSolution sol(sys, rc.engine, u0, traces);

    fs::create_directories(out_dir);
    CsvWriter functionals(fs::path(out_dir) / "functionals.csv", "functionals",
                          {"t", "L", "Q", "LQ", "np_total"});
    for (int s = 0; s <= rc.samples; ++s) {
        const double t = rc.t_end * s / rc.samples;
        sol.advance(t);
        const auto g = sol.functionals();
        functionals.row(t, g.l, g.q, g.l + g.kappa * g.q, g.np_total);
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03d.json", s);
        std::optional<WeightProfile> w;
        if (sol.params().track_weights) w = sol.weight(t);
        write_json(fs::path(out_dir) / name, snapshot_json(sol.snapshot(t), t, w ? &*w : nullptr));
    }
    write_event_log(fs::path(out_dir) / "events.csv", sol.events());
    if (!quiet)
        std::cout << "evolve: " << sol.events().size() << " events, " << sol.fronts().size()
                  << " fronts at t = " << sol.time() << "\n";
    return 0;
}

int cmd_stability(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
                  int level, bool quiet) {
    RunConfig rc = RunConfig::load(config_path);
    rc.wild.dx /= static_cast<double>(1 << level);
    EulerSystem sys(rc.system);
    Rng rng(seed);
    const auto rep = run_stability(sys, rc.stability_config(sys, rng));

    fs::create_directories(out_dir);
    CsvWriter series(fs::path(out_dir) / "series.csv", "stability-series",
                     {"t", "E", "L", "Q", "LQ", "np_total", "pos_D_sum"});
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        series.row(rep.t[i], rep.e[i], rep.l[i], rep.q[i], rep.lq[i], rep.np[i], rep.pos_d_sum[i]);

    nlohmann::json j;
    j["schema"] = "fronttrack-stability v1";
    j["e0"] = rep.e0;
    j["budget_final"] = rep.budget.back();
    j["pos_d_fraction"] = rep.pos_d_fraction;
    j["event_count"] = rep.event_count;
    j["scheme_entropy_production"] = rep.scheme_entropy_production;
    j["telescoping_defect"] = rep.telescoping_defect;
    j["weights_ok"] = rep.weights_ok;
    j["monotone_ok"] = rep.monotone_ok;
    j["energy_excess_budget_only"] = rep.energy_excess(1.0);
    j["energy_excess_4x"] = rep.energy_excess(4.0);
    write_json(fs::path(out_dir) / "report.json", j);
    write_grid_csv(fs::path(out_dir) / "wild_initial.csv", rep.wild_initial);
    write_grid_csv(fs::path(out_dir) / "wild_final.csv", rep.wild_final);
    write_json(fs::path(out_dir) / "wild_final.json", grid_json(rep.wild_final));
    if (!quiet)
        std::cout << "stability: E0 = " << rep.e0 << ", budget = " << rep.budget.back()
                  << ", pos-D fraction = " << rep.pos_d_fraction << "\n";
    return rep.weights_ok && rep.monotone_ok ? 0 : 1;
}

// canned configurations for the check suites
SystemParams check_box() {
    SystemParams p;
    p.gamma = 2.0;
    p.state_box = {0.6, 1.6, 0.7};
    return p;
}

PiecewiseConstant<Vec2> wave_soup(const EulerSystem& sys) {
    PiecewiseConstant<Vec2> u0;
    Vec2 cur{1.1, 0.0};
    u0.values.push_back(cur);
    const std::vector<std::tuple<double, Family, double>> waves = {{-0.25, Family::one, 0.05},
                                                                   {-0.05, Family::two, -0.04},
                                                                   {0.1, Family::two, 0.05},
                                                                   {0.3, Family::one, 0.04}};
    for (const auto& [x, fam, sigma] : waves) {
        cur = forward_wave_curve(sys, cur, fam, sigma);
        u0.xs.push_back(x);
        u0.values.push_back(cur);
    }
    return u0;
}

int cmd_check(const std::string& suite, std::uint64_t seed, bool quiet) {
    EulerSystem sys(check_box());
    nlohmann::json j;
    j["schema"] = "fronttrack-check v1";
    j["suite"] = suite;
    bool pass = true;

    if (suite == "interactions") {
        for (const std::string scenario : {"head-on", "overtaking"}) {
            std::vector<double> lhs_inv;
            double c0 = 0.0;
            for (double s : {0.08, 0.04, 0.02}) {
                PiecewiseConstant<Vec2> u0;
                Vec2 base{1.1, 0.0};
                u0.values.push_back(base);
                const Family first = scenario == "head-on" ? Family::two : Family::one;
                Vec2 mid = forward_wave_curve(sys, base, first, s);
                u0.xs.push_back(0.0);
                u0.values.push_back(mid);
                u0.xs.push_back(0.05);
                u0.values.push_back(forward_wave_curve(sys, mid, Family::one, s));
                EngineParams ep;
                ep.eps_nu = 1e-9;
                ep.tv_limit = 0.6;
                FrontSolution sol(sys, ep, u0);
                sol.advance(50.0);
                const auto m = interaction_check(sys, sol.events().at(0));
                lhs_inv.push_back(m.lhs_invariant);
                c0 = std::max(c0, m.ratio_invariant);
                j[scenario]["lhs_invariant"].push_back(m.lhs_invariant);
                j[scenario]["lhs_arclength"].push_back(m.lhs);
            }
            const double slope = std::log(lhs_inv.front() / lhs_inv.back()) / std::log(4.0);
            j[scenario]["slope"] = slope;
            j[scenario]["c0"] = c0;
            j[scenario]["c0_eps"] = c0 * 0.2;
            pass = pass && slope >= 2.7 && c0 * 0.2 <= 1.0;
        }
    } else if (suite == "weights") {
        EngineParams ep;
        ep.eps_nu = 1e-3;
        ep.track_weights = true;
        FrontSolution sol(sys, ep, wave_soup(sys));
        sol.advance(0.5);
        bool windows = true;
        double sup_dev = 0.0;
        const auto g = sol.functionals();
        const auto w = build_weight(sol.fronts(), sol.time(), g.l, g.q, ep.kappa, ep.weight_c);
        for (const auto& rec : check_weight_jumps(sol.fronts(), w, ep.weight_c)) windows = windows && rec.ok;
        for (double v : w.values) sup_dev = std::max(sup_dev, std::fabs(v - 1.0));
        double decay_sup = -1e300;
        double kappa_min = 0.0;
        for (const auto& ev : sol.events()) {
            decay_sup = std::max(decay_sup, ev.weight_sup_increase);
            if (ev.dq < 0.0) kappa_min = std::max(kappa_min, ev.dl / -ev.dq);
        }
        j["windows_ok"] = windows;
        j["sup_weight_deviation"] = sup_dev;
        j["event_weight_increase_sup"] = decay_sup;
        j["kappa_min_for_monotonicity"] = kappa_min;
        j["events"] = sol.events().size();
        pass = windows && sup_dev <= 0.5 && decay_sup <= 1e-12 && !sol.events().empty();
    } else if (suite == "conditionH") {
        EngineParams ep;
        ep.eps_nu = 1e-3;
        FrontSolution sol(sys, ep, wave_soup(sys));
        const double T = 0.4;
        sol.advance(T);
        const double lam = sol.lambda_hat();
        Rng rng(seed ^ 0xc0ffee);
        double worst = 0.0;
        int usable = 0;
        for (int k = 0; k < 100; ++k) {
            const auto [g, gp] = random_dominated_pair(rng, -1.2, 1.2, 0.01, 0.35, lam);
            const double tv_g = tv_along_curve(sol.history(), g, T);
            const double tv_gp = tv_along_curve(sol.history(), gp, T);
            if (tv_g > 0.0) {
                worst = std::max(worst, tv_gp / tv_g);
                ++usable;
            }
        }
        j["pairs"] = usable;
        j["max_ratio"] = worst;
        pass = usable > 50 && worst <= 100.0;
    } else {
        throw ConfigError("check: unknown suite '" + suite + "' (interactions | weights | conditionH)");
    }

    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    if (!quiet) std::cerr << "check " << suite << ": " << (pass ? "pass" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir, std::uint64_t seed,
              bool quiet) {
    if (values.empty()) throw ConfigError("sweep: --values must be nonempty");
    if (param != "eps_nu" && param != "dx")
        throw ConfigError("sweep: --param must be eps_nu or dx");
    const RunConfig base = RunConfig::load(config_path);
    fs::create_directories(out_dir);

    struct Result {
        double value;
        double sup_np = 0.0;
        double final_np = 0.0;
        double e0 = 0.0;
        double budget = 0.0;
        double pos_d_fraction = 0.0;
        long events = 0;
    };

    auto worker = [&](std::size_t idx) {
        RunConfig rc = base;
        Result r{values[idx]};
        Rng rng(seed + idx);
        if (param == "eps_nu") {
            rc.engine.eps_nu = values[idx];
            EulerSystem sys(rc.system);
            const auto u0 = rc.build_initial(sys, rng);
            FrontSolution sol(sys, rc.engine, u0);
            for (int s = 0; s <= rc.samples; ++s) {
                sol.advance(rc.t_end * s / rc.samples);
                r.sup_np = std::max(r.sup_np, sol.functionals().np_total);
            }
            r.final_np = sol.functionals().np_total;
            r.events = static_cast<long>(sol.events().size());
        } else {
            rc.wild.dx = values[idx];
            EulerSystem sys(rc.system);
            const auto rep = run_stability(sys, rc.stability_config(sys, rng));
            r.e0 = rep.e0;
            r.budget = rep.budget.back();
            r.pos_d_fraction = rep.pos_d_fraction;
            r.events = rep.event_count;
        }
        return r;
    };

    std::vector<std::future<Result>> futures;
    for (std::size_t i = 0; i < values.size(); ++i)
        futures.push_back(std::async(std::launch::async, worker, i));

    CsvWriter csv(fs::path(out_dir) / "sweep.csv", "sweep",
                  {"param", "value", "sup_np", "final_np", "E0", "budget", "pos_d_fraction", "events"});
    for (auto& f : futures) {
        const Result r = f.get();
        csv.row(param, r.value, r.sup_np, r.final_np, r.e0, r.budget, r.pos_d_fraction, r.events);
        if (!quiet) std::cout << "sweep " << param << " = " << r.value << " done\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"front tracking and weighted relative-entropy diagnostics for isentropic Euler"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", left, right, suite = "interactions", param = "eps_nu";
    std::string values_text;
    std::uint64_t seed = 1;
    int level = 0;
    bool quiet = false;
    double gamma = 2.0, rho_min = 0.25, rho_max = 4.0, v_abs = 2.0;

    auto* riemann = app.add_subcommand("riemann", "resolve a Riemann problem, JSON to stdout");
    riemann->add_option("--left", left, "left state as 'rho v'")->required();
    riemann->add_option("--right", right, "right state as 'rho v'")->required();
    riemann->add_option("--gamma", gamma, "adiabatic exponent");
    riemann->add_option("--rho-min", rho_min, "certified box: density lower bound");
    riemann->add_option("--rho-max", rho_max, "certified box: density upper bound");
    riemann->add_option("--v-abs", v_abs, "certified box: velocity bound");

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) cmd->add_option("--config", config_path, "run configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--level", level, "refinement index (halves dx per level)");
        cmd->add_flag("--quiet", quiet, "suppress progress output");
    };

    auto* evolve = app.add_subcommand("evolve", "run the front-tracking evolution");
    add_common(evolve, true);
    auto* stability = app.add_subcommand("stability", "run the stability experiment");
    add_common(stability, true);
    auto* check = app.add_subcommand("check", "run a property suite");
    check->add_option("--suite", suite, "interactions | weights | conditionH")->required();
    check->add_option("--seed", seed, "random seed");
    check->add_flag("--quiet", quiet, "suppress progress output");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with concurrent workers");
    add_common(sweep, true);
    sweep->add_option("--param", param, "eps_nu | dx")->required();
    sweep->add_option("--values", values_text, "comma-separated values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (riemann->parsed()) return cmd_riemann(left, right, gamma, rho_min, rho_max, v_abs);
        if (evolve->parsed()) return cmd_evolve(config_path, out_dir, seed, level, quiet);
        if (stability->parsed()) return cmd_stability(config_path, out_dir, seed, level, quiet);
        if (check->parsed()) return cmd_check(suite, seed, quiet);
        if (sweep->parsed()) {
            std::vector<double> values;
            std::stringstream ss(values_text);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!detail::trim(tok).empty()) values.push_back(std::stod(tok));
            }
            return cmd_sweep(config_path, param, values, out_dir, seed, quiet);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
