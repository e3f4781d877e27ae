// diagnostics.hpp: weighted relative-entropy bookkeeping over a shrinking
// cone of information, per-front dissipation records, interaction-estimate
// margins, space-like-curve variation, and the end-to-end stability
// experiment comparing a front-tracking solution against the finite-volume
// reference.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fronttrack/engine.hpp"
#include "fronttrack/godunov.hpp"

namespace fronttrack {

struct Cone {
    double r = 1.0;
    double v = 0.0;

    double valid_until() const { return r / v; }
    std::pair<double, double> window(double t) const { return {-r + v * t, r - v * t}; }

    // Closure speed fast enough that the boundary flux terms have a sign:
    // beyond every wave and beyond the relative-flux bound.
    static Cone make(double r, double requested_v, const Certificate& cert) {
        Cone c;
        c.r = r;
        const double auto_v = std::max(2.0 * cert.big_l, cert.rel_flux_bound) + 1.0;
        c.v = requested_v > 0.0 ? requested_v : auto_v;
        if (!(c.r > 0.0)) throw ConfigError("cone.r must be > 0");
        if (c.v < auto_v - 1e-12)
            throw ConfigError("cone.v must be at least max(lambda_hat, relative-flux bound) + 1 = " +
                              std::to_string(auto_v));
        return c;
    }
};

inline PiecewiseConstant<Vec2> to_piecewise(const GridSolution& g) {
    PiecewiseConstant<Vec2> pc;
    pc.xs.reserve(g.cells.size() + 1);
    pc.values.reserve(g.cells.size() + 2);
    pc.values.push_back(g.cells.front());
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        pc.xs.push_back(g.x0 + g.dx * static_cast<double>(i));
        pc.values.push_back(g.cells[i]);
    }
    pc.xs.push_back(g.x_hi());
    pc.values.push_back(g.cells.back());
    return pc;
}

// Integral of a(x) eta(u(x)|psi(x)) over [lo, hi]. All three inputs are
// piecewise constant, so the integrand is constant on every subinterval of
// the merged partition and the sum is exact.
inline double weighted_entropy_integral(const EulerSystem& sys, const PiecewiseConstant<Vec2>& u,
                                        const PiecewiseConstant<Vec2>& psi, const WeightProfile& a,
                                        double lo, double hi) {
    if (!(hi >= lo)) return 0.0;
    std::vector<double> cuts{lo};
    for (const auto* xs : {&u.xs, &psi.xs, &a.xs})
        for (double x : *xs)
            if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double m = 0.5 * (cuts[i] + cuts[i + 1]);
        total += (cuts[i + 1] - cuts[i]) * a.eval(m) * sys.relative_entropy(u.eval(m), psi.eval(m));
    }
    return total;
}

struct DissipationRecord {
    int front_id = -1;
    double t = 0.0;
    double hdot = 0.0;
    double a_left = 1.0;
    double a_right = 1.0;
    Vec2 u_minus{};
    Vec2 u_plus{};
    double d = 0.0;
    bool weight_window_ok = true;
};

// Evaluate the dissipation functional of one physical shock front against
// reference traces, and test the weight-ratio window for its family.
inline DissipationRecord front_dissipation(const EulerSystem& sys, const Front& front, Vec2 u_minus,
                                           Vec2 u_plus, double a_left, double a_right, double hdot,
                                           double weight_c) {
    DissipationRecord rec;
    rec.front_id = front.id;
    rec.hdot = hdot;
    rec.a_left = a_left;
    rec.a_right = a_right;
    rec.u_minus = u_minus;
    rec.u_plus = u_plus;
    rec.d = shock_dissipation(sys, front.left, front.right, u_minus, u_plus, a_left, a_right, hdot);
    if (front.kind == WaveKind::shock) {
        const double s = norm(front.right - front.left);
        const double ratio = a_right / a_left;
        const double lo = front.family == WaveFamily::f1 ? 1.0 - 2.0 * weight_c * s : 1.0 + 0.5 * weight_c * s;
        const double hi = front.family == WaveFamily::f1 ? 1.0 - 0.5 * weight_c * s : 1.0 + 2.0 * weight_c * s;
        rec.weight_window_ok = lo - 1e-12 <= ratio && ratio <= hi + 1e-12;
    }
    return rec;
}

// Dissipation functional of a front against a finite-volume realization of
// the reference solution, measured with the scheme's own interface fluxes:
// the Godunov flux is the exact flux of the interface state, so the
// relative flux brackets use the interface states of the straddled cell and
// the eta terms its value. This is the discrete counterpart of the
// strong-trace functional (they coincide as dx -> 0) and it accounts for
// the capture-layer influx exactly, which point traces cannot see.
inline double discrete_front_dissipation(const EulerSystem& sys, Vec2 ref_left, Vec2 ref_right,
                                         const GridSolution& g, double x, double a_left, double a_right,
                                         double hdot) {
    const int j = g.cell_index(x);
    if (j - 1 < 0 || j + 1 >= static_cast<int>(g.cells.size()))
        throw std::range_error("discrete_front_dissipation: front outside the grid interior");
    const Vec2 wl = godunov_interface_state(sys, g.cells[j - 1], g.cells[j]);
    const Vec2 wr = godunov_interface_state(sys, g.cells[j], g.cells[j + 1]);
    const Vec2 uj = g.cells[j];
    return a_right * (sys.relative_entropy_flux(wr, ref_right) - hdot * sys.relative_entropy(uj, ref_right)) -
           a_left * (sys.relative_entropy_flux(wl, ref_left) - hdot * sys.relative_entropy(uj, ref_left));
}

// Time integral (trapezoid) of the two-reference flux bracket along the ray
// of speed v through the fan center; bounded by C * spread * |uL-uR| * t
// for discretized rarefactions.
inline double rarefaction_dissipation(const EulerSystem& sys, Vec2 ul, Vec2 ur, double v,
                                      const std::vector<std::tuple<double, Vec2, Vec2>>& traces) {
    if (traces.size() < 2) return 0.0;
    auto bracket = [&](const std::tuple<double, Vec2, Vec2>& s) {
        const auto& [t, um, up] = s;
        return sys.relative_entropy_flux(up, ur) - sys.relative_entropy_flux(um, ul) -
               v * (sys.relative_entropy(up, ur) - sys.relative_entropy(um, ul));
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < traces.size(); ++i) {
        const double dt = std::get<0>(traces[i + 1]) - std::get<0>(traces[i]);
        total += 0.5 * dt * (bracket(traces[i]) + bracket(traces[i + 1]));
    }
    return total;
}

struct InteractionMargin {
    double lhs = 0.0;            // defect in arclength strengths
    double lhs_invariant = 0.0;  // defect in Riemann-invariant strengths
    double scale = 0.0;          // |s' s''| (|s'| + |s''|)
    double ratio = 0.0;          // lhs / scale (0 when degenerate)
    double ratio_invariant = 0.0;
    bool applicable = false;
};

// Compare the logged interaction against the exact two-wave resolution of
// its outer states: the outgoing per-family strengths minus the summed
// incoming ones (same-family events sum, head-on events transpose). The
// defect is reported both in arclength strengths (the working parametri-
// zation; transversal interactions are quadratic there because the
// parametrization itself is base-state dependent) and in Riemann-invariant
// strengths, where the curves are second-order straight and the classical
// cubic smallness is visible.
inline InteractionMargin interaction_check(const EulerSystem& sys, const EventRecord& ev,
                                           const SolveOptions& opts = {}) {
    InteractionMargin m;
    if (!ev.both_physical) return m;
    const double sl = ev.in_strength[0];  // left incoming
    const double sr = ev.in_strength[1];  // right incoming
    const WaveFamily fl = ev.in_family[0];
    const WaveFamily fr = ev.in_family[1];
    if (fl == WaveFamily::f1 && fr == WaveFamily::f2) return m;  // never collides
    const auto exact = solve_riemann(sys, ev.u_minus, ev.u_plus, opts);

    const double in1 = (fl == WaveFamily::f1 ? sl : 0.0) + (fr == WaveFamily::f1 ? sr : 0.0);
    const double in2 = (fl == WaveFamily::f2 ? sl : 0.0) + (fr == WaveFamily::f2 ? sr : 0.0);
    m.lhs = std::fabs(exact.sigma1 - in1) + std::fabs(exact.sigma2 - in2);

    // signed strength as the drop of the wave's own Riemann invariant
    auto w1 = [&](Vec2 u) { return sys.riemann_invariants(u).first; };
    auto w2 = [&](Vec2 u) { return sys.riemann_invariants(u).second; };
    auto wstrength = [&](Vec2 l, Vec2 r, WaveFamily f) {
        return f == WaveFamily::f1 ? -(w1(r) - w1(l)) : -(w2(r) - w2(l));
    };
    const double win1 = (fl == WaveFamily::f1 ? wstrength(ev.u_minus, ev.u_mid, fl) : 0.0) +
                        (fr == WaveFamily::f1 ? wstrength(ev.u_mid, ev.u_plus, fr) : 0.0);
    const double win2 = (fl == WaveFamily::f2 ? wstrength(ev.u_minus, ev.u_mid, fl) : 0.0) +
                        (fr == WaveFamily::f2 ? wstrength(ev.u_mid, ev.u_plus, fr) : 0.0);
    const double wout1 = wstrength(ev.u_minus, exact.middle, WaveFamily::f1);
    const double wout2 = wstrength(exact.middle, ev.u_plus, WaveFamily::f2);
    m.lhs_invariant = std::fabs(wout1 - win1) + std::fabs(wout2 - win2);

    m.scale = std::fabs(sl * sr) * (std::fabs(sl) + std::fabs(sr));
    m.ratio = m.scale > 0.0 ? m.lhs / m.scale : 0.0;
    m.ratio_invariant = m.scale > 0.0 ? m.lhs_invariant / m.scale : 0.0;
    m.applicable = true;
    return m;
}

// ----- space-like curves -------------------------------------------------

struct SpaceLikeCurve {
    std::vector<double> xs;  // strictly increasing knots
    std::vector<double> ts;
    double lambda_hat = 0.0;

    void validate() const {
        if (xs.size() != ts.size() || xs.size() < 2) throw ConfigError("space-like curve: malformed");
        if (!(lambda_hat > 0.0)) throw ConfigError("space-like curve: lambda_hat must be > 0");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double dx = xs[i + 1] - xs[i];
            if (!(dx > 0.0)) throw ConfigError("space-like curve: knots must increase");
            if (!(std::fabs(ts[i + 1] - ts[i]) < dx / lambda_hat))
                throw ConfigError("space-like curve: slope bound violated");
        }
    }

    double a() const { return xs.front(); }
    double b() const { return xs.back(); }
    double t_min() const { return *std::min_element(ts.begin(), ts.end()); }
    double t_max() const { return *std::max_element(ts.begin(), ts.end()); }

    double t_at(double x) const {
        if (x <= xs.front()) return ts.front();
        if (x >= xs.back()) return ts.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ts[i - 1] + w * (ts[i] - ts[i - 1]);
    }
};

// Domain-of-determinacy comparison: gamma dominates gp when gp lives above
// gamma and below the tent of slope 1/lambda_hat raised at gamma's ends.
inline bool dominates(const SpaceLikeCurve& g, const SpaceLikeCurve& gp) {
    if (!(g.a() <= gp.a() && gp.a() < gp.b() && gp.b() <= g.b())) return false;
    const double lam = g.lambda_hat;
    auto tent = [&](double x) {
        return std::min(g.ts.front() + (x - g.a()) / lam, g.ts.back() + (g.b() - x) / lam);
    };
    std::vector<double> knots = gp.xs;
    for (double x : g.xs)
        if (x >= gp.a() && x <= gp.b()) knots.push_back(x);
    std::sort(knots.begin(), knots.end());
    for (double x : knots) {
        const double t = gp.t_at(x);
        if (!(g.t_at(x) <= t + 1e-12 && t <= tent(x) + 1e-12)) return false;
    }
    return true;
}

// Total variation of the solution along a space-like curve, by exact
// enumeration of front-path crossings; every path segment is linear and
// every curve piece is linear, so crossings are closed form.
inline double tv_along_curve(const std::vector<FrontHistory>& history, const SpaceLikeCurve& curve,
                             double t_horizon) {
    curve.validate();
    if (curve.t_min() < -1e-12 || curve.t_max() > t_horizon + 1e-12)
        throw std::range_error("tv_along_curve: curve leaves the simulated time range");
    double tv = 0.0;
    for (const FrontHistory& h : history) {
        if (h.segments.empty()) continue;
        const double jump = norm(h.right - h.left);
        if (jump == 0.0) continue;
        for (const HistorySegment& seg : h.segments) {
            const double t1 = std::min({seg.t1, h.death_t, t_horizon});
            if (!(t1 > seg.t0)) continue;
            for (std::size_t i = 0; i + 1 < curve.xs.size(); ++i) {
                const double xa = curve.xs[i], xb = curve.xs[i + 1];
                const double ta = curve.ts[i], tb = curve.ts[i + 1];
                const double m = (tb - ta) / (xb - xa);
                const double denom = 1.0 - m * seg.speed;
                const double tc = (ta + m * (seg.x0 - seg.speed * seg.t0 - xa)) / denom;
                if (tc < seg.t0 || tc >= t1) continue;
                const double xc = seg.x0 + seg.speed * (tc - seg.t0);
                if (xc < xa || xc >= xb) continue;
                tv += jump;
            }
        }
    }
    return tv;
}

// Random space-like curve on [a,b] with t-values inside [t_lo, t_hi].
inline SpaceLikeCurve random_space_like_curve(Rng& rng, double a, double b, double t_lo, double t_hi,
                                              double lambda_hat, int knots = 8) {
    SpaceLikeCurve c;
    c.lambda_hat = lambda_hat;
    c.xs.resize(static_cast<std::size_t>(knots));
    c.ts.resize(c.xs.size());
    for (std::size_t i = 0; i < c.xs.size(); ++i)
        c.xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(knots - 1);
    c.ts[0] = rng.uniform(t_lo, t_hi);
    for (std::size_t i = 1; i < c.xs.size(); ++i) {
        const double dx = c.xs[i] - c.xs[i - 1];
        const double lo = std::max(t_lo, c.ts[i - 1] - 0.9 * dx / lambda_hat);
        const double hi = std::min(t_hi, c.ts[i - 1] + 0.9 * dx / lambda_hat);
        c.ts[i] = rng.uniform(lo, hi);
    }
    c.validate();
    return c;
}

// Random pair (gamma, gamma') with gamma dominating gamma'; gamma' lives in
// the corridor between gamma and its tent, clipped to the time range.
inline std::pair<SpaceLikeCurve, SpaceLikeCurve> random_dominated_pair(Rng& rng, double a, double b,
                                                                       double t_lo, double t_hi,
                                                                       double lambda_hat,
                                                                       int knots = 8) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        SpaceLikeCurve g = random_space_like_curve(rng, a, b, t_lo, 0.5 * (t_lo + t_hi), lambda_hat, knots);
        const double margin = 0.15 * (b - a);
        const double ap = a + rng.uniform(0.2, 0.8) * margin;
        const double bp = b - rng.uniform(0.2, 0.8) * margin;
        auto tent = [&](double x) {
            return std::min(g.ts.front() + (x - g.a()) / lambda_hat, g.ts.back() + (g.b() - x) / lambda_hat);
        };
        SpaceLikeCurve gp;
        gp.lambda_hat = lambda_hat;
        const int kn = knots;
        gp.xs.resize(static_cast<std::size_t>(kn));
        gp.ts.resize(gp.xs.size());
        bool ok = true;
        for (int i = 0; i < kn; ++i) {
            const double x = ap + (bp - ap) * static_cast<double>(i) / static_cast<double>(kn - 1);
            gp.xs[static_cast<std::size_t>(i)] = x;
            double lo = g.t_at(x);
            double hi = std::min(tent(x), t_hi);
            if (i > 0) {
                const double dx = gp.xs[i] - gp.xs[i - 1];
                lo = std::max(lo, gp.ts[i - 1] - 0.9 * dx / lambda_hat);
                hi = std::min(hi, gp.ts[i - 1] + 0.9 * dx / lambda_hat);
            }
            if (!(lo <= hi)) {
                ok = false;
                break;
            }
            gp.ts[static_cast<std::size_t>(i)] = rng.uniform(lo, hi);
        }
        if (!ok) continue;
        gp.validate();
        if (dominates(g, gp)) return {g, gp};
    }
    throw NumericalError("random_dominated_pair: generation failed");
}

// ----- the stability experiment ------------------------------------------

struct StabilityConfig {
    PiecewiseConstant<Vec2> psi0;
    EngineParams engine;
    double dx = 1.0 / 200.0;
    double cfl = 0.45;
    int perturb_component = 1;
    double perturb_center = 0.0;
    double perturb_width = 0.1;
    double perturb_l2 = 0.0;
    double cone_r = 1.0;
    double cone_v = 0.0;       // 0 = auto
    double t_end = 0.0;        // 0 = r/(2v)
    double trace_window = 0.05;  // physical averaging width for traces
    int samples = 160;
    double pos_d_tol = 1e-10;  // threshold for counting a positive excursion
};

struct StabilityReport {
    std::vector<double> t;
    std::vector<double> e;
    std::vector<double> l;
    std::vector<double> q;
    std::vector<double> lq;
    std::vector<double> np;
    std::vector<double> pos_d_sum;  // running integral of positive shock dissipation
    std::vector<double> budget;     // running integral of all positive front terms
    double e0 = 0.0;
    double pos_d_fraction = 0.0;     // fraction of shock samples with D > tol
    double scheme_entropy_production = 0.0;
    double telescoping_defect = 0.0;  // E(T) - E(0) - signed front terms - event drops
    bool weights_ok = true;
    bool monotone_ok = true;          // L + kappa Q nonincreasing event-wise
    long event_count = 0;
    GridSolution wild_initial;
    GridSolution wild_final;
    double energy_excess(double mult) const {
        double worst = -1e300;
        for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, e[i] - mult * e0 - budget[i]);
        return worst;
    }
};

inline StabilityReport run_stability(const EulerSystem& sys, const StabilityConfig& cfg) {
    const Certificate& cert = sys.certificate();
    const Cone cone = Cone::make(cfg.cone_r, cfg.cone_v, cert);
    const double t_end = cfg.t_end > 0.0 ? cfg.t_end : 0.5 * cone.valid_until();
    if (!(t_end < cone.valid_until()))
        throw ConfigError("stability: t_end must stay inside the cone (r/v)");
    const double lambda_hat = 2.0 * cert.big_l;

    // reference trajectory on a grid padded beyond the cone
    const double pad = lambda_hat * t_end + std::max(cfg.trace_window * 4.0, 16.0 * cfg.dx);
    GridSolution g0 = project_to_grid(cfg.psi0, -cfg.cone_r - pad, cfg.cone_r + pad, cfg.dx);
    apply_bump(g0, cfg.perturb_component, cfg.perturb_center, cfg.perturb_width, cfg.perturb_l2);
    WildTrajectory wild(sys, g0, cfg.cfl, lambda_hat);
    wild.run_to(t_end);

    const int trace_k = std::max(2, static_cast<int>(std::lround(cfg.trace_window / cfg.dx)));
    EngineParams ep = cfg.engine;
    ep.track_weights = true;
    if (ep.checkpoint_dt <= 0.0) ep.checkpoint_dt = t_end / static_cast<double>(cfg.samples);
    FrontSolution psi(sys, ep, cfg.psi0, wild.trace_provider(trace_k));

    StabilityReport rep;
    rep.scheme_entropy_production = wild.total_entropy_production();
    rep.wild_initial = wild.snapshots().front();
    rep.wild_final = wild.snapshots().back();

    double pos_d_acc = 0.0, budget_acc = 0.0, signed_acc = 0.0;
    long d_samples = 0, d_positive = 0;
    double prev_t = 0.0;
    double prev_shock_pos = 0.0, prev_other_pos = 0.0, prev_signed = 0.0;

    const int n_samples = std::max(2, cfg.samples);
    for (int s = 0; s <= n_samples; ++s) {
        const double t = t_end * static_cast<double>(s) / static_cast<double>(n_samples);
        psi.advance(t);
        const auto snap = psi.snapshot(t);
        const auto fn = psi.functionals();
        const auto w = psi.weight(t);
        const auto [lo, hi] = cone.window(t);
        const double e = weighted_entropy_integral(sys, to_piecewise(wild.at_time(t)), snap, w, lo, hi);

        // per-front flux terms at this sample, measured against the
        // scheme's interface fluxes
        const GridSolution& grid = wild.at_time(t);
        double shock_pos = 0.0, other_pos = 0.0, signed_terms = 0.0;
        for (const Front& f : psi.fronts()) {
            const double x = f.position(t);
            if (x < lo || x > hi) continue;
            const double al = w.eval(x - 1e-13);
            const double ar = w.eval(x + 1e-13);
            const double d = discrete_front_dissipation(sys, f.left, f.right, grid, x, al, ar, f.speed);
            signed_terms += d;
            if (f.kind == WaveKind::shock) {
                ++d_samples;
                if (d > cfg.pos_d_tol) ++d_positive;
                shock_pos += std::max(0.0, d);
            } else {
                other_pos += std::max(0.0, d);
            }
        }

        if (s > 0) {
            const double dt = t - prev_t;
            pos_d_acc += 0.5 * dt * (prev_shock_pos + shock_pos);
            budget_acc += 0.5 * dt * (prev_shock_pos + prev_other_pos + shock_pos + other_pos);
            signed_acc += 0.5 * dt * (prev_signed + signed_terms);
        }
        prev_t = t;
        prev_shock_pos = shock_pos;
        prev_other_pos = other_pos;
        prev_signed = signed_terms;

        rep.t.push_back(t);
        rep.e.push_back(e);
        rep.l.push_back(fn.l);
        rep.q.push_back(fn.q);
        rep.lq.push_back(fn.l + fn.kappa * fn.q);
        rep.np.push_back(fn.np_total);
        rep.pos_d_sum.push_back(pos_d_acc);
        rep.budget.push_back(budget_acc);
    }

    rep.e0 = rep.e.front();
    rep.pos_d_fraction = d_samples > 0 ? static_cast<double>(d_positive) / static_cast<double>(d_samples) : 0.0;
    rep.telescoping_defect = rep.e.back() - rep.e0 - signed_acc;
    rep.event_count = static_cast<long>(psi.events().size());

    for (const auto& ev : psi.events()) {
        if (ev.dl + psi.params().kappa * ev.dq > 1e-12) rep.monotone_ok = false;
        if (std::isfinite(ev.weight_sup_increase) && ev.weight_sup_increase > 1e-12) rep.weights_ok = false;
    }
    {
        const auto w = psi.weight(psi.time());
        for (const auto& recw : check_weight_jumps(psi.fronts(), w, psi.params().weight_c))
            rep.weights_ok = rep.weights_ok && recw.ok;
    }
    return rep;
}

}  // namespace fronttrack
