// fan_solvers.hpp: converts a Riemann fan into fronts. The accurate solver
// resolves the fan exactly and discretizes rarefactions into pieces no
// stronger than delta; the simplified solver reuses the incoming strengths
// and closes the gap with one trailing non-physical front riding at
// lambda_hat. Shock speeds are delegated to a policy callback so the same
// machinery serves both Rankine-Hugoniot and shifted evolutions.
#pragma once

#include <cmath>
#include <functional>

#include "fronttrack/front.hpp"

namespace fronttrack {

// (family, left state, right state, rh speed, birth time, birth position) -> speed
using ShockSpeedFn =
    std::function<double(WaveFamily, const Vec2&, const Vec2&, double, double, double)>;

inline ShockSpeedFn rankine_hugoniot_speed_fn() {
    return [](WaveFamily, const Vec2&, const Vec2&, double rh, double, double) { return rh; };
}

namespace detail {

constexpr double kStrengthFloor = 1e-11;

inline void emit_family(const EulerSystem& sys, Vec2& cur, Family fam, double sigma, double delta,
                        double t, double x, const ShockSpeedFn& speed_fn, IdGen& ids,
                        std::vector<Front>& out) {
    if (std::fabs(sigma) <= kStrengthFloor) return;
    const WaveFamily wf = fam == Family::one ? WaveFamily::f1 : WaveFamily::f2;
    if (sigma > 0.0) {
        const auto pt = shock_curve(sys, cur, fam, sigma, Side::left_anchored);
        Front f;
        f.id = ids();
        f.family = wf;
        f.kind = WaveKind::shock;
        f.strength = sigma;
        f.left = cur;
        f.right = pt.state;
        f.birth_t = t;
        f.birth_x = x;
        f.speed = speed_fn(wf, f.left, f.right, pt.speed, t, x);
        f.anchor_t = t;
        f.anchor_x = x;
        out.push_back(f);
        cur = pt.state;
        return;
    }
    // Rarefaction fan split into ceil(|sigma|/delta) pieces; every piece's
    // speed is the characteristic speed of its right state.
    const int pieces = std::max(1, static_cast<int>(std::ceil(-sigma / delta)));
    const Vec2 base = cur;
    for (int l = 1; l <= pieces; ++l) {
        const Vec2 next = forward_wave_curve(sys, base, fam, sigma * l / pieces);
        Front f;
        f.id = ids();
        f.family = wf;
        f.kind = WaveKind::rarefaction;
        f.strength = sigma / pieces;
        f.left = cur;
        f.right = next;
        f.birth_t = t;
        f.birth_x = x;
        const auto sp = sys.eigen(next);
        f.speed = fam == Family::one ? sp.lambda1 : sp.lambda2;
        f.anchor_t = t;
        f.anchor_x = x;
        out.push_back(f);
        cur = next;
    }
}

inline FanResult build_fan(const EulerSystem& sys, Vec2 um, double sigma1, double sigma2, double delta,
                           double t, double x, const ShockSpeedFn& speed_fn, IdGen& ids) {
    FanResult fan;
    fan.u_minus = um;
    Vec2 cur = um;
    emit_family(sys, cur, Family::one, sigma1, delta, t, x, speed_fn, ids, fan.fronts);
    emit_family(sys, cur, Family::two, sigma2, delta, t, x, speed_fn, ids, fan.fronts);
    fan.u_plus = cur;
    return fan;
}

}  // namespace detail

// Resolve (u_minus, u_plus) exactly and emit the discretized fan. The last
// front is snapped onto u_plus so that neighbouring states chain without
// residual drift.
inline FanResult accurate_solve(const EulerSystem& sys, Vec2 um, Vec2 up, double delta, double t,
                                double x, const ShockSpeedFn& speed_fn, IdGen& ids,
                                const SolveOptions& opts = {}) {
    if (delta <= 0.0) throw ConfigError("accurate_solve: delta must be > 0");
    const auto spec = solve_riemann(sys, um, up, opts);
    FanResult fan = detail::build_fan(sys, um, spec.sigma1, spec.sigma2, delta, t, x, speed_fn, ids);
    if (!fan.fronts.empty()) fan.fronts.back().right = up;
    fan.u_plus = up;
    return fan;
}

// Combine the incoming physical strengths per family, emit the accurate fan
// for the combined jump, and close onto u_plus with a non-physical front at
// speed lambda_hat. Incoming non-physical fronts contribute no strength.
inline FanResult simplified_solve(const EulerSystem& sys, const std::vector<Front>& incoming, Vec2 um,
                                  Vec2 up, double delta, double t, double x, double lambda_hat,
                                  const ShockSpeedFn& speed_fn, IdGen& ids) {
    if (delta <= 0.0) throw ConfigError("simplified_solve: delta must be > 0");
    double s1 = 0.0, s2 = 0.0;
    for (const Front& f : incoming) {
        if (f.family == WaveFamily::f1) s1 += f.strength;
        if (f.family == WaveFamily::f2) s2 += f.strength;
    }
    FanResult fan = detail::build_fan(sys, um, s1, s2, delta, t, x, speed_fn, ids);
    Front np;
    np.id = ids();
    np.family = WaveFamily::np;
    np.kind = WaveKind::nonphysical;
    np.left = fan.u_plus;
    np.right = up;
    np.strength = norm(np.right - np.left);
    np.birth_t = t;
    np.birth_x = x;
    np.speed = lambda_hat;
    np.anchor_t = t;
    np.anchor_x = x;
    fan.fronts.push_back(np);
    fan.u_plus = up;
    return fan;
}

}  // namespace fronttrack
