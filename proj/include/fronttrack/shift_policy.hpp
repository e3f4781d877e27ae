// shift_policy.hpp: the rule assigning speeds to shock fronts. Shocks may
// move with the Rankine-Hugoniot speed, a constant offset from it, or a
// speed chosen to minimize the weighted relative-entropy dissipation
// against traces of a reference solution. All speeds are confined to the
// per-family admissible windows, which also enforce the separation of the
// two families.
#pragma once

#include <functional>
#include <utility>

#include "fronttrack/front.hpp"

namespace fronttrack {

// Traces of the reference ("wild") solution: (u(t,x-), u(t,x+)).
using TraceProvider = std::function<std::pair<Vec2, Vec2>(double t, double x)>;

struct ShiftPolicySpec {
    enum class Mode { rankine_hugoniot, constant_offset, dissipation_greedy };
    Mode mode = Mode::rankine_hugoniot;
    double offset = 0.0;  // constant_offset only
};

// Admissible speed windows. Slow-family fronts live in [-lambda_hat/2,
// alpha1], fast-family fronts in [alpha2, lambda_hat/2]; alpha1 < alpha2
// sit inside the characteristic gap of the box, so the families can never
// cross. Non-physical fronts ride at exactly lambda_hat.
struct SpeedWindows {
    double lambda_hat = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    static SpeedWindows from_certificate(const Certificate& cert) {
        const double gap = cert.family_gap();
        if (!(gap > 0.0))
            throw ConfigError("speed windows: state box has no characteristic gap (inf lambda2 <= sup lambda1); shrink the box");
        SpeedWindows w;
        w.lambda_hat = 2.0 * cert.big_l;
        w.alpha1 = cert.lambda1_sup + 0.1 * gap;
        w.alpha2 = cert.lambda2_inf - 0.1 * gap;
        return w;
    }

    std::pair<double, double> window(WaveFamily f) const {
        if (f == WaveFamily::f1) return {-0.5 * lambda_hat, alpha1};
        return {alpha2, 0.5 * lambda_hat};
    }

    double clamp(WaveFamily f, double speed) const {
        auto [lo, hi] = window(f);
        return std::min(hi, std::max(lo, speed));
    }
};

struct ShiftDecision {
    double speed = 0.0;
    double dissipation = 0.0;  // D at the chosen speed; 0 when no traces exist
    bool had_traces = false;
};

// Weighted dissipation of a shock front against traces (um, up) at speed
// hdot, with the front's own states as references: the right weight
// multiplies the right-trace bracket.
inline double shock_dissipation(const EulerSystem& sys, const Vec2& ul, const Vec2& ur, Vec2 um, Vec2 up,
                                double a_left, double a_right, double hdot) {
    return a_right * (sys.relative_entropy_flux(up, ur) - hdot * sys.relative_entropy(up, ur)) -
           a_left * (sys.relative_entropy_flux(um, ul) - hdot * sys.relative_entropy(um, ul));
}

// Speed decision for one shock front. For the greedy mode the dissipation
// is affine in the speed, so the optimum sits at a window endpoint; ties
// (vanishing slope and constant) fall back to the clamped RH speed.
inline ShiftDecision shift_speed(const EulerSystem& sys, const ShiftPolicySpec& spec,
                                 const SpeedWindows& windows, WaveFamily family, const Vec2& ul,
                                 const Vec2& ur, double rh_speed, double a_left, double a_right,
                                 const TraceProvider& traces, double t, double x) {
    if (family == WaveFamily::np) return {windows.lambda_hat, 0.0, false};
    ShiftDecision d;
    std::pair<Vec2, Vec2> tr;
    if (traces) {
        tr = traces(t, x);
        d.had_traces = true;
    }
    auto diss = [&](double s) {
        return d.had_traces ? shock_dissipation(sys, ul, ur, tr.first, tr.second, a_left, a_right, s) : 0.0;
    };
    switch (spec.mode) {
        case ShiftPolicySpec::Mode::rankine_hugoniot:
            d.speed = windows.clamp(family, rh_speed);
            d.dissipation = diss(d.speed);
            return d;
        case ShiftPolicySpec::Mode::constant_offset:
            d.speed = windows.clamp(family, rh_speed + spec.offset);
            d.dissipation = diss(d.speed);
            return d;
        case ShiftPolicySpec::Mode::dissipation_greedy:
            break;
    }
    if (!d.had_traces)
        throw ConfigError("shift policy dissipation-greedy requires reference traces");
    auto [lo, hi] = windows.window(family);
    const double d_lo = diss(lo);
    const double d_hi = diss(hi);
    const double rh = windows.clamp(family, rh_speed);
    const double d_rh = diss(rh);
    if (std::fabs(d_lo - d_hi) <= 1e-15 * (1.0 + std::fabs(d_lo))) {
        d.speed = rh;  // flat dissipation, keep the physical speed
        d.dissipation = d_rh;
        return d;
    }
    d.speed = d_lo < d_hi ? lo : hi;
    d.dissipation = std::min(d_lo, d_hi);
    return d;
}

}  // namespace fronttrack
