// weight.hpp: the signed shock measure and the piecewise-constant weight
// a(t,x) = 1 + C (L + kappa Q + integral of the measure up to x). Slow
// shocks carry negative atoms, fast shocks positive ones; rarefaction and
// non-physical fronts carry none, so a is constant across them.
#pragma once

#include <string>
#include <vector>

#include "fronttrack/front.hpp"
#include "fronttrack/piecewise.hpp"

namespace fronttrack {

struct SignedAtom {
    double position = 0.0;
    double mass = 0.0;
    int front_id = -1;
};

// One atom per physical shock, in front order.
inline std::vector<SignedAtom> build_mu(const std::vector<Front>& fronts, double t) {
    std::vector<SignedAtom> atoms;
    for (const Front& f : fronts) {
        if (f.kind != WaveKind::shock) continue;
        const double sign = f.family == WaveFamily::f1 ? -1.0 : 1.0;
        atoms.push_back({f.position(t), sign * f.strength, f.id});
    }
    return atoms;
}

using WeightProfile = PiecewiseConstant<double>;

// Profile from the ordered front list. Requires C(2L + kappa Q) <= 1/2 so
// that |a - 1| <= 1/2 holds everywhere.
inline WeightProfile build_weight(const std::vector<Front>& fronts, double t, double l_total,
                                  double q_total, double kappa, double c_weight) {
    const double margin = c_weight * (2.0 * l_total + kappa * q_total);
    if (!(margin <= 0.5))
        throw ConfigError("weight precondition violated: C(L + kappa Q + L) = " + std::to_string(margin) +
                          " > 1/2 (C = " + std::to_string(c_weight) + ", L = " + std::to_string(l_total) +
                          ", Q = " + std::to_string(q_total) + ")");
    WeightProfile w;
    double a = 1.0 + c_weight * (l_total + kappa * q_total);
    w.values.push_back(a);
    for (const Front& f : fronts) {
        if (f.kind != WaveKind::shock) continue;
        const double sign = f.family == WaveFamily::f1 ? -1.0 : 1.0;
        a += c_weight * sign * f.strength;
        w.xs.push_back(f.position(t));
        w.values.push_back(a);
    }
    return w;
}

struct WeightJumpRecord {
    int front_id = -1;
    WaveFamily family = WaveFamily::f1;
    double ratio = 1.0;
    double lo = 1.0;
    double hi = 1.0;
    bool ok = true;
};

// Per-shock ratio windows: across a slow shock the weight drops by a factor
// in [1-2Cs, 1-Cs/2], across a fast shock it grows by one in [1+Cs/2, 1+2Cs].
inline std::vector<WeightJumpRecord> check_weight_jumps(const std::vector<Front>& fronts,
                                                        const WeightProfile& w, double c_weight) {
    std::vector<WeightJumpRecord> out;
    std::size_t k = 0;
    for (const Front& f : fronts) {
        if (f.kind != WaveKind::shock) continue;
        WeightJumpRecord r;
        r.front_id = f.id;
        r.family = f.family;
        const double s = f.strength;
        r.ratio = w.values[k + 1] / w.values[k];
        if (f.family == WaveFamily::f1) {
            r.lo = 1.0 - 2.0 * c_weight * s;
            r.hi = 1.0 - 0.5 * c_weight * s;
        } else {
            r.lo = 1.0 + 0.5 * c_weight * s;
            r.hi = 1.0 + 2.0 * c_weight * s;
        }
        r.ok = r.lo - 1e-12 <= r.ratio && r.ratio <= r.hi + 1e-12;
        out.push_back(r);
        ++k;
    }
    return out;
}

}  // namespace fronttrack
