// front.hpp: a front is one straight-line discontinuity of the piecewise
// constant approximate solution. Physical fronts carry a signed strength
// (positive shock, negative rarefaction piece); non-physical fronts carry
// the modulus of their state jump and ride at the fixed supersonic speed.
#pragma once

#include <vector>

#include "fronttrack/base.hpp"
#include "fronttrack/wave_curves.hpp"

namespace fronttrack {

enum class WaveFamily : int { f1 = 1, f2 = 2, np = 3 };
enum class WaveKind { shock, rarefaction, nonphysical };

inline bool is_physical(WaveFamily f) { return f != WaveFamily::np; }

struct Front {
    int id = -1;
    WaveFamily family = WaveFamily::f1;
    WaveKind kind = WaveKind::shock;
    double strength = 0.0;  // signed for physical fronts, |jump| >= 0 for np
    Vec2 left{};
    Vec2 right{};
    double birth_t = 0.0;
    double birth_x = 0.0;
    double speed = 0.0;

    // Motion anchor: position(t) = anchor_x + speed*(t - anchor_t). Reset
    // whenever the speed is re-evaluated.
    double anchor_t = 0.0;
    double anchor_x = 0.0;

    double position(double t) const { return anchor_x + speed * (t - anchor_t); }
    double abs_strength() const { return std::fabs(strength); }
};

struct FanResult {
    std::vector<Front> fronts;  // ordered left to right, speeds increasing
    Vec2 u_minus{};
    Vec2 u_plus{};
};

struct IdGen {
    int next = 0;
    int operator()() { return next++; }
};

}  // namespace fronttrack
