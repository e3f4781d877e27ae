// wave_curves.hpp: admissible shock branches of the Hugoniot locus,
// rarefaction integral curves, the forward composite curves T_i, and the
// two-wave Riemann solver in the arclength parametrization.
//
// Conventions: wave strength sigma is arclength in conserved variables;
// sigma > 0 selects the shock branch, sigma < 0 the rarefaction branch.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "fronttrack/base.hpp"
#include "fronttrack/system.hpp"
#include "fronttrack/euler.hpp"

namespace fronttrack {

enum class Family : int { one = 1, two = 2 };

inline int index_of(Family f) { return f == Family::one ? 1 : 2; }

struct WaveCurvePoint {
    Vec2 state{};    // the non-anchored end of the wave
    double speed = 0.0;  // shock speed on the shock branch, characteristic speed otherwise
    double s = 0.0;      // arclength from the anchor
};

enum class Side { left_anchored, right_anchored };

struct RiemannFanSpec {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    Vec2 middle{};
};

struct SolveOptions {
    double closeness_radius = 0.5;
    double tol = 1e-12;
    int max_iter = 100;
    bool allow_newton = true;  // tests can force the bisection fallback
};

namespace detail {

constexpr double kRhoFloor = 1e-9;

inline void check_state_space(Vec2 u, const char* where) {
    if (!(u.rho > kRhoFloor)) throw std::range_error(std::string(where) + ": state left the state space (density " + std::to_string(u.rho) + ")");
}

// Momentum of the Hugoniot-branch endpoint at density rho, anchored at
// `anchor` on the given side. Admissible branches: the 1-family compresses
// left-to-right (rho_R > rho_L), the 2-family expands (rho_R < rho_L);
// velocity decreases across either shock.
inline Vec2 hugoniot_state(const EulerSystem& sys, Vec2 anchor, double rho, Side side) {
    const double ra = anchor.rho;
    const double va = EulerSystem::velocity(anchor);
    const double dp = sys.pressure(rho) - sys.pressure(ra);
    const double dr = rho - ra;
    const double phi = std::sqrt(std::max(0.0, dp * dr / (rho * ra)));
    const double v = side == Side::left_anchored ? va - phi : va + phi;
    return {rho, rho * v};
}

inline double hugoniot_rho_direction(Family family, Side side) {
    // (1, left) and (2, right) increase density; the duals decrease it.
    const bool up = (family == Family::one) == (side == Side::left_anchored);
    return up ? 1.0 : -1.0;
}

inline double rh_speed(Vec2 ul, Vec2 ur) {
    return (ur.mom - ul.mom) / (ur.rho - ul.rho);
}

}  // namespace detail

// Point at arclength s on the admissible shock branch through `anchor`.
// left_anchored returns the right state of the shock, right_anchored the
// left state. s = 0 degenerates to the anchor with its characteristic speed.
inline WaveCurvePoint shock_curve(const EulerSystem& sys, Vec2 anchor, Family family, double s, Side side) {
    detail::check_state_space(anchor, "shock_curve");
    if (s < 0.0) throw std::domain_error("shock_curve: arclength must be >= 0");
    const auto sp = sys.eigen(anchor);
    if (s == 0.0) return {anchor, family == Family::one ? sp.lambda1 : sp.lambda2, 0.0};

    const double dir = detail::hugoniot_rho_direction(family, side);
    auto len = [&](double rho) { return norm(detail::hugoniot_state(sys, anchor, rho, side) - anchor); };

    // Bracket the target arclength along the branch, then bisect with a
    // secant polish. Chord length grows monotonically with |rho - anchor|.
    double lo = anchor.rho;
    double step = std::max(1e-4, 0.1 * s);
    double hi = lo;
    for (int k = 0; k < 200; ++k) {
        hi = lo + dir * step;
        if (hi <= detail::kRhoFloor) {
            hi = detail::kRhoFloor;
            if (len(hi) < s) throw std::range_error("shock_curve: arclength drives the state out of the state space");
            break;
        }
        if (len(hi) >= s) break;
        step *= 2.0;
        if (k == 199) throw NumericalError("shock_curve: failed to bracket arclength " + std::to_string(s));
    }
    double a = anchor.rho, b = hi;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (a + b);
        if (len(mid) < s) a = mid; else b = mid;
        if (std::fabs(b - a) < 1e-15 * std::max(1.0, std::fabs(b))) break;
    }
    double rho = 0.5 * (a + b);
    // Secant refinement on len(rho) - s.
    double r0 = a, r1 = b;
    double f0 = len(r0) - s, f1 = len(r1) - s;
    for (int k = 0; k < 8 && std::fabs(f1 - f0) > 0.0; ++k) {
        const double r2 = r1 - f1 * (r1 - r0) / (f1 - f0);
        if (!(std::min(a, b) <= r2 && r2 <= std::max(a, b))) break;
        r0 = r1; f0 = f1; r1 = r2; f1 = len(r2) - s;
        rho = r1;
    }

    const Vec2 state = detail::hugoniot_state(sys, anchor, rho, side);
    const Vec2 ul = side == Side::left_anchored ? anchor : state;
    const Vec2 ur = side == Side::left_anchored ? state : anchor;
    return {state, detail::rh_speed(ul, ur), s};
}

// Residual of the jump condition f(ur) - f(ul) = speed (ur - ul).
inline double rankine_hugoniot_residual(const EulerSystem& sys, Vec2 ul, Vec2 ur, double speed) {
    return norm(sys.flux(ur) - sys.flux(ul) - speed * (ur - ul));
}

// Entropy production of a discontinuity; <= 0 for admissible shocks.
inline double shock_entropy_dissipation(const EulerSystem& sys, Vec2 ul, Vec2 ur, double speed) {
    return sys.entropy_flux(ur) - sys.entropy_flux(ul) - speed * (sys.entropy(ur) - sys.entropy(ul));
}

inline bool lax_admissible(const EulerSystem& sys, Vec2 ul, Vec2 ur, double speed, Family family) {
    const auto sl = sys.eigen(ul);
    const auto sr = sys.eigen(ur);
    if (family == Family::one) return sr.lambda1 < speed && speed < sl.lambda1 && speed < sr.lambda2;
    return sr.lambda2 < speed && speed < sl.lambda2 && speed > sl.lambda1;
}

// Integral curve of the unit eigenvector field, oriented so the
// characteristic speed increases with s. Classical RK4 with fixed step
// s/64; smooth short curves, so the step-doubling error sits well under
// 1e-10 (checked in the tests).
inline WaveCurvePoint rarefaction_curve(const EulerSystem& sys, Vec2 anchor, Family family, double s,
                                        int steps = 64) {
    detail::check_state_space(anchor, "rarefaction_curve");
    if (s < 0.0) throw std::domain_error("rarefaction_curve: arclength must be >= 0");
    auto tangent = [&](Vec2 u) {
        detail::check_state_space(u, "rarefaction_curve");
        const auto sp = sys.eigen(u);
        return family == Family::one ? sp.r1 : sp.r2;
    };
    Vec2 u = anchor;
    const double h = s / steps;
    for (int k = 0; k < steps; ++k) {
        const Vec2 k1 = tangent(u);
        const Vec2 k2 = tangent(u + 0.5 * h * k1);
        const Vec2 k3 = tangent(u + 0.5 * h * k2);
        const Vec2 k4 = tangent(u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    detail::check_state_space(u, "rarefaction_curve");
    const auto sp = sys.eigen(u);
    return {u, family == Family::one ? sp.lambda1 : sp.lambda2, s};
}

// Composite forward curve T_family: shock branch for sigma > 0 (anchored on
// the left), rarefaction branch for sigma < 0. C1 across sigma = 0.
inline Vec2 forward_wave_curve(const EulerSystem& sys, Vec2 u, Family family, double sigma) {
    if (sigma == 0.0) return u;
    if (sigma > 0.0) return shock_curve(sys, u, family, sigma, Side::left_anchored).state;
    return rarefaction_curve(sys, u, family, -sigma).state;
}

namespace detail {

inline Vec2 reconstruct(const EulerSystem& sys, Vec2 um, double s1, double s2) {
    return forward_wave_curve(sys, forward_wave_curve(sys, um, Family::one, s1), Family::two, s2);
}

// Bisection fallback along the curve parameters. The middle state must lie
// on the backward 2-locus of u_plus, whose velocity is closed-form in the
// density (Hugoniot relation on the shock side, constant slow Riemann
// invariant on the rarefaction side); bisect sigma1 on that mismatch, then
// recover sigma2 along the 2-curve.
inline std::optional<RiemannFanSpec> bisect_fan(const EulerSystem& sys, Vec2 um, Vec2 up, double radius,
                                                double tol) {
    const double g = sys.gamma();
    const double vr = EulerSystem::velocity(up);
    const double cr = sys.sound_speed(up.rho);
    auto v_back2 = [&](double rho) {
        if (rho > up.rho) {
            const double dp = sys.pressure(rho) - sys.pressure(up.rho);
            return vr + std::sqrt(dp * (rho - up.rho) / (rho * up.rho));
        }
        return vr + 2.0 * (sys.sound_speed(rho) - cr) / (g - 1.0);
    };
    auto mismatch = [&](double s1) {
        const Vec2 mid = forward_wave_curve(sys, um, Family::one, s1);
        return EulerSystem::velocity(mid) - v_back2(mid.rho);
    };
    double lo = -radius, hi = radius, flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    for (int shrink = 0; shrink < 20 && !bracketed; ++shrink) {
        try {
            flo = mismatch(lo);
            fhi = mismatch(hi);
            bracketed = true;
        } catch (const std::range_error&) {
            lo *= 0.5;
            hi *= 0.5;
        }
    }
    if (!bracketed || flo * fhi > 0.0) return std::nullopt;
    for (int k = 0; k < 160; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mismatch(mid);
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
    }
    const double s1 = 0.5 * (lo + hi);
    const Vec2 middle = forward_wave_curve(sys, um, Family::one, s1);

    double s2 = 0.0;
    if (middle.rho > up.rho) {
        // 2-shock: arclength equals the chord from the anchor.
        s2 = norm(up - middle);
    } else if (middle.rho < up.rho) {
        // 2-rarefaction: density grows monotonically along the curve.
        double a = 0.0, b = 1e-3;
        auto dens = [&](double h) { return forward_wave_curve(sys, middle, Family::two, -h).rho - up.rho; };
        while (dens(b) < 0.0 && b < 4.0 * radius) b *= 2.0;
        for (int k = 0; k < 160; ++k) {
            const double mid = 0.5 * (a + b);
            if (dens(mid) < 0.0) a = mid; else b = mid;
        }
        s2 = -0.5 * (a + b);
    }
    RiemannFanSpec spec{s1, s2, middle};
    if (norm(reconstruct(sys, um, s1, s2) - up) > std::max(1e-9, 100.0 * tol)) return std::nullopt;
    return spec;
}

}  // namespace detail

// Resolve u_plus = T2(sigma2) T1(sigma1) u_minus for the signed strengths.
// Damped Newton from (0,0) with numerical Jacobian; bisection fallback on
// stall. Residual tolerance applies to the reconstruction error.
inline RiemannFanSpec solve_riemann(const EulerSystem& sys, Vec2 um, Vec2 up,
                                    const SolveOptions& opts = {}) {
    detail::check_state_space(um, "solve_riemann");
    detail::check_state_space(up, "solve_riemann");
    if (norm(um - up) > opts.closeness_radius)
        throw std::range_error("solve_riemann: states exceed the closeness radius " +
                               std::to_string(opts.closeness_radius));
    if (norm(um - up) == 0.0) return {0.0, 0.0, um};

    double s1 = 0.0, s2 = 0.0;
    auto resid = [&](double a, double b) { return detail::reconstruct(sys, um, a, b) - up; };

    if (opts.allow_newton) {
        Vec2 g = resid(s1, s2);
        for (int it = 0; it < opts.max_iter; ++it) {
            if (norm(g) <= opts.tol) {
                RiemannFanSpec spec{s1, s2, forward_wave_curve(sys, um, Family::one, s1)};
                return spec;
            }
            const double h = 1e-7;
            Vec2 d1, d2;
            try {
                d1 = (resid(s1 + h, s2) - resid(s1 - h, s2)) / (2 * h);
                d2 = (resid(s1, s2 + h) - resid(s1, s2 - h)) / (2 * h);
            } catch (const std::range_error&) {
                break;  // curve evaluation left the state space; fall back
            }
            const double det = d1.rho * d2.mom - d1.mom * d2.rho;
            if (std::fabs(det) < 1e-14) break;
            const double ds1 = (-g.rho * d2.mom + g.mom * d2.rho) / det;
            const double ds2 = (-d1.rho * g.mom + d1.mom * g.rho) / det;
            double t = 1.0;
            bool moved = false;
            for (int half = 0; half < 40; ++half) {
                try {
                    const Vec2 gn = resid(s1 + t * ds1, s2 + t * ds2);
                    if (norm(gn) < norm(g)) {
                        s1 += t * ds1;
                        s2 += t * ds2;
                        g = gn;
                        moved = true;
                        break;
                    }
                } catch (const std::range_error&) {
                    // shrink into the state space
                }
                t *= 0.5;
            }
            if (!moved) break;
        }
        if (norm(g) <= opts.tol)
            return {s1, s2, forward_wave_curve(sys, um, Family::one, s1)};
    }

    if (auto spec = detail::bisect_fan(sys, um, up, opts.closeness_radius, opts.tol)) return *spec;
    throw NumericalError("solve_riemann: no convergence; residual " +
                         std::to_string(norm(resid(s1, s2))));
}

}  // namespace fronttrack
