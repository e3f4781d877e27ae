// exact_riemann.hpp: closed-form exact Riemann solution in primitive
// variables for isentropic Euler. Independent of the wave-curve machinery;
// the finite-volume reference scheme uses its self-similar sampling, and it
// doubles as an oracle for the arclength-based solver.
#pragma once

#include <cmath>

#include "fronttrack/base.hpp"
#include "fronttrack/euler.hpp"

namespace fronttrack {

struct ExactRiemann {
    double rho_star = 0.0;
    double v_star = 0.0;
    bool left_is_shock = false;
    bool right_is_shock = false;
    // Wave edge speeds, left to right: [head1, tail1, head2, tail2]. For a
    // shock head == tail == the shock speed.
    double s1_head = 0.0, s1_tail = 0.0, s2_head = 0.0, s2_tail = 0.0;
};

namespace detail {

// Velocity drop across the 1-wave (rho* vs left density), and the symmetric
// rise across the 2-wave. Shock branch for compression, isentrope otherwise.
inline double wave_fn(const EulerSystem& sys, double rho_star, double rho_side, double c_side) {
    if (rho_star > rho_side) {
        const double dp = sys.pressure(rho_star) - sys.pressure(rho_side);
        return std::sqrt(dp * (rho_star - rho_side) / (rho_star * rho_side));
    }
    return 2.0 * (sys.sound_speed(rho_star) - c_side) / (sys.gamma() - 1.0);
}

inline double wave_fn_derivative(const EulerSystem& sys, double rho_star, double rho_side, double c_side) {
    const double g = sys.gamma();
    if (rho_star > rho_side) {
        const double dp = sys.pressure(rho_star) - sys.pressure(rho_side);
        const double dr = rho_star - rho_side;
        const double phi = std::sqrt(dp * dr / (rho_star * rho_side));
        if (phi == 0.0) return sys.sound_speed(rho_side) / rho_side;
        const double dpd = g * std::pow(rho_star, g - 1.0);
        const double num_d = dpd * dr + dp;
        return 0.5 * (num_d / (rho_star * rho_side) - dp * dr / (rho_star * rho_star * rho_side)) / phi;
    }
    (void)c_side;
    // d/drho of 2 c(rho)/(gamma-1) = c(rho)/rho.
    return sys.sound_speed(rho_star) / rho_star;
}

}  // namespace detail

// Solve for the middle state of the Riemann problem (ul, ur). Monotone
// scalar root-find in the middle density; throws NumericalError if the
// states would open a vacuum.
inline ExactRiemann solve_exact_riemann(const EulerSystem& sys, Vec2 ul, Vec2 ur) {
    if (!(ul.rho > 0.0) || !(ur.rho > 0.0))
        throw std::domain_error("solve_exact_riemann: requires positive densities");
    const double vl = EulerSystem::velocity(ul);
    const double vr = EulerSystem::velocity(ur);
    const double cl = sys.sound_speed(ul.rho);
    const double cr = sys.sound_speed(ur.rho);
    const double g = sys.gamma();

    if (vr - vl >= 2.0 * (cl + cr) / (g - 1.0))
        throw NumericalError("solve_exact_riemann: states open a vacuum region");

    auto f = [&](double rho) {
        return (vl - detail::wave_fn(sys, rho, ul.rho, cl)) - (vr + detail::wave_fn(sys, rho, ur.rho, cr));
    };
    // f is strictly decreasing; bracket then Newton with bisection safeguard.
    double lo = 1e-12, hi = std::max(ul.rho, ur.rho);
    while (f(hi) > 0.0) hi *= 2.0;
    double rho = 0.5 * (lo + hi);
    for (int it = 0; it < 120; ++it) {
        if (hi - lo <= 4e-16 * rho) break;
        const double fr = f(rho);
        if (fr > 0.0) lo = rho; else hi = rho;
        const double d = -detail::wave_fn_derivative(sys, rho, ul.rho, cl) -
                         detail::wave_fn_derivative(sys, rho, ur.rho, cr);
        double next = d != 0.0 ? rho - fr / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - rho) <= 1e-16 * rho) { rho = next; break; }
        rho = next;
    }

    ExactRiemann sol;
    sol.rho_star = rho;
    sol.v_star = 0.5 * ((vl - detail::wave_fn(sys, rho, ul.rho, cl)) + (vr + detail::wave_fn(sys, rho, ur.rho, cr)));
    sol.left_is_shock = rho > ul.rho;
    sol.right_is_shock = rho > ur.rho;
    const double cs = sys.sound_speed(rho);
    if (sol.left_is_shock) {
        const double speed = (rho * sol.v_star - ul.mom) / (rho - ul.rho);
        sol.s1_head = sol.s1_tail = speed;
    } else {
        sol.s1_head = vl - cl;
        sol.s1_tail = sol.v_star - cs;
    }
    if (sol.right_is_shock) {
        const double speed = (ur.mom - rho * sol.v_star) / (ur.rho - rho);
        sol.s2_head = sol.s2_tail = speed;
    } else {
        sol.s2_head = sol.v_star + cs;
        sol.s2_tail = vr + cr;
    }
    return sol;
}

// Self-similar solution value at speed xi = x/t. Rarefaction interiors are
// closed-form via the constant Riemann invariant of the opposite family.
inline Vec2 sample_exact_riemann(const EulerSystem& sys, const ExactRiemann& sol, Vec2 ul, Vec2 ur,
                                 double xi) {
    const double g = sys.gamma();
    auto state_from_c = [&](double c, double v) {
        const double rho = std::pow(c * c / g, 1.0 / (g - 1.0));
        return Vec2{rho, rho * v};
    };
    if (xi <= sol.s1_head) return ul;
    if (xi < sol.s1_tail) {
        // inside the 1-fan: v + 2c/(g-1) is constant, v - c = xi
        const double w = EulerSystem::velocity(ul) + 2.0 * sys.sound_speed(ul.rho) / (g - 1.0);
        const double c = (w - xi) * (g - 1.0) / (g + 1.0);
        return state_from_c(c, xi + c);
    }
    if (xi <= sol.s2_head) return {sol.rho_star, sol.rho_star * sol.v_star};
    if (xi < sol.s2_tail) {
        const double w = EulerSystem::velocity(ur) - 2.0 * sys.sound_speed(ur.rho) / (g - 1.0);
        const double c = (xi - w) * (g - 1.0) / (g + 1.0);
        return state_from_c(c, xi - c);
    }
    return ur;
}

// State seen by a stationary observer at the interface; the Godunov flux is
// the flux of this state.
inline Vec2 godunov_interface_state(const EulerSystem& sys, Vec2 ul, Vec2 ur) {
    if (norm(ul - ur) == 0.0) return ul;
    const ExactRiemann sol = solve_exact_riemann(sys, ul, ur);
    return sample_exact_riemann(sys, sol, ul, ur, 0.0);
}

}  // namespace fronttrack
