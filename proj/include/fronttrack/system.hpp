// system.hpp: the interface a 2x2 genuinely nonlinear system must expose,
// plus the certified-constants record computed once per state box.
#pragma once

#include <concepts>
#include <utility>

#include "fronttrack/base.hpp"

namespace fronttrack {

// Closed rectangle in (density, velocity) on which constants are certified.
struct StateBox {
    double rho_lo = 0.25;
    double rho_hi = 4.0;
    double v_abs = 2.0;

    bool contains(double rho, double v) const {
        return rho >= rho_lo && rho <= rho_hi && std::fabs(v) <= v_abs;
    }
};

// Characteristic data at a point: two speeds and unit right eigenvectors
// oriented so the field's speed increases along them. big_l is the global
// speed bound on the certified box.
struct Spectral {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Vec2 r1{};
    Vec2 r2{};
    double big_l = 0.0;
};

// Constants measured on the state box at construction. The entropy
// equivalence constants bound eta(a|b) between c_lo*|a-b|^2 and
// c_hi*|a-b|^2 for a, b in the box; rel_flux_bound is the constant in
// |q(a;b)| <= C eta(a|b); rel_lipschitz bounds the b-dependence of both
// relative quantities.
struct Certificate {
    double big_l = 0.0;          // max |lambda_i| over the box
    double lambda1_sup = 0.0;    // sup of the slow speed
    double lambda2_inf = 0.0;    // inf of the fast speed
    double c_lo = 0.0;
    double c_hi = 0.0;
    double rel_flux_bound = 0.0;
    double rel_lipschitz = 0.0;

    double family_gap() const { return lambda2_inf - lambda1_sup; }
};

// clang-format off
template <typename S>
concept System2x2 = requires(const S s, Vec2 u, Vec2 b) {
    { s.flux(u) } -> std::same_as<Vec2>;
    { s.flux_jacobian(u) } -> std::same_as<std::array<Vec2, 2>>;
    { s.eigen(u) } -> std::same_as<Spectral>;
    { s.entropy(u) } -> std::same_as<double>;
    { s.entropy_flux(u) } -> std::same_as<double>;
    { s.entropy_gradient(u) } -> std::same_as<Vec2>;
    { s.relative_entropy(u, b) } -> std::same_as<double>;
    { s.relative_entropy_flux(u, b) } -> std::same_as<double>;
    { s.relative_flux(u, b) } -> std::same_as<Vec2>;
    { s.box() } -> std::same_as<const StateBox&>;
    { s.certificate() } -> std::same_as<const Certificate&>;
};
// clang-format on

}  // namespace fronttrack
