// euler.hpp: isentropic Euler in conserved variables u = (rho, rho*v) with
// pressure rho^gamma, physical entropy pair, relative (Taylor-remainder)
// quantities, and Riemann invariants. Box constants are certified at
// construction by grid scan and sampling.
#pragma once

#include <array>
#include <algorithm>
#include <cmath>

#include "fronttrack/base.hpp"
#include "fronttrack/system.hpp"

namespace fronttrack {

struct SystemParams {
    double gamma = 2.0;
    double inv_bound = 8.0;  // C of the invariant region -C < w1 <= w2 < C
    double c1 = 0.0;         // Riemann-invariant coefficient; 0 = canonical 2*sqrt(gamma)/(gamma-1)
    StateBox state_box{};

    void validate() const {
        if (!(gamma > 1.0)) throw ConfigError("system.gamma must be > 1");
        if (!(inv_bound > 0.0)) throw ConfigError("system.inv_bound must be > 0");
        if (!(state_box.rho_lo > 0.0)) throw ConfigError("system.state_box needs rho_lo > 0");
        if (!(state_box.rho_hi > state_box.rho_lo)) throw ConfigError("system.state_box needs rho_hi > rho_lo");
        if (!(state_box.v_abs >= 0.0)) throw ConfigError("system.state_box needs v_abs >= 0");
        if (c1 < 0.0) throw ConfigError("system.c1 must be >= 0 (0 selects the canonical value)");
    }
};

class EulerSystem {
public:
    explicit EulerSystem(SystemParams params) : p_(params) {
        p_.validate();
        c1_ = p_.c1 > 0.0 ? p_.c1 : 2.0 * std::sqrt(p_.gamma) / (p_.gamma - 1.0);
        certify();
    }

    double gamma() const { return p_.gamma; }
    double inv_bound() const { return p_.inv_bound; }
    double c1() const { return c1_; }
    const StateBox& box() const { return p_.state_box; }
    const Certificate& certificate() const { return cert_; }

    static double velocity(Vec2 u) { return u.rho > 0.0 ? u.mom / u.rho : 0.0; }
    double pressure(double rho) const { return std::pow(rho, p_.gamma); }
    double sound_speed(double rho) const { return std::sqrt(p_.gamma * std::pow(rho, p_.gamma - 1.0)); }

    bool in_box(Vec2 u) const { return u.rho > 0.0 && p_.state_box.contains(u.rho, velocity(u)); }

    // f(u) = (m, m^2/rho + rho^gamma), extended by continuity at vacuum.
    Vec2 flux(Vec2 u) const {
        require_admissible(u, "flux");
        if (u.rho == 0.0) return {0.0, 0.0};
        return {u.mom, u.mom * u.mom / u.rho + pressure(u.rho)};
    }

    // Rows of f'(u).
    std::array<Vec2, 2> flux_jacobian(Vec2 u) const {
        require_interior(u, "flux_jacobian");
        const double v = velocity(u);
        const double c2 = p_.gamma * std::pow(u.rho, p_.gamma - 1.0);
        return {Vec2{0.0, 1.0}, Vec2{c2 - v * v, 2.0 * v}};
    }

    Spectral eigen(Vec2 u) const {
        require_interior(u, "eigen");
        const double v = velocity(u);
        const double c = sound_speed(u.rho);
        Spectral s;
        s.lambda1 = v - c;
        s.lambda2 = v + c;
        // Unit eigenvectors of f'(u) are (1, lambda)/|..|; orientation makes
        // lambda_i strictly increasing along r_i (genuine nonlinearity).
        const double n1 = std::hypot(1.0, s.lambda1);
        const double n2 = std::hypot(1.0, s.lambda2);
        s.r1 = Vec2{-1.0 / n1, -s.lambda1 / n1};
        s.r2 = Vec2{1.0 / n2, s.lambda2 / n2};
        s.big_l = cert_.big_l;
        return s;
    }

    // eta(u) = m^2/(2 rho) + rho^gamma/(gamma-1), zero at vacuum.
    double entropy(Vec2 u) const {
        require_admissible(u, "entropy");
        if (u.rho == 0.0) return 0.0;
        return 0.5 * u.mom * u.mom / u.rho + std::pow(u.rho, p_.gamma) / (p_.gamma - 1.0);
    }

    // q(u) = rho v^3/2 + gamma/(gamma-1) rho^gamma v; satisfies q' = eta' f'.
    double entropy_flux(Vec2 u) const {
        require_admissible(u, "entropy_flux");
        if (u.rho == 0.0) return 0.0;
        const double v = velocity(u);
        return 0.5 * u.rho * v * v * v + p_.gamma / (p_.gamma - 1.0) * std::pow(u.rho, p_.gamma) * v;
    }

    Vec2 entropy_gradient(Vec2 u) const {
        require_interior(u, "entropy_gradient");
        const double v = velocity(u);
        return {-0.5 * v * v + p_.gamma / (p_.gamma - 1.0) * std::pow(u.rho, p_.gamma - 1.0), v};
    }

    // Rows of the entropy Hessian; positive definite off vacuum.
    std::array<Vec2, 2> entropy_hessian(Vec2 u) const {
        require_interior(u, "entropy_hessian");
        const double v = velocity(u);
        const double h11 = v * v / u.rho + p_.gamma * std::pow(u.rho, p_.gamma - 2.0);
        return {Vec2{h11, -v / u.rho}, Vec2{-v / u.rho, 1.0 / u.rho}};
    }

    // eta(a|b) = eta(a) - eta(b) - grad eta(b).(a-b); nonnegative, zero iff a = b.
    double relative_entropy(Vec2 a, Vec2 b) const {
        const Vec2 g = entropy_gradient(b);
        return entropy(a) - entropy(b) - dot(g, a - b);
    }

    // q(a;b) = q(a) - q(b) - grad eta(b).(f(a)-f(b)).
    double relative_entropy_flux(Vec2 a, Vec2 b) const {
        const Vec2 g = entropy_gradient(b);
        return entropy_flux(a) - entropy_flux(b) - dot(g, flux(a) - flux(b));
    }

    // f(a|b) = f(a) - f(b) - f'(b)(a-b), componentwise.
    Vec2 relative_flux(Vec2 a, Vec2 b) const {
        const auto j = flux_jacobian(b);
        const Vec2 d = a - b;
        const Vec2 lin{dot(j[0], d), dot(j[1], d)};
        return flux(a) - flux(b) - lin;
    }

    // w1 = v - c1 rho^((gamma-1)/2), w2 = v + c1 rho^((gamma-1)/2).
    std::pair<double, double> riemann_invariants(Vec2 u) const {
        require_admissible(u, "riemann_invariants");
        if (u.rho == 0.0) return {0.0, 0.0};
        const double v = velocity(u);
        const double w = c1_ * std::pow(u.rho, 0.5 * (p_.gamma - 1.0));
        return {v - w, v + w};
    }

    bool in_invariant_region(Vec2 u) const {
        if (u.rho == 0.0 && u.mom == 0.0) return true;
        if (u.rho <= 0.0) return false;
        auto [w1, w2] = riemann_invariants(u);
        return -p_.inv_bound < w1 && w2 < p_.inv_bound;
    }

private:
    void require_admissible(Vec2 u, const char* op) const {
        if (u.rho < 0.0) throw std::domain_error(std::string(op) + ": negative density");
        if (u.rho == 0.0 && u.mom != 0.0)
            throw std::domain_error(std::string(op) + ": vacuum with nonzero momentum");
    }
    void require_interior(Vec2 u, const char* op) const {
        if (!(u.rho > 0.0)) throw std::domain_error(std::string(op) + ": requires positive density");
    }

    // Grid scan of the box for speed bounds and entropy-Hessian eigenvalue
    // extremes, then fixed-seed sampling for the relative-quantity bounds.
    void certify() {
        const StateBox& b = p_.state_box;
        const int n = 100;
        double lam1_sup = -1e300, lam2_inf = 1e300, big = 0.0;
        double hmin = 1e300, hmax = -1e300;
        for (int i = 0; i <= n; ++i) {
            const double rho = b.rho_lo + (b.rho_hi - b.rho_lo) * i / n;
            for (int j = 0; j <= n; ++j) {
                const double v = -b.v_abs + 2.0 * b.v_abs * j / n;
                const Vec2 u{rho, rho * v};
                const double c = sound_speed(rho);
                lam1_sup = std::max(lam1_sup, v - c);
                lam2_inf = std::min(lam2_inf, v + c);
                big = std::max({big, std::fabs(v - c), std::fabs(v + c)});
                const auto h = entropy_hessian(u);
                const double tr = h[0].rho + h[1].mom;
                const double det = h[0].rho * h[1].mom - h[0].mom * h[1].rho;
                const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
                hmin = std::min(hmin, tr / 2.0 - disc);
                hmax = std::max(hmax, tr / 2.0 + disc);
            }
        }
        cert_.big_l = big;
        cert_.lambda1_sup = lam1_sup;
        cert_.lambda2_inf = lam2_inf;
        cert_.c_lo = 0.5 * hmin;
        cert_.c_hi = 0.5 * hmax;

        Rng rng(0x5eedULL);
        double qbound = 0.0, lip = 0.0;
        auto visit_pair = [&](Vec2 a, Vec2 c) {
            const double re = relative_entropy(a, c);
            if (re > 1e-14) qbound = std::max(qbound, std::fabs(relative_entropy_flux(a, c)) / re);
        };
        for (int k = 0; k < 20000; ++k) {
            const Vec2 a = sample_box(rng);
            const Vec2 c = sample_box(rng);
            visit_pair(a, c);
            const Vec2 c2 = sample_box(rng);
            const double db = norm(c - c2);
            if (db > 1e-12) {
                lip = std::max(lip, std::fabs(relative_entropy_flux(a, c) - relative_entropy_flux(a, c2)) / db);
                lip = std::max(lip, std::fabs(relative_entropy(a, c) - relative_entropy(a, c2)) / db);
            }
        }
        // The ratio peaks either in the near-diagonal limit or at box corners;
        // cover both explicitly.
        for (int k = 0; k < 2000; ++k) {
            const Vec2 c = sample_box(rng);
            const double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            for (double t : {1e-3, 1e-2, 1e-1}) {
                const Vec2 a = c + t * Vec2{std::cos(ang), std::sin(ang)};
                if (a.rho > 0.0) visit_pair(a, c);
            }
        }
        const double corners_rho[2] = {b.rho_lo, b.rho_hi};
        const double corners_v[2] = {-b.v_abs, b.v_abs};
        for (double ra : corners_rho)
            for (double va : corners_v)
                for (double rc : corners_rho)
                    for (double vc : corners_v)
                        visit_pair({ra, ra * va}, {rc, rc * vc});
        cert_.rel_flux_bound = qbound;
        cert_.rel_lipschitz = lip;
    }

    Vec2 sample_box(Rng& rng) const {
        const StateBox& b = p_.state_box;
        const double rho = rng.uniform(b.rho_lo, b.rho_hi);
        const double v = rng.uniform(-b.v_abs, b.v_abs);
        return {rho, rho * v};
    }

    SystemParams p_;
    double c1_ = 0.0;
    Certificate cert_;
};

static_assert(System2x2<EulerSystem>);

}  // namespace fronttrack
