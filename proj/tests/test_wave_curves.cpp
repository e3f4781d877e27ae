// Wave-curve checks: Hugoniot branch against a brute-force locus sampler,
// Lax admissibility, entropy dissipation, invariant constancy along
// rarefactions, C1 branch matching, and Riemann round trips (with the
// closed-form primitive solver as an independent cross-check).
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fronttrack/exact_riemann.hpp"
#include "fronttrack/wave_curves.hpp"

using namespace fronttrack;

namespace {

EulerSystem make_default(double gamma = 2.0) {
    SystemParams p;
    p.gamma = gamma;
    return EulerSystem(p);
}

Vec2 sample_interior_state(const EulerSystem& sys, Rng& rng) {
    const StateBox& b = sys.box();
    const double rho = rng.uniform(0.8 * b.rho_lo + 0.2 * b.rho_hi, 0.2 * b.rho_lo + 0.8 * b.rho_hi);
    const double v = rng.uniform(-0.6 * b.v_abs, 0.6 * b.v_abs);
    return {rho, rho * v};
}

// Brute-force Hugoniot locus: solve the jump condition on a fine grid of
// candidate densities and return the admissible point at the requested
// chord distance. Independent of the shock_curve root-finder.
Vec2 brute_force_hugoniot(const EulerSystem& sys, Vec2 anchor, Family family, double s, Side side) {
    const double dir = (family == Family::one) == (side == Side::left_anchored) ? 1.0 : -1.0;
    const double va = EulerSystem::velocity(anchor);
    double best_rho = anchor.rho, best_err = 1e300;
    for (int k = 1; k <= 400000; ++k) {
        const double rho = anchor.rho + dir * 1e-6 * k;
        if (rho <= 1e-6) break;
        const double dp = sys.pressure(rho) - sys.pressure(anchor.rho);
        const double dr = rho - anchor.rho;
        const double phi = std::sqrt(dp * dr / (rho * anchor.rho));
        const double v = side == Side::left_anchored ? va - phi : va + phi;
        const double err = std::fabs(norm(Vec2{rho, rho * v} - anchor) - s);
        if (err < best_err) {
            best_err = err;
            best_rho = rho;
        }
    }
    const double dp = sys.pressure(best_rho) - sys.pressure(anchor.rho);
    const double dr = best_rho - anchor.rho;
    const double phi = std::sqrt(dp * dr / (best_rho * anchor.rho));
    const double v = side == Side::left_anchored ? va - phi : va + phi;
    return {best_rho, best_rho * v};
}

}  // namespace

TEST_CASE("shock curve: zero strength, brute-force locus agreement") {
    auto sys = make_default();
    const Vec2 anchor{1.0, 0.0};

    auto p0 = shock_curve(sys, anchor, Family::one, 0.0, Side::left_anchored);
    CHECK(norm(p0.state - anchor) == 0.0);
    CHECK(p0.speed == Catch::Approx(sys.eigen(anchor).lambda1).margin(1e-14));

    auto p = shock_curve(sys, anchor, Family::one, 0.1, Side::left_anchored);
    CHECK(std::fabs(norm(p.state - anchor) - 0.1) < 1e-8);
    CHECK(rankine_hugoniot_residual(sys, anchor, p.state, p.speed) <= 1e-10);
    const auto sl = sys.eigen(anchor);
    const auto sr = sys.eigen(p.state);
    CHECK(p.speed < sl.lambda1);
    CHECK(p.speed > sr.lambda1);
    const Vec2 oracle = brute_force_hugoniot(sys, anchor, Family::one, 0.1, Side::left_anchored);
    CHECK(norm(p.state - oracle) < 2e-6);
}

TEST_CASE("shock curve: all four anchored branches are admissible") {
    auto sys = make_default();
    Rng rng(21);
    for (int k = 0; k < 25; ++k) {
        const Vec2 anchor = sample_interior_state(sys, rng);
        const double s = rng.uniform(0.01, 0.2);
        for (Family fam : {Family::one, Family::two}) {
            for (Side side : {Side::left_anchored, Side::right_anchored}) {
                const auto p = shock_curve(sys, anchor, fam, s, side);
                const Vec2 ul = side == Side::left_anchored ? anchor : p.state;
                const Vec2 ur = side == Side::left_anchored ? p.state : anchor;
                CHECK(rankine_hugoniot_residual(sys, ul, ur, p.speed) <= 1e-10);
                CHECK(lax_admissible(sys, ul, ur, p.speed, fam));
                CHECK(shock_entropy_dissipation(sys, ul, ur, p.speed) <= 1e-12);
                CHECK(std::fabs(norm(p.state - anchor) - s) <= 1e-8);
            }
        }
    }
}

TEST_CASE("shock speeds are monotone in the strength") {
    auto sys = make_default();
    Rng rng(22);
    for (int k = 0; k < 10; ++k) {
        const Vec2 anchor = sample_interior_state(sys, rng);
        double prev1 = sys.eigen(anchor).lambda1;
        double prev2 = sys.eigen(anchor).lambda2;
        for (int i = 1; i <= 20; ++i) {
            const double s = 0.01 * i;
            const double sp1 = shock_curve(sys, anchor, Family::one, s, Side::left_anchored).speed;
            const double sp2 = shock_curve(sys, anchor, Family::two, s, Side::right_anchored).speed;
            CHECK(sp1 < prev1);
            CHECK(sp2 > prev2);
            prev1 = sp1;
            prev2 = sp2;
        }
    }
}

TEST_CASE("rarefaction curve: invariants constant, speed increasing, step-doubling") {
    auto sys = make_default();
    auto p0 = rarefaction_curve(sys, {1.0, 0.0}, Family::one, 0.0);
    CHECK(norm(p0.state - Vec2{1.0, 0.0}) == 0.0);

    Rng rng(23);
    for (int k = 0; k < 20; ++k) {
        const Vec2 anchor = sample_interior_state(sys, rng);
        for (Family fam : {Family::one, Family::two}) {
            const double s = rng.uniform(0.05, 0.25);
            const auto p = rarefaction_curve(sys, anchor, fam, s);
            const auto wa = sys.riemann_invariants(anchor);
            const auto wp = sys.riemann_invariants(p.state);
            // opposite-family invariant stays fixed along the curve
            const double drift = fam == Family::one ? std::fabs(wp.second - wa.second)
                                                    : std::fabs(wp.first - wa.first);
            CHECK(drift <= 1e-8);
            const auto sa = sys.eigen(anchor);
            const double lam_a = fam == Family::one ? sa.lambda1 : sa.lambda2;
            CHECK(p.speed > lam_a);
            // integration error certified by step doubling
            const auto p2 = rarefaction_curve(sys, anchor, fam, s, 128);
            CHECK(norm(p.state - p2.state) <= 1e-10);
        }
    }

    // family-1 from (1,0): fast-invariant drift and speed increase
    const auto p = rarefaction_curve(sys, {1.0, 0.0}, Family::one, 0.2);
    CHECK(std::fabs(sys.riemann_invariants(p.state).second - sys.riemann_invariants({1.0, 0.0}).second) <= 1e-8);
    CHECK(p.speed - sys.eigen({1.0, 0.0}).lambda1 > 0.0);
}

TEST_CASE("forward wave curve is C1 at zero strength") {
    auto sys = make_default();
    Rng rng(24);
    for (int k = 0; k < 10; ++k) {
        const Vec2 u = sample_interior_state(sys, rng);
        for (Family fam : {Family::one, Family::two}) {
            CHECK(norm(forward_wave_curve(sys, u, fam, 0.0) - u) == 0.0);
            // second-order one-sided derivatives from each branch
            const double h = 1e-3;
            auto T = [&](double sg) { return forward_wave_curve(sys, u, fam, sg); };
            const Vec2 dplus = (-3.0 * T(0.0) + 4.0 * T(h) - T(2.0 * h)) / (2.0 * h);
            const Vec2 dminus = (3.0 * T(0.0) - 4.0 * T(-h) + T(-2.0 * h)) / (2.0 * h);
            CHECK(norm(dplus - dminus) <= 1e-6);
            // common tangent is the eigenvector, oriented toward compression
            // (opposite the lambda-increasing orientation)
            const auto sp = sys.eigen(u);
            const Vec2 r = fam == Family::one ? sp.r1 : sp.r2;
            CHECK(norm(dplus + r) <= 1e-5);
        }
    }
}

TEST_CASE("riemann solve: trivial and constructed single-wave inputs") {
    auto sys = make_default();
    const Vec2 u{1.0, 0.1};
    auto fan0 = solve_riemann(sys, u, u);
    CHECK(fan0.sigma1 == 0.0);
    CHECK(fan0.sigma2 == 0.0);
    CHECK(norm(fan0.middle - u) == 0.0);

    const Vec2 shocked = shock_curve(sys, u, Family::one, 0.05, Side::left_anchored).state;
    auto fs = solve_riemann(sys, u, shocked);
    CHECK(fs.sigma1 == Catch::Approx(0.05).margin(1e-7));
    CHECK(std::fabs(fs.sigma2) <= 1e-8);

    const Vec2 rared = rarefaction_curve(sys, u, Family::two, 0.05).state;
    auto fr = solve_riemann(sys, u, rared);
    CHECK(fr.sigma2 == Catch::Approx(-0.05).margin(1e-7));
    CHECK(std::fabs(fr.sigma1) <= 1e-8);
}

TEST_CASE("riemann solve: round trip over random strengths") {
    auto sys = make_default();
    Rng rng(25);
    for (int k = 0; k < 200; ++k) {
        const Vec2 u = sample_interior_state(sys, rng);
        const double s1 = rng.uniform(-0.2, 0.2);
        const double s2 = rng.uniform(-0.2, 0.2);
        const Vec2 up = forward_wave_curve(sys, forward_wave_curve(sys, u, Family::one, s1), Family::two, s2);
        const auto fan = solve_riemann(sys, u, up);
        CHECK(std::fabs(fan.sigma1 - s1) <= 1e-7);
        CHECK(std::fabs(fan.sigma2 - s2) <= 1e-7);
        const Vec2 rec = forward_wave_curve(sys, forward_wave_curve(sys, u, Family::one, fan.sigma1),
                                            Family::two, fan.sigma2);
        CHECK(norm(rec - up) <= 1e-10);
    }
}

TEST_CASE("riemann solve: refuses distant states, survives forced fallback") {
    auto sys = make_default();
    CHECK_THROWS_AS(solve_riemann(sys, {1.0, 0.0}, {3.0, 1.0}), std::range_error);

    SolveOptions no_newton;
    no_newton.allow_newton = false;
    Rng rng(26);
    for (int k = 0; k < 20; ++k) {
        const Vec2 u = sample_interior_state(sys, rng);
        const double s1 = rng.uniform(-0.15, 0.15);
        const double s2 = rng.uniform(-0.15, 0.15);
        const Vec2 up = forward_wave_curve(sys, forward_wave_curve(sys, u, Family::one, s1), Family::two, s2);
        const auto fan = solve_riemann(sys, u, up, no_newton);
        CHECK(std::fabs(fan.sigma1 - s1) <= 1e-6);
        CHECK(std::fabs(fan.sigma2 - s2) <= 1e-6);
    }
}

TEST_CASE("curve solver agrees with the closed-form primitive solver") {
    auto sys = make_default();
    Rng rng(27);
    for (int k = 0; k < 100; ++k) {
        const Vec2 ul = sample_interior_state(sys, rng);
        const double dv = rng.uniform(-0.1, 0.1);
        const double drho = rng.uniform(-0.1, 0.1);
        const Vec2 ur{ul.rho + drho, (ul.rho + drho) * (EulerSystem::velocity(ul) + dv)};
        if (norm(ul - ur) > 0.4) continue;
        const auto prim = solve_exact_riemann(sys, ul, ur);
        const auto fan = solve_riemann(sys, ul, ur);
        CHECK(fan.middle.rho == Catch::Approx(prim.rho_star).margin(1e-7));
        CHECK(EulerSystem::velocity(fan.middle) == Catch::Approx(prim.v_star).margin(1e-7));
        CHECK((fan.sigma1 > 1e-9) == prim.left_is_shock);
        CHECK((fan.sigma2 > 1e-9) == prim.right_is_shock);
    }
}

TEST_CASE("exact riemann sampling is consistent across wave regions") {
    auto sys = make_default();
    const Vec2 ul{1.3, 1.3 * 0.2};
    const Vec2 ur{0.9, 0.9 * -0.1};
    const auto sol = solve_exact_riemann(sys, ul, ur);
    CHECK(norm(sample_exact_riemann(sys, sol, ul, ur, sol.s1_head - 1.0) - ul) == 0.0);
    CHECK(norm(sample_exact_riemann(sys, sol, ul, ur, sol.s2_tail + 1.0) - ur) == 0.0);
    const Vec2 mid = sample_exact_riemann(sys, sol, ul, ur, 0.5 * (sol.s1_tail + sol.s2_head));
    CHECK(mid.rho == Catch::Approx(sol.rho_star));
    // continuity at rarefaction edges
    if (!sol.left_is_shock) {
        const Vec2 a = sample_exact_riemann(sys, sol, ul, ur, sol.s1_head + 1e-12);
        CHECK(norm(a - ul) < 1e-9);
    }
    if (!sol.right_is_shock) {
        const Vec2 b = sample_exact_riemann(sys, sol, ul, ur, sol.s2_tail - 1e-12);
        CHECK(norm(b - ur) < 1e-9);
    }
}
