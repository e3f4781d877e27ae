// Engine checks: initialization fans, the approaching predicate, collision
// processing with both solvers, functional bookkeeping against full
// recomputation, snapshot/sample semantics, policy speed windows, and
// deterministic replay.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fronttrack/engine.hpp"

using namespace fronttrack;

namespace {

SystemParams run_box_params() {
    SystemParams p;
    p.gamma = 2.0;
    p.state_box = {0.6, 1.6, 0.7};
    return p;
}

// piecewise data from consecutive forward waves starting at `base`
PiecewiseConstant<Vec2> compose_waves(const EulerSystem& sys, Vec2 base,
                                      const std::vector<std::tuple<double, Family, double>>& waves) {
    PiecewiseConstant<Vec2> u0;
    u0.values.push_back(base);
    Vec2 cur = base;
    for (const auto& [x, fam, sigma] : waves) {
        cur = forward_wave_curve(sys, cur, fam, sigma);
        u0.xs.push_back(x);
        u0.values.push_back(cur);
    }
    return u0;
}

EngineParams basic_params() {
    EngineParams p;
    p.delta_nu = 0.02;
    p.eps_nu = 1e-5;
    p.tv_limit = 0.6;
    return p;
}

}  // namespace

TEST_CASE("init: constant data, single shock, approaching pair potential") {
    EulerSystem sys(run_box_params());

    PiecewiseConstant<Vec2> constant;
    constant.values.push_back({1.0, 0.0});
    FrontSolution s0(sys, basic_params(), constant);
    CHECK(s0.fronts().empty());
    CHECK(s0.glimm().l == 0.0);
    CHECK(s0.glimm().q == 0.0);

    auto one_shock = compose_waves(sys, {1.0, 0.0}, {{0.0, Family::one, 0.1}});
    FrontSolution s1(sys, basic_params(), one_shock);
    REQUIRE(s1.fronts().size() == 1);
    CHECK(s1.glimm().l == Catch::Approx(0.1).margin(1e-7));
    CHECK(s1.glimm().q == 0.0);

    // fast shock left of a slow shock: one approaching pair
    PiecewiseConstant<Vec2> u0;
    const Vec2 a{1.0, 0.0};
    const Vec2 b = forward_wave_curve(sys, a, Family::two, 0.2);
    const Vec2 c = forward_wave_curve(sys, b, Family::one, 0.1);
    u0.values = {a, b, c};
    u0.xs = {0.0, 1.0};
    FrontSolution s2(sys, basic_params(), u0);
    REQUIRE(s2.fronts().size() == 2);
    CHECK(s2.glimm().q == Catch::Approx(0.02).margin(1e-8));
}

TEST_CASE("init rejects bad data by the first failing constraint") {
    EulerSystem sys(run_box_params());
    PiecewiseConstant<Vec2> out_of_box;
    out_of_box.values.push_back({5.0, 0.0});
    CHECK_THROWS_AS(FrontSolution(sys, basic_params(), out_of_box), ConfigError);

    // total variation above the limit
    auto sysbig = EulerSystem([] {
        SystemParams p;
        p.gamma = 2.0;
        p.state_box = {0.3, 2.5, 1.2};
        return p;
    }());
    PiecewiseConstant<Vec2> big;
    big.values = {{1.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}};
    big.xs = {0.0, 1.0};
    EngineParams ep = basic_params();
    CHECK_THROWS_AS(FrontSolution(sysbig, ep, big), ConfigError);
}

TEST_CASE("approaching predicate") {
    Front r1, r2, s1l, s1r, np;
    r1.family = WaveFamily::f1;
    r1.kind = WaveKind::rarefaction;
    r2.family = WaveFamily::f2;
    r2.kind = WaveKind::rarefaction;
    s1l.family = WaveFamily::f1;
    s1l.kind = WaveKind::shock;
    s1r = s1l;
    np.family = WaveFamily::np;
    np.kind = WaveKind::nonphysical;

    CHECK_FALSE(approaching(r1, r2));   // slow rarefaction left of fast rarefaction
    CHECK(approaching(r2, s1l));        // fast wave left of slow wave
    CHECK(approaching(s1l, s1r));       // same family, both shocks
    CHECK(approaching(s1l, r1));        // same family, one shock
    CHECK_FALSE(approaching(r1, r1));
    CHECK(approaching(np, s1l));        // non-physical approaches physical to its right
    CHECK_FALSE(approaching(s1l, np));
    CHECK_FALSE(approaching(np, np));
}

TEST_CASE("advance: single front moves freely; two shocks merge in one event") {
    EulerSystem sys(run_box_params());
    auto single = compose_waves(sys, {1.0, 0.0}, {{0.0, Family::one, 0.1}});
    FrontSolution s1(sys, basic_params(), single);
    const double v = s1.fronts()[0].speed;
    s1.advance(0.5);
    CHECK(s1.events().empty());
    CHECK(s1.fronts()[0].position(0.5) == Catch::Approx(0.5 * v).margin(1e-14));

    // two same-family shocks from distinct points approach and merge
    auto sys2 = EulerSystem(run_box_params());
    auto two = compose_waves(sys2, {1.2, 0.0}, {{0.0, Family::one, 0.1}, {0.05, Family::one, 0.1}});
    EngineParams ep = basic_params();
    ep.eps_nu = 1e-5;  // product 0.01 > eps: accurate merge
    FrontSolution s2(sys2, ep, two);
    REQUIRE(s2.fronts().size() == 2);
    const auto g0 = s2.glimm();
    s2.advance(5.0);
    REQUIRE(s2.events().size() == 1);
    const auto& ev = s2.events()[0];
    CHECK(ev.solver == 'A');
    CHECK(ev.both_physical);
    // drop of L + kappa Q at the merge
    const double drop = ev.dl + ep.kappa * ev.dq;
    CHECK(drop <= -(ep.kappa / 2.0) * 0.01 * (1.0 - 0.1));
    const auto g1 = s2.glimm();
    CHECK(g1.l + ep.kappa * g1.q <= g0.l + ep.kappa * g0.q + 1e-12);
}

TEST_CASE("advance: head-on collision matches the exact outer resolution") {
    EulerSystem sys(run_box_params());
    // fast shock on the left of a slow shock -> head-on interaction
    PiecewiseConstant<Vec2> u0;
    const Vec2 a{1.0, 0.0};
    const Vec2 b = forward_wave_curve(sys, a, Family::two, 0.08);
    const Vec2 c = forward_wave_curve(sys, b, Family::one, 0.08);
    u0.values = {a, b, c};
    u0.xs = {0.0, 0.1};
    EngineParams ep = basic_params();
    FrontSolution sol(sys, ep, u0);
    sol.advance(10.0);
    REQUIRE(sol.events().size() == 1);
    const auto& ev = sol.events()[0];
    REQUIRE(ev.out_ids.size() == 2);

    const auto exact = solve_riemann(sys, ev.u_minus, ev.u_plus);
    const double sp1 = sol.fronts()[0].strength;
    const double sp2 = sol.fronts()[1].strength;
    CHECK(std::fabs(sp1 - exact.sigma1) <= 1e-9);
    CHECK(std::fabs(sp2 - exact.sigma2) <= 1e-9);
    // outgoing strengths close to the transposed incoming ones (cubic error)
    const double cubic = 0.08 * 0.08 * 0.16;
    CHECK(std::fabs(sp1 - 0.08) <= 10.0 * cubic);
    CHECK(std::fabs(sp2 - 0.08) <= 10.0 * cubic);
}

TEST_CASE("simplified threshold: small products spawn non-physical fronts") {
    EulerSystem sys(run_box_params());
    auto two = compose_waves(sys, {1.2, 0.0}, {{0.0, Family::one, 0.1}, {0.05, Family::one, 0.1}});
    EngineParams ep = basic_params();
    ep.eps_nu = 0.5;  // force the simplified solver
    FrontSolution sol(sys, ep, two);
    sol.advance(5.0);
    REQUIRE(sol.events().size() == 1);
    CHECK(sol.events()[0].solver == 'S');
    REQUIRE(sol.fronts().size() == 2);
    CHECK(sol.fronts()[1].family == WaveFamily::np);
    CHECK(sol.fronts()[1].speed == sol.lambda_hat());
    CHECK(sol.functionals().np_total == Catch::Approx(sol.fronts()[1].strength));
    CHECK(sol.fronts()[1].strength > 0.0);
}

TEST_CASE("incremental functionals agree with recomputation through many events") {
    EulerSystem sys(run_box_params());
    // a little wave soup
    auto u0 = compose_waves(sys, {1.1, 0.0},
                            {{0.0, Family::one, 0.08},
                             {0.13, Family::two, -0.07},
                             {0.4, Family::one, -0.06},
                             {0.55, Family::two, 0.09},
                             {0.9, Family::one, 0.05}});
    EngineParams ep = basic_params();
    ep.eps_nu = 2e-3;
    FrontSolution sol(sys, ep, u0);
    double prev_lq = 1e300;
    for (double t : {0.1, 0.3, 0.6, 1.0, 1.6, 2.4}) {
        sol.advance(t);
        const auto inc = sol.functionals();
        const auto full = sol.glimm();
        CHECK(inc.l == Catch::Approx(full.l).margin(1e-10));
        CHECK(inc.q == Catch::Approx(full.q).margin(1e-10));
        const double lq = full.l + ep.kappa * full.q;
        CHECK(lq <= prev_lq + 1e-12);
        prev_lq = lq;
    }
    CHECK(!sol.events().empty());
    for (const auto& ev : sol.events()) {
        CHECK(ev.dl + ep.kappa * ev.dq <= 1e-12);
        if (ev.both_physical) {
            const double prod = std::fabs(ev.in_strength[0] * ev.in_strength[1]);
            CHECK(ev.dl + ep.kappa * ev.dq <= -(ep.kappa / 2.0) * prod * (1.0 - 0.1) + 1e-12);
        }
    }
}

TEST_CASE("snapshot and sample are right-continuous and consistent") {
    EulerSystem sys(run_box_params());
    auto u0 = compose_waves(sys, {1.0, 0.0}, {{0.0, Family::one, 0.1}});
    FrontSolution sol(sys, basic_params(), u0);
    sol.advance(0.25);
    const auto& f = sol.fronts()[0];
    const double xp = f.position(0.25);
    CHECK(norm(sol.sample(0.25, xp - 1e-6) - f.left) == 0.0);
    CHECK(norm(sol.sample(0.25, xp + 1e-6) - f.right) == 0.0);
    CHECK(norm(sol.sample(0.25, xp) - f.right) == 0.0);  // right continuity

    const auto snap = sol.snapshot(0.25);
    CHECK(snap.tv() == Catch::Approx(norm(f.right - f.left)).margin(1e-12));
    CHECK_THROWS_AS(sol.sample(1.0, 0.0), std::range_error);
}

TEST_CASE("total variation stays bounded by twice the initial variation") {
    EulerSystem sys(run_box_params());
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::tuple<double, Family, double>> waves;
        double x = 0.0;
        for (int k = 0; k < 6; ++k) {
            x += rng.uniform(0.05, 0.3);
            const Family fam = rng.uniform() < 0.5 ? Family::one : Family::two;
            waves.push_back({x, fam, rng.uniform(-0.03, 0.03)});
        }
        auto u0 = compose_waves(sys, {1.1, 0.05}, waves);
        EngineParams ep = basic_params();
        ep.eps_nu = 1e-4;
        FrontSolution sol(sys, ep, u0);
        const double tv0 = sol.initial_tv();
        for (double t : {0.5, 1.0, 2.0}) {
            sol.advance(t);
            CHECK(sol.snapshot(t).tv() <= 2.0 * tv0 + 1e-9);
        }
    }
}

TEST_CASE("speed windows: shocks clamped per family, families separated") {
    EulerSystem sys(run_box_params());
    const auto w = SpeedWindows::from_certificate(sys.certificate());
    CHECK(w.alpha1 < w.alpha2);
    CHECK(w.lambda_hat >= 2.0 * sys.certificate().big_l);

    auto u0 = compose_waves(sys, {1.1, 0.0},
                            {{0.0, Family::one, 0.08},
                             {0.2, Family::two, -0.07},
                             {0.5, Family::two, 0.09},
                             {0.8, Family::one, -0.04}});
    EngineParams ep = basic_params();
    FrontSolution sol(sys, ep, u0);
    sol.advance(1.0);
    double max_f1 = -1e300, min_f2 = 1e300;
    for (const auto& f : sol.fronts()) {
        if (f.family == WaveFamily::f1) max_f1 = std::max(max_f1, f.speed);
        if (f.family == WaveFamily::f2) min_f2 = std::min(min_f2, f.speed);
        if (f.kind == WaveKind::shock) {
            auto [lo, hi] = w.window(f.family);
            CHECK(f.speed >= lo - 1e-9);
            CHECK(f.speed <= hi + 1e-9);
        }
    }
    if (max_f1 > -1e300 && min_f2 < 1e300) CHECK(max_f1 < min_f2);

    // no characteristic gap -> hard error
    SystemParams wide;
    wide.gamma = 2.0;  // default huge box
    EulerSystem syswide(wide);
    CHECK_THROWS_AS(SpeedWindows::from_certificate(syswide.certificate()), ConfigError);
}

TEST_CASE("shift policies: windows, offsets, greedy endpoint selection") {
    EulerSystem sys(run_box_params());
    const auto w = SpeedWindows::from_certificate(sys.certificate());
    const Vec2 ul{1.0, 0.0};
    const auto pt = shock_curve(sys, ul, Family::one, 0.1, Side::left_anchored);
    const Vec2 ur = pt.state;
    const double rh = pt.speed;

    // matched traces: zero dissipation at any admissible speed; RH returned
    TraceProvider matched = [&](double, double) { return std::make_pair(ul, ur); };
    ShiftPolicySpec greedy;
    greedy.mode = ShiftPolicySpec::Mode::dissipation_greedy;
    auto d = shift_speed(sys, greedy, w, WaveFamily::f1, ul, ur, rh, 1.0, 0.98, matched, 0.0, 0.0);
    CHECK(d.speed == Catch::Approx(rh).margin(1e-12));
    CHECK(std::fabs(d.dissipation) <= 1e-12);

    // perturbed traces: affine in the speed; the endpoint with smaller D wins
    const Vec2 um{1.03, 1.03 * 0.02};
    const Vec2 up{0.97, 0.97 * -0.03};
    TraceProvider bumped = [&](double, double) { return std::make_pair(um, up); };
    auto d2 = shift_speed(sys, greedy, w, WaveFamily::f1, ul, ur, rh, 1.0, 0.98, bumped, 0.0, 0.0);
    auto [lo, hi] = w.window(WaveFamily::f1);
    const double dlo = shock_dissipation(sys, ul, ur, um, up, 1.0, 0.98, lo);
    const double dhi = shock_dissipation(sys, ul, ur, um, up, 1.0, 0.98, hi);
    CHECK(d2.speed == (dlo < dhi ? lo : hi));
    CHECK(d2.dissipation == Catch::Approx(std::min(dlo, dhi)));
    // exhaustive grid: greedy never loses to any admissible speed
    for (int k = 0; k <= 50; ++k) {
        const double s = lo + (hi - lo) * k / 50.0;
        CHECK(d2.dissipation <= shock_dissipation(sys, ul, ur, um, up, 1.0, 0.98, s) + 1e-12);
    }
    // sign flip of the affine slope flips the endpoint
    auto d3 = shift_speed(sys, greedy, w, WaveFamily::f1, ul, ur, rh, 0.98, 1.0, bumped, 0.0, 0.0);
    const double dlo3 = shock_dissipation(sys, ul, ur, um, up, 0.98, 1.0, lo);
    const double dhi3 = shock_dissipation(sys, ul, ur, um, up, 0.98, 1.0, hi);
    CHECK(d3.speed == (dlo3 < dhi3 ? lo : hi));

    // offset mode clamps into the window
    ShiftPolicySpec offset;
    offset.mode = ShiftPolicySpec::Mode::constant_offset;
    offset.offset = 100.0;
    auto d4 = shift_speed(sys, offset, w, WaveFamily::f1, ul, ur, rh, 1.0, 1.0, {}, 0.0, 0.0);
    CHECK(d4.speed == hi);

    // greedy without traces is a configuration error
    CHECK_THROWS_AS(shift_speed(sys, greedy, w, WaveFamily::f1, ul, ur, rh, 1.0, 1.0, {}, 0.0, 0.0),
                    ConfigError);
}

TEST_CASE("greedy checkpoints do not lose collisions") {
    EulerSystem sys(run_box_params());
    // head-on pair: the families' speed windows are disjoint, so these
    // collide under any admissible speeds. Time-varying traces force the
    // greedy policy to re-anchor speeds at every checkpoint, which must not
    // drop the pending collision from the queue.
    PiecewiseConstant<Vec2> u0;
    const Vec2 a{1.0, 0.0};
    const Vec2 b = forward_wave_curve(sys, a, Family::two, 0.08);
    const Vec2 c = forward_wave_curve(sys, b, Family::one, 0.08);
    u0.values = {a, b, c};
    u0.xs = {0.0, 0.2};
    EngineParams ep = basic_params();
    ep.eps_nu = 1e-5;
    ep.checkpoint_dt = 0.005;
    ep.policy.mode = ShiftPolicySpec::Mode::dissipation_greedy;
    // alternate which side looks far from its reference so the affine
    // dissipation slope flips sign and the endpoint choice swaps
    TraceProvider wobble = [&](double t, double) {
        const Vec2 near{1.05, 0.0};
        const Vec2 far{1.45, 1.45 * 0.3};
        return std::sin(150.0 * t) > 0.0 ? std::make_pair(near, far) : std::make_pair(far, near);
    };
    FrontSolution sol(sys, ep, u0, wobble);
    sol.advance(2.0);
    REQUIRE(!sol.events().empty());
    // positions stay ordered after the interaction
    double prev = -1e300;
    for (const auto& f : sol.fronts()) {
        CHECK(f.position(sol.time()) >= prev);
        prev = f.position(sol.time());
    }
}

TEST_CASE("deterministic replay: identical parameters give identical event logs") {
    EulerSystem sys(run_box_params());
    auto u0 = compose_waves(sys, {1.1, 0.0},
                            {{0.0, Family::one, 0.08},
                             {0.3, Family::two, -0.05},
                             {0.6, Family::two, 0.09},
                             {0.9, Family::one, 0.05}});
    EngineParams ep = basic_params();
    ep.eps_nu = 2e-3;
    FrontSolution s1(sys, ep, u0);
    FrontSolution s2(sys, ep, u0);
    s1.advance(2.0);
    s2.advance(2.0);
    REQUIRE(s1.events().size() == s2.events().size());
    for (std::size_t i = 0; i < s1.events().size(); ++i) {
        CHECK(s1.events()[i].t == s2.events()[i].t);
        CHECK(s1.events()[i].x == s2.events()[i].x);
        CHECK(s1.events()[i].in_ids == s2.events()[i].in_ids);
        CHECK(s1.events()[i].out_ids == s2.events()[i].out_ids);
    }
}
