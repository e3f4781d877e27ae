// godunov.hpp: first-order Godunov reference scheme with the exact Riemann
// solver at interfaces, cellwise entropy-inequality accounting, snapshot
// storage along the run, and one-sided trace extraction next to Lipschitz
// paths. Outflow boundaries (edge states are meant to stay constant over
// the simulated window).
#pragma once

#include <algorithm>
#include <vector>

#include "fronttrack/exact_riemann.hpp"
#include "fronttrack/piecewise.hpp"
#include "fronttrack/shift_policy.hpp"

namespace fronttrack {

struct GridSolution {
    double x0 = 0.0;  // left edge of the first cell
    double dx = 0.0;
    double time = 0.0;
    std::vector<Vec2> cells;

    double x_lo() const { return x0; }
    double x_hi() const { return x0 + dx * static_cast<double>(cells.size()); }
    double center(std::size_t i) const { return x0 + dx * (static_cast<double>(i) + 0.5); }
    int cell_index(double x) const { return static_cast<int>(std::floor((x - x0) / dx)); }
};

// Exact cell averages of piecewise-constant data on [x_lo, x_hi).
inline GridSolution project_to_grid(const PiecewiseConstant<Vec2>& u, double x_lo, double x_hi, double dx) {
    if (!(dx > 0.0) || !(x_hi > x_lo)) throw ConfigError("grid projection: need dx > 0 and x_hi > x_lo");
    GridSolution g;
    g.x0 = x_lo;
    g.dx = dx;
    const std::size_t n = static_cast<std::size_t>(std::llround((x_hi - x_lo) / dx));
    g.cells.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x_lo + dx * static_cast<double>(i);
        const double b = a + dx;
        // cells without an interior breakpoint take the piece value exactly
        bool straddles = false;
        for (double bp : u.xs) straddles = straddles || (bp > a && bp < b);
        if (!straddles) {
            g.cells[i] = u.eval(0.5 * (a + b));
            continue;
        }
        Vec2 acc{0.0, 0.0};
        double left = a;
        for (double bp : u.xs) {
            if (bp <= a || bp >= b) continue;
            acc += (bp - left) * u.eval(0.5 * (left + bp));
            left = bp;
        }
        acc += (b - left) * u.eval(0.5 * (left + b));
        g.cells[i] = acc / dx;
    }
    return g;
}

struct StepStats {
    double dt = 0.0;
    double max_entropy_production = -1e300;  // per-cell, should stay <= O(roundoff)
    double total_entropy_production = 0.0;   // integral over the line, <= 0
};

// One conservative update. The caller guarantees lambda_hat * dt / dx <= 1/2.
inline StepStats godunov_step(const EulerSystem& sys, GridSolution& g, double dt, double lambda_hat) {
    if (!(dt > 0.0)) throw ConfigError("godunov_step: dt must be > 0");
    if (!(lambda_hat * dt / g.dx <= 0.5 + 1e-12))
        throw ConfigError("godunov_step: CFL violation, lambda_hat*dt/dx = " +
                          std::to_string(lambda_hat * dt / g.dx) + " > 1/2");
    const std::size_t n = g.cells.size();
    std::vector<Vec2> flux(n + 1);
    std::vector<double> qflux(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const Vec2 ul = i == 0 ? g.cells.front() : g.cells[i - 1];
        const Vec2 ur = i == n ? g.cells.back() : g.cells[i];
        const Vec2 w = godunov_interface_state(sys, ul, ur);
        flux[i] = sys.flux(w);
        qflux[i] = sys.entropy_flux(w);
    }
    StepStats st;
    st.dt = dt;
    const double r = dt / g.dx;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 old = g.cells[i];
        const double eta_old = sys.entropy(old);
        g.cells[i] = old - r * (flux[i + 1] - flux[i]);
        if (!(g.cells[i].rho > 0.0) || !sys.in_invariant_region(g.cells[i]))
            throw NumericalError("godunov_step: state left the invariant region at cell " +
                                 std::to_string(i));
        const double prod = sys.entropy(g.cells[i]) - eta_old + r * (qflux[i + 1] - qflux[i]);
        st.max_entropy_production = std::max(st.max_entropy_production, prod);
        st.total_entropy_production += prod * g.dx;
    }
    g.time += dt;
    return st;
}

// Gaussian-shaped perturbation scaled to an exact discrete L2 norm.
// component: 0 = density, 1 = momentum.
inline void apply_bump(GridSolution& g, int component, double center, double width, double l2_norm) {
    if (l2_norm == 0.0) return;
    if (!(width > 0.0)) throw ConfigError("perturbation: width must be > 0");
    std::vector<double> shape(g.cells.size());
    double disc = 0.0;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        const double z = (g.center(i) - center) / width;
        // truncated tail keeps the perturbation compactly supported
        shape[i] = std::fabs(z) > 6.0 ? 0.0 : std::exp(-z * z);
        disc += shape[i] * shape[i] * g.dx;
    }
    const double scale = l2_norm / std::sqrt(disc);
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        if (component == 0)
            g.cells[i].rho += scale * shape[i];
        else
            g.cells[i].mom += scale * shape[i];
    }
}

// Evolution with stored snapshots; the store is dense enough to serve trace
// queries at arbitrary times (nearest stored time).
class WildTrajectory {
public:
    WildTrajectory(const EulerSystem& sys, GridSolution initial, double cfl, double lambda_hat)
        : sys_(sys), cfl_(cfl), lambda_hat_(lambda_hat) {
        if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("wild.cfl must lie in (0, 1/2]");
        snapshots_.push_back(std::move(initial));
    }

    void run_to(double t_end) {
        while (snapshots_.back().time < t_end - 1e-14) {
            GridSolution g = snapshots_.back();
            const double dt = std::min(cfl_ * g.dx / lambda_hat_, t_end - g.time);
            const StepStats st = godunov_step(sys_, g, dt, lambda_hat_);
            max_production_ = std::max(max_production_, st.max_entropy_production);
            total_production_ += st.total_entropy_production;
            snapshots_.push_back(std::move(g));
        }
    }

    const std::vector<GridSolution>& snapshots() const { return snapshots_; }
    double max_entropy_production() const { return max_production_; }
    double total_entropy_production() const { return total_production_; }

    const GridSolution& at_time(double t) const {
        // nearest stored time
        std::size_t best = 0;
        double err = 1e300;
        // snapshots are time-sorted: binary search then compare neighbours
        std::size_t lo = 0, hi = snapshots_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (snapshots_[mid].time < t) lo = mid + 1; else hi = mid;
        }
        for (std::size_t c : {lo, lo > 0 ? lo - 1 : lo}) {
            const double e = std::fabs(snapshots_[c].time - t);
            if (e < err) {
                err = e;
                best = c;
            }
        }
        return snapshots_[best];
    }

    // One-sided traces at (t, x): averages of the k cells adjacent to the
    // cell containing x, excluding that cell itself.
    std::pair<Vec2, Vec2> traces(double t, double x, int k = 2) const {
        const GridSolution& g = at_time(t);
        const int j = g.cell_index(x);
        const int n = static_cast<int>(g.cells.size());
        if (j - k < 0 || j + k >= n)
            throw std::range_error("traces: path leaves the grid interior");
        Vec2 left{0.0, 0.0}, right{0.0, 0.0};
        for (int i = 1; i <= k; ++i) {
            left += g.cells[static_cast<std::size_t>(j - i)];
            right += g.cells[static_cast<std::size_t>(j + i)];
        }
        return {left / static_cast<double>(k), right / static_cast<double>(k)};
    }

    TraceProvider trace_provider(int k = 2) const {
        return [this, k](double t, double x) { return traces(t, x, k); };
    }

private:
    const EulerSystem& sys_;
    double cfl_ = 0.45;
    double lambda_hat_ = 0.0;
    std::vector<GridSolution> snapshots_;
    double max_production_ = -1e300;
    double total_production_ = 0.0;
};

// Left/right trace time series along a Lipschitz path x = X(t).
template <typename PathFn>
std::vector<std::tuple<double, Vec2, Vec2>> trace_along(const WildTrajectory& traj, PathFn&& path,
                                                        double t0, double t1, int k = 2) {
    std::vector<std::tuple<double, Vec2, Vec2>> out;
    for (const GridSolution& g : traj.snapshots()) {
        if (g.time < t0 - 1e-14 || g.time > t1 + 1e-14) continue;
        auto [l, r] = traj.traces(g.time, path(g.time), k);
        out.emplace_back(g.time, l, r);
    }
    return out;
}

}  // namespace fronttrack
