// piecewise.hpp: piecewise-constant functions on the line, right-continuous
// at breakpoints. Snapshots, weight profiles and initial data all use this
// representation; total variation and L1 distances are computed exactly.
#pragma once

#include <algorithm>
#include <vector>

#include "fronttrack/base.hpp"

namespace fronttrack {

namespace detail {
inline double jump_size(double a, double b) { return std::fabs(b - a); }
inline double jump_size(Vec2 a, Vec2 b) { return norm(b - a); }
inline double abs_diff(double a, double b) { return std::fabs(a - b); }
inline double abs_diff(Vec2 a, Vec2 b) { return norm(a - b); }
}  // namespace detail

template <typename T>
struct PiecewiseConstant {
    std::vector<double> xs;   // ascending breakpoints (ties allowed)
    std::vector<T> values;    // values.size() == xs.size() + 1

    bool valid() const {
        return values.size() == xs.size() + 1 && std::is_sorted(xs.begin(), xs.end());
    }

    const T& eval(double x) const {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        return values[static_cast<std::size_t>(it - xs.begin())];
    }

    double tv() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < values.size(); ++i) s += detail::jump_size(values[i], values[i + 1]);
        return s;
    }
};

// Merged breakpoints of two piecewise functions (deduplicated).
inline std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> m;
    m.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
    m.erase(std::unique(m.begin(), m.end()), m.end());
    return m;
}

// Exact L1 distance; the functions must agree outside the breakpoint hull
// (true for snapshots of one evolution), otherwise the tails are ignored.
template <typename T>
double l1_distance(const PiecewiseConstant<T>& f, const PiecewiseConstant<T>& g) {
    const auto xs = merge_breakpoints(f.xs, g.xs);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double mid = 0.5 * (xs[i] + xs[i + 1]);
        total += (xs[i + 1] - xs[i]) * detail::abs_diff(f.eval(mid), g.eval(mid));
    }
    return total;
}

// Essential sup of f - g over the line (both scalar), for monotonicity
// checks. Slivers below roundoff width (breakpoints of the two functions
// that differ by an ulp) carry no measure and are ignored.
inline double sup_difference(const PiecewiseConstant<double>& f, const PiecewiseConstant<double>& g) {
    const auto xs = merge_breakpoints(f.xs, g.xs);
    double worst = f.values.front() - g.values.front();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (xs[i + 1] - xs[i] <= 1e-12 * (1.0 + std::fabs(xs[i]))) continue;
        const double mid = 0.5 * (xs[i] + xs[i + 1]);
        worst = std::max(worst, f.eval(mid) - g.eval(mid));
    }
    worst = std::max(worst, f.values.back() - g.values.back());
    return worst;
}

}  // namespace fronttrack
