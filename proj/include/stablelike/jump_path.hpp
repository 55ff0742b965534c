#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stablelike/beta_function.hpp"
#include "stablelike/point_process.hpp"
#include "stablelike/vec_math.hpp"

// Pure-jump monotone paths driven by one PointProcess:
//
//   stable_like    value jumps by z^(1/beta(pre-jump value))
//   subordinator   value jumps by z^(1/alpha), alpha fixed
//   time_changed   value jumps by z^(1/f(t-)), f a cadlag step map of time
//
// All three use the same scalar jump kernel, so a constant index gives
// bit-identical paths whichever constructor built them.

namespace stablelike {

enum class PathKind { stable_like, subordinator, time_changed };

struct JumpPath {
    PathKind kind = PathKind::subordinator;
    double horizon = 0.0;
    std::vector<double> jump_times;    // strictly increasing
    std::vector<double> values_after;  // strictly increasing, value before any jump is 0
};

namespace detail {

inline double jump_kernel(double z, double inv_index) {
    return std::exp(std::log(z) * inv_index);
}

// Advance the running value, keeping it strictly increasing even when a
// tiny jump is absorbed by rounding.
inline double advance(double value, double jump) {
    const double next = value + jump;
    return next > value ? next : std::nextafter(value, value + 1.0);
}

}  // namespace detail

inline JumpPath build_stable_like(const PointProcess& pp, const BetaFunction& beta) {
    JumpPath path;
    path.kind = PathKind::stable_like;
    path.horizon = pp.horizon;
    path.jump_times.reserve(pp.events.size());
    path.values_after.reserve(pp.events.size());
    double value = 0.0;
    for (const auto& e : pp.events) {
        const double b = beta.eval(value);  // index reads the pre-jump state
        value = detail::advance(value, detail::jump_kernel(e.z, 1.0 / b));
        path.jump_times.push_back(e.t);
        path.values_after.push_back(value);
    }
    return path;
}

inline JumpPath build_subordinator(const PointProcess& pp, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("build_subordinator: alpha must lie in (0,1)");
    JumpPath path;
    path.kind = PathKind::subordinator;
    path.horizon = pp.horizon;
    path.jump_times.reserve(pp.events.size());
    path.values_after.reserve(pp.events.size());
    const double inv_alpha = 1.0 / alpha;
    double value = 0.0;
    for (const auto& e : pp.events) {
        value = detail::advance(value, detail::jump_kernel(e.z, inv_alpha));
        path.jump_times.push_back(e.t);
        path.values_after.push_back(value);
    }
    return path;
}

inline JumpPath build_time_changed(const PointProcess& pp, const StepFunction& f) {
    if (!f.non_decreasing())
        throw std::invalid_argument("build_time_changed: f must be non-decreasing");
    JumpPath path;
    path.kind = PathKind::time_changed;
    path.horizon = pp.horizon;
    path.jump_times.reserve(pp.events.size());
    path.values_after.reserve(pp.events.size());
    double value = 0.0;
    for (const auto& e : pp.events) {
        const double b = f.eval_left(e.t);
        value = detail::advance(value, detail::jump_kernel(e.z, 1.0 / b));
        path.jump_times.push_back(e.t);
        path.values_after.push_back(value);
    }
    return path;
}

inline double eval(const JumpPath& path, double t) {
    if (!(t >= 0.0) || !(t <= path.horizon))
        throw std::invalid_argument("eval: t outside [0, horizon]");
    auto it = std::upper_bound(path.jump_times.begin(), path.jump_times.end(), t);
    if (it == path.jump_times.begin()) return 0.0;
    return path.values_after[static_cast<std::size_t>(it - path.jump_times.begin()) - 1];
}

inline double eval_left(const JumpPath& path, double t) {
    if (!(t >= 0.0) || !(t <= path.horizon))
        throw std::invalid_argument("eval_left: t outside [0, horizon]");
    auto it = std::lower_bound(path.jump_times.begin(), path.jump_times.end(), t);
    if (it == path.jump_times.begin()) return 0.0;
    return path.values_after[static_cast<std::size_t>(it - path.jump_times.begin()) - 1];
}

// The index process t -> beta(value at t) as a cadlag step map, suitable
// for build_time_changed. By construction f(t-) = beta(left limit), so the
// rebuilt path reproduces the stable-like one exactly.
inline StepFunction make_index_step(const JumpPath& path, const BetaFunction& beta) {
    std::vector<double> times{0.0};
    std::vector<double> values{beta.eval(0.0)};
    for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
        times.push_back(path.jump_times[k]);
        values.push_back(beta.eval(path.values_after[k]));
    }
    return StepFunction(std::move(times), std::move(values));
}

// Pathwise sandwich check on a probe grid: for every pair s <= t,
//
//   0 <= L[beta(value at s)] increment <= path increment
//     <= L[beta(left limit at t)] increment
//
// where each comparison subordinator is driven by the same events. Reported
// violations are relative to the largest of the three increments.
struct CouplingViolation {
    double s = 0.0;
    double t = 0.0;
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
};

struct CouplingReport {
    std::size_t pairs_checked = 0;
    std::size_t violation_count = 0;
    double max_relative_defect = 0.0;  // positive only if some pair failed
    std::vector<CouplingViolation> violations;  // first few, for diagnosis
};

// Comparisons allow the relative tolerance plus an additive rounding floor.
// Increments are differences of prefix sums whose shared-prefix rounding
// cancels exactly, so the floor only has to cover the window itself:
// a few ulp of the running magnitude per event (including the one-ulp
// monotonicity bump the path builder applies when a kernel is absorbed).
// A genuine ordering defect costs on the order of a whole jump kernel,
// many orders above both allowances.
inline CouplingReport check_coupling(const PointProcess& pp, const BetaFunction& beta,
                                     const std::vector<double>& grid,
                                     double tolerance = 1e-12) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0) || !(grid[k] <= pp.horizon))
            throw std::invalid_argument("check_coupling: grid point outside [0, horizon]");
        if (k > 0 && !(grid[k] >= grid[k - 1]))
            throw std::invalid_argument("check_coupling: grid must be sorted");
    }

    const JumpPath path = build_stable_like(pp, beta);
    const std::size_t G = grid.size();
    const std::size_t E = pp.events.size();

    std::vector<double> path_at(G), expo_right(G), expo_left(G);
    std::vector<std::size_t> events_upto(G);
    for (std::size_t k = 0; k < G; ++k) {
        path_at[k] = eval(path, grid[k]);
        expo_right[k] = beta.eval(path_at[k]);
        expo_left[k] = beta.eval(eval_left(path, grid[k]));
        events_upto[k] = static_cast<std::size_t>(
            std::upper_bound(path.jump_times.begin(), path.jump_times.end(), grid[k]) -
            path.jump_times.begin());
    }

    std::vector<double> log_z(E);
    for (std::size_t n = 0; n < E; ++n) log_z[n] = pp.events[n].z;
    detail::vlog(log_z.data(), log_z.data(), E);

    CouplingReport report;
    std::vector<double> w(E), cum(E + 1), sub_at(G);
    double cached_index = -1.0;
    const double path_back = path.values_after.empty() ? 0.0 : path.values_after.back();
    double noise_unit = 0.0;  // per-event additive rounding headroom

    auto fill_sub_at = [&](double index) {
        if (index == cached_index) return;
        cached_index = index;
        detail::vexp_scaled(log_z.data(), 1.0 / index, w.data(), E);
        cum[0] = 0.0;
        for (std::size_t n = 0; n < E; ++n) cum[n + 1] = cum[n] + w[n];
        for (std::size_t k = 0; k < G; ++k) sub_at[k] = cum[events_upto[k]];
        noise_unit = 8.0 * std::numeric_limits<double>::epsilon() *
                     std::max(path_back, cum[E]);
    };

    auto record = [&](std::size_t i, std::size_t j, double lo, double mid, double up,
                      double defect_rel) {
        ++report.violation_count;
        report.max_relative_defect = std::max(report.max_relative_defect, defect_rel);
        if (report.violations.size() < 64)
            report.violations.push_back({grid[i], grid[j], lo, mid, up});
    };

    // pass 1: lower bound, comparison index frozen at the left endpoint
    for (std::size_t i = 0; i < G; ++i) {
        fill_sub_at(expo_right[i]);
        for (std::size_t j = i; j < G; ++j) {
            ++report.pairs_checked;
            const double lo = sub_at[j] - sub_at[i];
            const double mid = path_at[j] - path_at[i];
            const double scale = std::max({lo, mid, 1e-300});
            const double allow = tolerance * scale +
                                 noise_unit * static_cast<double>(
                                     events_upto[j] - events_upto[i] + 8);
            if (lo < -allow || lo - mid > allow)
                record(i, j, lo, mid, mid, std::abs(lo - mid) / scale);
        }
    }
    // pass 2: upper bound, comparison index from the left limit at the
    // right endpoint
    for (std::size_t j = 0; j < G; ++j) {
        fill_sub_at(expo_left[j]);
        for (std::size_t i = 0; i <= j; ++i) {
            const double up = sub_at[j] - sub_at[i];
            const double mid = path_at[j] - path_at[i];
            const double scale = std::max({up, mid, 1e-300});
            const double allow = tolerance * scale +
                                 noise_unit * static_cast<double>(
                                     events_upto[j] - events_upto[i] + 8);
            if (mid - up > allow)
                record(i, j, mid, mid, up, (mid - up) / scale);
        }
    }
    return report;
}

}  // namespace stablelike
