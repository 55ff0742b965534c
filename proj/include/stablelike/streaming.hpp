#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stablelike/beta_function.hpp"
#include "stablelike/jump_path.hpp"
#include "stablelike/point_process.hpp"
#include "stablelike/rng.hpp"
#include "stablelike/stats.hpp"

// Large-scale runs that never materialize the event list: box counts of the
// path's range, and occupation masses around a typical point built from the
// two independent half-paths seen from that point.

namespace stablelike {

// Dyadic box counts of the range of an increasing jump path over [0,horizon],
// streamed event by event. The range is [0, final value] minus the open jump
// gaps, so each gap removes exactly the cells it strictly contains:
//   N_j = floor(V 2^j) + 1 - sum over gaps (a,b) of
//         max(0, floor(b 2^j) - floor(a 2^j) - 1).
// Values advance exactly as in the materialized builder, so counts agree
// bitwise with counting distinct cells of the materialized image.
struct RangeBoxReport {
    int j_min = 0;
    int j_max = 0;
    std::vector<std::size_t> counts;
    std::vector<double> log2_counts;
    double slope = 0.0;
    double slope_se = 0.0;
    double final_value = 0.0;
    std::size_t event_count = 0;
};

inline RangeBoxReport stream_range_box_counts(double horizon, double z_min, std::uint64_t seed,
                                              const BetaFunction& beta, int j_min, int j_max) {
    if (j_min < 0 || j_min > j_max || j_max > 62)
        throw std::invalid_argument("stream_range_box_counts: bad dyadic level range");

    const std::size_t levels = static_cast<std::size_t>(j_max - j_min) + 1;
    std::vector<std::size_t> excluded(levels, 0);
    const double finest = std::ldexp(1.0, -j_max);

    EventStream stream(horizon, z_min, seed);
    PoissonEvent e;
    double value = 0.0;
    std::size_t count = 0;
    while (stream.next(e)) {
        ++count;
        const double b = beta.eval(value);
        const double next = detail::advance(value, detail::jump_kernel(e.z, 1.0 / b));
        if (next - value >= finest) {
            for (std::size_t i = 0; i < levels; ++i) {
                const double scale = std::ldexp(1.0, j_min + static_cast<int>(i));
                const double lo = std::floor(value * scale);
                const double hi = std::floor(next * scale);
                if (hi - lo > 1.0) excluded[i] += static_cast<std::size_t>(hi - lo - 1.0);
            }
        }
        value = next;
    }

    RangeBoxReport rep;
    rep.j_min = j_min;
    rep.j_max = j_max;
    rep.final_value = value;
    rep.event_count = count;
    std::vector<double> xs(levels), ys(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        const double scale = std::ldexp(1.0, j_min + static_cast<int>(i));
        const auto full = static_cast<std::size_t>(std::floor(value * scale)) + 1;
        rep.counts.push_back(full - excluded[i]);
        rep.log2_counts.push_back(std::log2(static_cast<double>(rep.counts.back())));
        xs[i] = static_cast<double>(j_min + static_cast<int>(i));
        ys[i] = rep.log2_counts.back();
    }
    const LeastSquaresFit fit = least_squares(xs, ys);
    rep.slope = fit.slope;
    rep.slope_se = fit.slope_se;
    return rep;
}

// Occupation masses of centered balls around the value at a fixed time u,
// without building the path: for a constant index the increments after u
// and the reversed increments before u are two independent copies of the
// same jump process, so the ball mass at radius r is the first-passage time
// above r on each side, capped by the distance to the respective endpoint.
struct TypicalPointMasses {
    double u_time = 0.0;
    double alpha = 0.0;
    std::vector<double> radii;   // descending
    std::vector<double> masses;  // occupation of the centered open ball
    std::vector<std::size_t> atoms;
    bool forward_capped = false;  // largest ball still growing at the horizon
    bool backward_capped = false;
};

namespace detail {

// First-passage times above each radius (given ascending) for one streamed
// half-path, plus the piece count strictly inside each radius. Pieces that
// would start beyond the cap are cut off by it.
inline void half_path_passages(double span, double z_min, double alpha, std::uint64_t seed,
                               const std::vector<double>& radii_asc, std::vector<double>& times,
                               std::vector<std::size_t>& atoms, bool& capped) {
    times.assign(radii_asc.size(), span);
    atoms.assign(radii_asc.size(), 0);
    capped = false;

    EventStream stream(span, z_min, seed);
    PoissonEvent e;
    const double inv_alpha = 1.0 / alpha;
    double value = 0.0;
    std::size_t pieces = 0;  // pieces after the one containing u itself
    std::size_t next_radius = 0;
    while (next_radius < radii_asc.size() && stream.next(e)) {
        const double after = jump_kernel(e.z, inv_alpha) + value;
        while (next_radius < radii_asc.size() && after >= radii_asc[next_radius]) {
            times[next_radius] = e.t;
            atoms[next_radius] = pieces;
            ++next_radius;
        }
        ++pieces;
        value = after;
    }
    // radii never reached before the cap: whole half-span stays inside
    for (std::size_t i = next_radius; i < radii_asc.size(); ++i) {
        atoms[i] = pieces;
        capped = true;
    }
}

}  // namespace detail

inline TypicalPointMasses typical_point_masses(double u_time, double horizon, double alpha,
                                               double z_min, std::uint64_t seed,
                                               std::vector<double> radii) {
    if (!(u_time > 0.0) || !(u_time < horizon))
        throw std::invalid_argument("typical_point_masses: u must lie strictly inside [0, horizon]");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("typical_point_masses: alpha must lie in (0,1)");
    if (radii.empty()) throw std::invalid_argument("typical_point_masses: no radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("typical_point_masses: radii must be > 0");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("typical_point_masses: radii must descend");
    }

    std::vector<double> radii_asc(radii.rbegin(), radii.rend());
    std::vector<double> fwd_t, bwd_t;
    std::vector<std::size_t> fwd_a, bwd_a;

    TypicalPointMasses out;
    out.u_time = u_time;
    out.alpha = alpha;
    out.radii = std::move(radii);
    detail::half_path_passages(horizon - u_time, z_min, alpha, seed_for_trial(seed, 0), radii_asc,
                               fwd_t, fwd_a, out.forward_capped);
    detail::half_path_passages(u_time, z_min, alpha, seed_for_trial(seed, 1), radii_asc, bwd_t,
                               bwd_a, out.backward_capped);

    const std::size_t m = radii_asc.size();
    out.masses.resize(m);
    out.atoms.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        // report back in descending-radius order; +1 for the piece at u
        const std::size_t k = m - 1 - i;
        out.masses[i] = fwd_t[k] + bwd_t[k];
        out.atoms[i] = fwd_a[k] + bwd_a[k] + 1;
    }
    return out;
}

}  // namespace stablelike
