#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stablelike/beta_function.hpp"
#include "stablelike/jump_path.hpp"
#include "stablelike/occupation.hpp"
#include "stablelike/rng.hpp"
#include "stablelike/stats.hpp"

// Dimension estimators: pointwise local dimensions from ball masses over a
// geometric scale grid, and box-counting dimensions of value sets.

namespace stablelike {

struct LocalDimEstimate {
    double x = 0.0;
    std::vector<double> radii;        // descending, coarse to fine
    std::vector<double> ratios;       // log mass / log r where usable, else NaN
    std::vector<std::uint32_t> atoms; // atoms inside the ball at each scale
    std::size_t usable_count = 0;
    double lower_est = std::numeric_limits<double>::quiet_NaN();  // min over finest half
    double upper_est = std::numeric_limits<double>::quiet_NaN();  // max over finest half
    bool low_confidence = false;      // fewer than 4 usable scales
    std::size_t few_atom_scales = 0;  // scales whose ball held < 8 atoms
};

// Shared reduction: per-scale log-log ratios, then extremes over the finest
// half of the usable scales. The liminf/limsup proxies are deliberately
// scale extremes, not a regression slope, because the upper dimension lives
// on the oscillation a fit would smooth away.
inline LocalDimEstimate local_dim_from_masses(double x, std::vector<double> radii,
                                              const std::vector<double>& masses,
                                              std::vector<std::uint32_t> atoms,
                                              double total_mass) {
    if (radii.size() != masses.size() || (!atoms.empty() && atoms.size() != radii.size()))
        throw std::invalid_argument("local_dim_from_masses: mismatched inputs");
    LocalDimEstimate est;
    est.x = x;
    est.radii = std::move(radii);
    est.atoms = std::move(atoms);
    est.ratios.assign(est.radii.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < est.radii.size(); ++i) {
        const double m = masses[i];
        if (m > 0.0 && m < total_mass) {
            est.ratios[i] = std::log(m) / std::log(est.radii[i]);
            usable.push_back(i);
        }
        if (i < est.atoms.size() && est.atoms[i] < 8) ++est.few_atom_scales;
    }
    est.usable_count = usable.size();
    est.low_confidence = usable.size() < 4;
    if (usable.empty()) return est;

    const std::size_t half_begin = usable.size() / 2;  // finest half (radii descend)
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = half_begin; j < usable.size(); ++j) {
        const double r = est.ratios[usable[j]];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    est.lower_est = lo;
    est.upper_est = hi;
    return est;
}

inline std::vector<double> radius_grid(double r_min, double r_max, int scales_per_decade) {
    if (!(r_min > 0.0) || !(r_min < r_max))
        throw std::invalid_argument("radius_grid: need 0 < r_min < r_max");
    if (scales_per_decade < 1)
        throw std::invalid_argument("radius_grid: scales_per_decade must be >= 1");
    std::vector<double> radii;
    const double step = std::pow(10.0, -1.0 / scales_per_decade);
    for (double r = r_max; r >= r_min * (1.0 - 1e-12); r *= step) radii.push_back(r);
    return radii;
}

inline LocalDimEstimate local_dim(const OccupationMeasure& om, double x, double r_min,
                                  double r_max, int scales_per_decade = 4) {
    const std::vector<double> radii = radius_grid(r_min, r_max, scales_per_decade);
    std::vector<double> masses(radii.size());
    std::vector<std::uint32_t> atoms(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        masses[i] = mass_ball(om, x, radii[i]);
        atoms[i] = static_cast<std::uint32_t>(
            atoms_in_interval(om, x - radii[i], x + radii[i]));
    }
    return local_dim_from_masses(x, radii, masses, std::move(atoms), om.total);
}

struct BoxDimEstimate {
    int j_min = 0;
    int j_max = 0;
    std::vector<std::size_t> counts;       // occupied boxes of side 2^-j
    std::vector<double> log2_counts;
    double slope = 0.0;
    double slope_se = 0.0;
};

// Box-counting over dyadic grids: occupied boxes of side 2^-j for each j,
// least-squares slope of log2 count against j.
inline BoxDimEstimate box_dimension(std::vector<double> values, int j_min, int j_max) {
    if (values.empty()) throw std::invalid_argument("box_dimension: no values");
    if (j_min < 0 || j_min > j_max || j_max > 62)
        throw std::invalid_argument("box_dimension: need 0 <= j_min <= j_max <= 62");
    std::sort(values.begin(), values.end());

    BoxDimEstimate est;
    est.j_min = j_min;
    est.j_max = j_max;
    std::vector<double> xs, ys;
    for (int j = j_min; j <= j_max; ++j) {
        const double scale = std::ldexp(1.0, j);
        std::size_t boxes = 1;
        double prev = std::floor(values.front() * scale);
        for (std::size_t i = 1; i < values.size(); ++i) {
            const double box = std::floor(values[i] * scale);
            if (box != prev) {
                ++boxes;
                prev = box;
            }
        }
        est.counts.push_back(boxes);
        est.log2_counts.push_back(std::log2(static_cast<double>(boxes)));
        xs.push_back(static_cast<double>(j));
        ys.push_back(est.log2_counts.back());
    }
    const LeastSquaresFit fit = least_squares(xs, ys);
    est.slope = fit.slope;
    est.slope_se = fit.slope_se;
    return est;
}

// Exact image of a closed time interval under the path: the entry value
// plus every post-jump value reached inside it.
inline std::vector<double> image_values(const JumpPath& path, double a, double b) {
    if (!(a >= 0.0) || !(a <= b) || !(b <= path.horizon))
        throw std::invalid_argument("image_values: need 0 <= a <= b <= horizon");
    std::vector<double> vals{eval(path, a)};
    auto it = std::upper_bound(path.jump_times.begin(), path.jump_times.end(), a);
    for (; it != path.jump_times.end() && *it <= b; ++it)
        vals.push_back(path.values_after[static_cast<std::size_t>(
            it - path.jump_times.begin())]);
    return vals;
}

struct ImageDimReport {
    double predicted_lo = 0.0;  // index at the entry state
    double predicted_hi = 0.0;  // index at the left limit of the exit state
    BoxDimEstimate box;
    double tolerance = 0.0;
    bool contained = false;
};

// Dimension bracket for the image of E = [a,b]: the interval of index
// values swept by the path over E (an interval has dimension one), checked
// against the measured box dimension of the exact image.
inline ImageDimReport image_dim_bounds(const JumpPath& path, const BetaFunction& beta,
                                       double a, double b, int j_min, int j_max,
                                       double tolerance = 0.1) {
    ImageDimReport rep;
    rep.predicted_lo = beta.eval(eval(path, a));
    rep.predicted_hi = beta.eval(eval_left(path, b));
    rep.box = box_dimension(image_values(path, a, b), j_min, j_max);
    rep.tolerance = tolerance;
    rep.contained = rep.box.slope >= rep.predicted_lo - tolerance &&
                    rep.box.slope <= rep.predicted_hi + tolerance;
    return rep;
}

struct TypicalBehaviorReport {
    std::size_t n_samples = 0;
    double median_abs_dev_lower = 0.0;  // |lower_est - index at the state|
    double frac_upper_in_bracket = 0.0; // upper_est <= 2 * index + slack
    std::size_t low_confidence_count = 0;
    std::vector<double> lower_devs;
    std::vector<double> upper_margins;  // 2 * index + slack - upper_est
};

// Sample uniform times, estimate the local dimension at the path value, and
// compare against the index there: the lower estimate should sit near
// beta(state), the upper estimate inside [beta, 2 beta] up to slack.
inline TypicalBehaviorReport typical_behavior_report(const JumpPath& path,
                                                     const OccupationMeasure& om,
                                                     const BetaFunction& beta,
                                                     std::size_t n_samples,
                                                     std::uint64_t seed,
                                                     double r_min = 1e-6,
                                                     double r_max = 1e-2,
                                                     int scales_per_decade = 4,
                                                     double upper_slack = 0.1) {
    if (n_samples == 0)
        throw std::invalid_argument("typical_behavior_report: n_samples must be > 0");
    TypicalBehaviorReport rep;
    rep.n_samples = n_samples;
    Rng rng(seed);
    std::size_t upper_ok = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = rng.u01() * path.horizon;
        const double x = eval(path, t);
        const double bx = beta.eval(x);
        const LocalDimEstimate est = local_dim(om, x, r_min, r_max, scales_per_decade);
        if (est.low_confidence) {
            ++rep.low_confidence_count;
            continue;
        }
        rep.lower_devs.push_back(std::abs(est.lower_est - bx));
        rep.upper_margins.push_back(2.0 * bx + upper_slack - est.upper_est);
        if (est.upper_est <= 2.0 * bx + upper_slack) ++upper_ok;
    }
    if (!rep.lower_devs.empty()) {
        rep.median_abs_dev_lower = median(rep.lower_devs);
        rep.frac_upper_in_bracket =
            static_cast<double>(upper_ok) / static_cast<double>(rep.lower_devs.size());
    }
    return rep;
}

}  // namespace stablelike
