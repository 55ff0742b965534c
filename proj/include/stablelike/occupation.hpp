#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "stablelike/jump_path.hpp"

// Occupation measure of a monotone jump path: one atom per constant piece,
// level = piece value, mass = piece duration. Queries are open-interval by
// convention, matching open balls; atoms sitting exactly on a query
// boundary are excluded.

namespace stablelike {

struct OccupationMeasure {
    std::vector<double> levels;      // strictly increasing
    std::vector<double> durations;   // positive
    std::vector<double> cumulative;  // cumulative[i] = sum of durations[0..i]
    double total = 0.0;              // the path horizon
};

inline OccupationMeasure occupation_measure(const JumpPath& path) {
    OccupationMeasure om;
    om.total = path.horizon;
    const std::size_t n = path.jump_times.size();
    om.levels.reserve(n + 1);
    om.durations.reserve(n + 1);
    // durations are direct differences of stored times so the total mass
    // telescopes back to the horizon
    double level = 0.0, start = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double end = k < n ? path.jump_times[k] : path.horizon;
        if (end > start) {
            om.levels.push_back(level);
            om.durations.push_back(end - start);
        }
        if (k < n) {
            level = path.values_after[k];
            start = path.jump_times[k];
        }
    }
    om.cumulative.resize(om.durations.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < om.durations.size(); ++i) {
        acc += om.durations[i];
        om.cumulative[i] = acc;
    }
    return om;
}

// Mass of the open interval (a, b). Total functions: an empty or inverted
// interval simply has zero mass. The sum runs left to right over the atoms
// inside, so the result is bit-identical to a plain conditional scan; a
// prefix-sum difference would not be.
inline double mass_interval(const OccupationMeasure& om, double a, double b) {
    if (!(a < b) || om.levels.empty()) return 0.0;
    const auto first = std::upper_bound(om.levels.begin(), om.levels.end(), a);
    const auto last = std::lower_bound(om.levels.begin(), om.levels.end(), b);
    double m = 0.0;
    for (auto it = first; it < last; ++it)
        m += om.durations[static_cast<std::size_t>(it - om.levels.begin())];
    return m;
}

// Mass of the open ball B(x, r).
inline double mass_ball(const OccupationMeasure& om, double x, double r) {
    if (!(r > 0.0)) return 0.0;
    return mass_interval(om, x - r, x + r);
}

// Number of atoms inside (a, b); estimators use this to flag scales where
// a ball is resolved by too few pieces.
inline std::size_t atoms_in_interval(const OccupationMeasure& om, double a, double b) {
    if (!(a < b)) return 0;
    const auto first = std::upper_bound(om.levels.begin(), om.levels.end(), a);
    const auto last = std::lower_bound(om.levels.begin(), om.levels.end(), b);
    return first < last ? static_cast<std::size_t>(last - first) : 0;
}

}  // namespace stablelike
