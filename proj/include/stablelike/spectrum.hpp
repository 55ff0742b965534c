#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stablelike/beta_function.hpp"
#include "stablelike/jump_path.hpp"

// Dimension spectra: the closed-form per-index curves, the supremum
// envelope over an index-value set, and the case logic for the exceptional
// values created by doubling jumps.

namespace stablelike {

// Spectrum values live in {-inf} union [0,1]. Minus infinity is a
// distinguished state, never a float sentinel.
struct DimValue {
    double value = 0.0;
    bool neg_inf = false;

    static DimValue finite(double v) { return {v, false}; }
    static DimValue minus_infinity() { return {0.0, true}; }
};

inline bool operator==(const DimValue& a, const DimValue& b) {
    if (a.neg_inf || b.neg_inf) return a.neg_inf == b.neg_inf;
    return a.value == b.value;
}

enum class GVariant { closed, half_open };

// Per-index spectrum curve: alpha * (2 alpha / h - 1) on [alpha, 2 alpha],
// minus infinity outside. The half-open variant is the same curve with the
// right endpoint h = 2 alpha removed; that endpoint only reappears through
// the exceptional-case logic.
inline DimValue g_spectrum(double alpha, double h, GVariant variant) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("g_spectrum: alpha must lie in (0,1)");
    if (!(h >= 0.0)) throw std::invalid_argument("g_spectrum: h must be >= 0");
    const double top = 2.0 * alpha;
    const bool inside = variant == GVariant::closed ? (h >= alpha && h <= top)
                                                    : (h >= alpha && h < top);
    if (!inside) return DimValue::minus_infinity();
    return DimValue::finite(alpha * (top / h - 1.0));
}

// Finite union of disjoint closed intervals (possibly degenerate points),
// kept sorted. This is how attainable index-value sets are reported.
struct IndexSet {
    struct Interval {
        double lo = 0.0;
        double hi = 0.0;
    };
    std::vector<Interval> components;

    bool empty() const { return components.empty(); }

    bool contains(double x) const {
        auto it = std::upper_bound(components.begin(), components.end(), x,
                                   [](double v, const Interval& c) { return v < c.lo; });
        if (it == components.begin()) return false;
        --it;
        return x >= it->lo && x <= it->hi;
    }

    // max of the set intersected with (lo_open, hi_closed], if any
    std::optional<double> sup_in(double lo_open, double hi_closed) const {
        for (auto it = components.rbegin(); it != components.rend(); ++it) {
            if (it->lo > hi_closed) continue;
            const double c = std::min(it->hi, hi_closed);
            if (c > lo_open) return c;
            return std::nullopt;
        }
        return std::nullopt;
    }

    double min_value() const { return components.front().lo; }
    double max_value() const { return components.back().hi; }
};

enum class SpectrumMode { space, time };

// Attainable index values beta(path value) over a window, reported as the
// closed span between extremes minus the open gap (beta(left), beta(right))
// opened by each jump inside the window. For a truncated path this is a
// finite set of points; merging is by exact value.
//
// time mode: window is an open time interval; space mode: an open interval
// of levels. A window missing the path entirely yields the empty set.
inline IndexSet index_range(const JumpPath& path, const BetaFunction& beta, double win_lo,
                            double win_hi, SpectrumMode mode) {
    if (!(win_lo < win_hi))
        throw std::invalid_argument("index_range: window must be a non-trivial interval");

    // pieces: piece 0 is the initial zero level, piece k >= 1 holds value
    // values_after[k-1] on [jump_times[k-1], jump_times[k])
    const std::size_t n = path.jump_times.size();
    auto piece_value = [&](std::size_t k) {
        return k == 0 ? 0.0 : path.values_after[k - 1];
    };

    std::size_t first, last;  // inclusive piece range meeting the window
    if (mode == SpectrumMode::time) {
        if (win_hi <= 0.0 || win_lo >= path.horizon) return {};
        // piece k covers [start_k, end_k); it meets (win_lo, win_hi) iff
        // start_k < win_hi and end_k > win_lo
        first = static_cast<std::size_t>(
            std::upper_bound(path.jump_times.begin(), path.jump_times.end(), win_lo) -
            path.jump_times.begin());
        last = static_cast<std::size_t>(
            std::lower_bound(path.jump_times.begin(), path.jump_times.end(), win_hi) -
            path.jump_times.begin());
        // last piece starting strictly before win_hi
        if (last > n) last = n;
    } else {
        if (!(win_hi > 0.0)) return {};  // every level is >= 0
        const std::size_t ub = static_cast<std::size_t>(
            std::upper_bound(path.values_after.begin(), path.values_after.end(), win_lo) -
            path.values_after.begin());
        const std::size_t lb = static_cast<std::size_t>(
            std::lower_bound(path.values_after.begin(), path.values_after.end(), win_hi) -
            path.values_after.begin());
        // piece k >= 1 holds level values_after[k-1]; piece 0 holds level 0
        first = win_lo < 0.0 ? 0 : ub + 1;
        last = lb;
        if (first > last) return {};
    }

    IndexSet set;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = first; k <= last; ++k) {
        const double b = beta.eval(piece_value(k));
        if (b != prev) {
            set.components.push_back({b, b});
            prev = b;
        }
    }
    return set;
}

enum class SpectrumCase {
    regular,
    empty_admissible,
    exceptional_case1,
    exceptional_case2,
    exceptional_case3,
};

struct SpectrumValue {
    double h = 0.0;
    DimValue value;
    SpectrumCase tag = SpectrumCase::regular;
    double alpha_star = std::numeric_limits<double>::quiet_NaN();
};

// Upper-spectrum envelope: sup over alpha in I with h in [alpha, 2 alpha)
// of the per-index curve (space mode), or of the same curve divided by
// alpha (time mode). Both objectives increase in alpha on the admissible
// set, so the supremum sits at its largest element.
inline SpectrumValue spectrum_envelope(double h, const IndexSet& I, SpectrumMode mode) {
    if (!(h >= 0.0)) throw std::invalid_argument("spectrum_envelope: h must be >= 0");
    SpectrumValue out;
    out.h = h;
    const auto a = I.sup_in(h / 2.0, h);
    if (!a) {
        out.value = DimValue::minus_infinity();
        out.tag = SpectrumCase::empty_admissible;
        return out;
    }
    out.alpha_star = *a;
    const double ratio = 2.0 * *a / h - 1.0;
    out.value = DimValue::finite(mode == SpectrumMode::space ? *a * ratio : ratio);
    out.tag = SpectrumCase::regular;
    return out;
}

// Lower spectrum: 0 on the index-value set, minus infinity off it. The
// space variant is defined through the closure and the time variant through
// attained values only; for the finite sets produced here the two coincide,
// so both modes share one membership test.
inline DimValue lower_spectrum(double h, const IndexSet& I, SpectrumMode) {
    return I.contains(h) ? DimValue::finite(0.0) : DimValue::minus_infinity();
}

// Jumps whose index at least doubles: beta(value after) >= 2 beta(value
// before). Each produces the exceptional spectrum values beta(after) and
// 2 beta(before).
struct ExceptionalJump {
    double tau = 0.0;
    double value_left = 0.0;   // state just before the jump
    double value_right = 0.0;  // state at the jump
    double beta_left = 0.0;
    double beta_right = 0.0;
    bool strict = false;  // beta_right > 2 beta_left
};

struct ExceptionalSets {
    std::vector<ExceptionalJump> jumps;

    std::vector<double> e1() const {  // {beta(value after)}
        std::vector<double> v;
        v.reserve(jumps.size());
        for (const auto& j : jumps) v.push_back(j.beta_right);
        return v;
    }
    std::vector<double> e2() const {  // {2 beta(value before)}
        std::vector<double> v;
        v.reserve(jumps.size());
        for (const auto& j : jumps) v.push_back(2.0 * j.beta_left);
        return v;
    }
    // time-mode exceptional values coincide with e1
    std::vector<double> e_prime() const { return e1(); }
};

inline ExceptionalSets exceptional_sets(const JumpPath& path, const BetaFunction& beta) {
    ExceptionalSets out;
    double value = 0.0;
    for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
        const double next = path.values_after[k];
        const double bl = beta.eval(value);
        const double br = beta.eval(next);
        if (br >= 2.0 * bl)
            out.jumps.push_back(
                {path.jump_times[k], value, next, bl, br, br > 2.0 * bl});
        value = next;
    }
    return out;
}

// Inputs for the exceptional-value case logic at one doubling jump: which
// of the two states lies in the query window, and their measured upper
// local dimensions.
struct ExceptionalCaseInput {
    double h = 0.0;
    double beta_left = 0.0;
    double beta_right = 0.0;
    bool left_in_window = false;
    bool right_in_window = false;
    double dim_at_left = 0.0;
    double dim_at_right = 0.0;
};

// Case table for spectrum values at an exceptional h:
//   case 1  h = beta_right, strictly above 2 beta_left: decided by the
//           post-jump state (0 iff it is in the window and its upper
//           dimension equals h);
//   case 2  h = 2 beta_left, strictly below beta_right: decided by the
//           pre-jump state the same way;
//   case 3  h = beta_right = 2 beta_left: 0 iff some in-window state among
//           the two has upper dimension h.
// Time mode divides the space value by beta_left, which preserves both 0
// and minus infinity.
inline SpectrumValue exceptional_value(const ExceptionalCaseInput& in, SpectrumMode mode,
                                       double dim_tol = 0.0) {
    SpectrumValue out;
    out.h = in.h;
    const double doubled = 2.0 * in.beta_left;
    const bool equal_case = in.beta_right == doubled;
    auto dim_matches = [&](double dim) { return std::abs(dim - in.h) <= dim_tol; };

    bool zero;
    if (equal_case && in.h == in.beta_right) {
        out.tag = SpectrumCase::exceptional_case3;
        zero = (in.left_in_window && dim_matches(in.dim_at_left)) ||
               (in.right_in_window && dim_matches(in.dim_at_right));
    } else if (in.h == in.beta_right && in.beta_right > doubled) {
        out.tag = SpectrumCase::exceptional_case1;
        zero = in.right_in_window && dim_matches(in.dim_at_right);
    } else if (in.h == doubled && in.beta_right > doubled) {
        out.tag = SpectrumCase::exceptional_case2;
        zero = in.left_in_window && dim_matches(in.dim_at_left);
    } else {
        throw std::invalid_argument(
            "exceptional_value: h is not an exceptional value of this jump");
    }

    if (!zero) {
        out.value = DimValue::minus_infinity();
        return out;
    }
    out.value = DimValue::finite(0.0);  // zero survives the time-mode division
    return out;
}

// Dimension of the time set where the upper local dimension reaches its
// profile: 2 / upsilon_min - 1 for profile minima in [1, 2].
inline double general_spectrum_value(double upsilon_min) {
    if (!(upsilon_min >= 1.0) || !(upsilon_min <= 2.0))
        throw std::invalid_argument("general_spectrum_value: upsilon_min must lie in [1,2]");
    return 2.0 / upsilon_min - 1.0;
}

// Profile t -> h / beta(value at t) whose minima feed
// general_spectrum_value.
inline std::vector<double> upsilon_profile(const JumpPath& path, const BetaFunction& beta,
                                           double h, const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(h / beta.eval(eval(path, t)));
    return out;
}

}  // namespace stablelike
