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

// Jump-configuration censuses over dyadic and ladder scales: double-jump
// counts, zero-jump and double-jump interval families, their closed-form
// probabilities, survivor trees, and the compensated small-jump
// concentration statistic.

namespace stablelike {

// Rapidly decreasing scale sequence eta_l = eta_{l-1}^(1+eps), carried in
// extended precision, stopping at the first level at or below the floor.
struct ScaleLadder {
    double eta0 = 0.0;
    double eps = 0.0;
    double floor = 0.0;
    std::vector<double> levels;
};

// Default ladder 2^-16 -> 2^-20 -> 2^-25 -> 2^-31.25: every refinement
// ratio is a power of two or >= 16, so grid alignment loses at most one
// child interval per parent and a survivor tree can actually keep on the
// order of eta0/eta_last leaves. Slowly decreasing ladders with ratios
// below 2 lose almost every child to alignment, whatever the process does.
inline constexpr double default_ladder_eta0 = 0x1p-16;
inline constexpr double default_ladder_eps = 0.25;
inline constexpr double default_ladder_floor = 0x1p-30;

inline ScaleLadder desk_ladder(double eta0, double eps, double floor) {
    if (!(floor > 0.0) || !(floor < eta0) || !(eta0 < 1.0))
        throw std::invalid_argument("desk_ladder: need 0 < floor < eta0 < 1");
    if (!(eps > 0.0)) throw std::invalid_argument("desk_ladder: eps must be > 0");
    ScaleLadder ladder;
    ladder.eta0 = eta0;
    ladder.eps = eps;
    ladder.floor = floor;
    long double level = eta0;
    ladder.levels.push_back(eta0);
    while (ladder.levels.back() > floor) {
        if (ladder.levels.size() >= 64)
            throw std::invalid_argument("desk_ladder: floor unreachable within 64 levels");
        level = powl(level, 1.0L + static_cast<long double>(eps));
        ladder.levels.push_back(static_cast<double>(level));
    }
    return ladder;
}

inline ScaleLadder default_desk_ladder() {
    return desk_ladder(default_ladder_eta0, default_ladder_eps, default_ladder_floor);
}

// Census of dyadic intervals of length 2^-n over [0,1] whose 3-neighbor
// enlargement holds at least two jumps of size >= 2^(-n/(gamma-eps)).
struct CensusReport {
    int n = 0;
    double gamma = 0.0;
    double eps = 0.0;
    double threshold = 0.0;  // minimum jump size counted
    double lambda = 0.0;     // per-interval mean of the enlarged-window count
    std::size_t observed = 0;
    double expected = 0.0;  // 2^n * P(Poisson(lambda) >= 2)
    std::vector<std::uint32_t> members;
};

inline CensusReport double_jump_limsup_census(const PointProcess& pp, int n, double gamma,
                                              double eps) {
    if (n < 1 || n > 26) throw std::invalid_argument("double_jump_limsup_census: n out of range");
    if (!(gamma - eps > 0.0))
        throw std::invalid_argument("double_jump_limsup_census: gamma - eps must be > 0");
    if (!(pp.horizon >= 1.0))
        throw std::invalid_argument("double_jump_limsup_census: census needs horizon >= 1");
    const double threshold = std::exp2(-static_cast<double>(n) / (gamma - eps));
    if (!(threshold > pp.z_min))
        throw std::invalid_argument("double_jump_limsup_census: scale below truncation");

    const std::size_t K = static_cast<std::size_t>(1) << n;
    std::vector<std::uint32_t> cnt(K, 0);
    const double scale = std::ldexp(1.0, n);
    for (const auto& e : pp.events) {
        if (e.z < threshold || e.t >= 1.0) continue;
        const auto k = static_cast<std::size_t>(e.t * scale);
        if (k < K) ++cnt[k];
    }

    CensusReport rep;
    rep.n = n;
    rep.gamma = gamma;
    rep.eps = eps;
    rep.threshold = threshold;
    rep.lambda = 3.0 * std::ldexp(1.0, -n) * (1.0 / threshold - 1.0);
    rep.expected = static_cast<double>(K) * poisson_tail_ge2(rep.lambda);
    for (std::size_t k = 0; k < K; ++k) {
        std::uint32_t m = cnt[k];
        if (k > 0) m += cnt[k - 1];
        if (k + 1 < K) m += cnt[k + 1];
        if (m >= 2) rep.members.push_back(static_cast<std::uint32_t>(k));
    }
    rep.observed = rep.members.size();
    return rep;
}

namespace detail {

inline void check_family_scale(const PointProcess& pp, double band_lo, std::size_t K) {
    if (!(pp.horizon >= 1.0))
        throw std::invalid_argument("interval family: needs horizon >= 1");
    if (!(band_lo >= pp.z_min))
        throw std::invalid_argument("interval family: size band below truncation");
    if (K < 1 || K > (static_cast<std::size_t>(1) << 22))
        throw std::invalid_argument("interval family: interval count out of range");
}

}  // namespace detail

// Intervals of length eta_l (on [0,1]) whose 3-neighbor enlargement holds no
// jump with size in [eta_{l+1}^(1/gamma), eta_l^(1/gamma)). Boundary
// neighbors that fall outside [0,1] count as empty.
inline std::vector<std::uint32_t> zero_jump_family(const PointProcess& pp,
                                                   const ScaleLadder& ladder, std::size_t l,
                                                   double gamma) {
    if (l + 1 >= ladder.levels.size())
        throw std::invalid_argument("zero_jump_family: level needs a successor in the ladder");
    if (!(gamma > 0.0)) throw std::invalid_argument("zero_jump_family: gamma must be > 0");
    const double eta = ladder.levels[l];
    const double band_lo = std::pow(ladder.levels[l + 1], 1.0 / gamma);
    const double band_hi = std::pow(eta, 1.0 / gamma);
    const auto K = static_cast<std::size_t>(1.0 / eta);
    detail::check_family_scale(pp, band_lo, K);

    std::vector<std::uint8_t> occupied(K, 0);
    for (const auto& e : pp.events) {
        if (e.z < band_lo || e.z >= band_hi) continue;
        const auto k = static_cast<std::size_t>(e.t / eta);
        if (k < K) occupied[k] = 1;
    }
    std::vector<std::uint32_t> family;
    for (std::size_t k = 0; k < K; ++k) {
        const bool left = k > 0 && occupied[k - 1];
        const bool right = k + 1 < K && occupied[k + 1];
        if (!left && !occupied[k] && !right)
            family.push_back(static_cast<std::uint32_t>(k));
    }
    return family;
}

// Intervals of length eta_l whose second neighbors on both sides each hold
// exactly one jump with size in [eta_l^(1/gamma)/2, eta_l^(1/gamma)).
// A missing neighbor beyond the boundary cannot hold exactly one jump.
inline std::vector<std::uint32_t> double_jump_family(const PointProcess& pp,
                                                     const ScaleLadder& ladder, std::size_t l,
                                                     double gamma) {
    if (l >= ladder.levels.size())
        throw std::invalid_argument("double_jump_family: level outside the ladder");
    if (!(gamma > 0.0)) throw std::invalid_argument("double_jump_family: gamma must be > 0");
    const double eta = ladder.levels[l];
    const double band_hi = std::pow(eta, 1.0 / gamma);
    const double band_lo = band_hi / 2.0;
    const auto K = static_cast<std::size_t>(1.0 / eta);
    detail::check_family_scale(pp, band_lo, K);

    std::vector<std::uint32_t> cnt(K, 0);
    for (const auto& e : pp.events) {
        if (e.z < band_lo || e.z >= band_hi) continue;
        const auto k = static_cast<std::size_t>(e.t / eta);
        if (k < K) ++cnt[k];
    }
    std::vector<std::uint32_t> family;
    for (std::size_t k = 2; k + 2 < K; ++k)
        if (cnt[k - 2] == 1 && cnt[k + 2] == 1)
            family.push_back(static_cast<std::uint32_t>(k));
    return family;
}

// Closed-form configuration probabilities at window scale eta with
// successor scale eta_next:
//   p = P(no jump in the 3-interval enlargement with size in the
//       inter-scale band) = exp(-3 eta (eta_next^(-1/gamma) - eta^(-1/gamma)))
//   q = P(one jump in each flanking interval with size in the top half-band)
//     = (m exp(-m))^2 with m = eta^(1 - 1/gamma)
// Both follow from the dz/z^2 band masses.
struct ConfigProbabilities {
    double zero_jump_mean = 0.0;  // Poisson mean behind p
    double p = 0.0;
    double half_band_mean = 0.0;  // Poisson mean behind q
    double q = 0.0;
    bool underflow = false;
};

inline ConfigProbabilities config_probabilities(double eta, double eta_next, double gamma) {
    if (!(eta_next > 0.0) || !(eta_next < eta) || !(eta < 1.0))
        throw std::invalid_argument("config_probabilities: need 0 < eta_next < eta < 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("config_probabilities: gamma must be > 0");
    ConfigProbabilities cp;
    cp.zero_jump_mean =
        3.0 * eta * (std::pow(eta_next, -1.0 / gamma) - std::pow(eta, -1.0 / gamma));
    cp.p = std::exp(-cp.zero_jump_mean);
    cp.half_band_mean = std::pow(eta, 1.0 - 1.0 / gamma);
    const double one = cp.half_band_mean * std::exp(-cp.half_band_mean);
    cp.q = one * one;
    cp.underflow = !(cp.p > 0.0) || !(cp.q > 0.0);
    if (cp.underflow) {
        if (!(cp.p > 0.0)) cp.p = 0.0;
        if (!(cp.q > 0.0)) cp.q = 0.0;
    }
    return cp;
}

// Monte Carlo check of the configuration probabilities: independent seeded
// windows of five intervals, the center one tested for the zero-jump
// condition (its 3-neighbor enlargement) and the double-jump condition
// (second neighbors on both sides).
struct ConfigMcReport {
    std::size_t windows = 0;
    double freq_zero = 0.0;
    double freq_double = 0.0;
    double se_zero = 0.0;
    double se_double = 0.0;
    ConfigProbabilities closed_form;
};

inline ConfigMcReport config_probability_mc(double eta, double eta_next, double gamma,
                                            std::size_t windows, std::uint64_t base_seed) {
    if (windows == 0) throw std::invalid_argument("config_probability_mc: no windows");
    ConfigMcReport rep;
    rep.windows = windows;
    rep.closed_form = config_probabilities(eta, eta_next, gamma);

    const double zero_lo = std::pow(eta_next, 1.0 / gamma);
    const double band_hi = std::pow(eta, 1.0 / gamma);
    const double half_lo = band_hi / 2.0;
    const double z_min = 0.5 * std::min(zero_lo, half_lo);
    const double horizon = 5.0 * eta;

    std::size_t hits_zero = 0, hits_double = 0;
    for (std::size_t w = 0; w < windows; ++w) {
        const PointProcess pp = sample_ppp(horizon, z_min, seed_for_trial(base_seed, w));
        bool zero_ok = true;
        std::uint32_t left_cnt = 0, right_cnt = 0;
        for (const auto& e : pp.events) {
            if (e.z >= zero_lo && e.z < band_hi && e.t >= eta && e.t < 4.0 * eta)
                zero_ok = false;
            if (e.z >= half_lo && e.z < band_hi) {
                if (e.t < eta) ++left_cnt;
                else if (e.t >= 4.0 * eta) ++right_cnt;
            }
        }
        if (zero_ok) ++hits_zero;
        if (left_cnt == 1 && right_cnt == 1) ++hits_double;
    }
    const double n = static_cast<double>(windows);
    rep.freq_zero = static_cast<double>(hits_zero) / n;
    rep.freq_double = static_cast<double>(hits_double) / n;
    rep.se_zero = std::sqrt(rep.freq_zero * (1.0 - rep.freq_zero) / n);
    rep.se_double = std::sqrt(rep.freq_double * (1.0 - rep.freq_double) / n);
    return rep;
}

// Nested survivor tree: level-l nodes are ladder-scale intervals passing
// the zero-jump test and fully contained in a surviving level-(l-1) node.
// The last ladder scale has no successor band, so leaves are its intervals
// inside the deepest tested survivors, with no test of their own.
struct TreeReport {
    double root_lo = 0.0;
    double root_hi = 0.0;
    std::vector<double> level_lengths;               // interval length per tree level
    std::vector<std::size_t> level_counts;           // survivors per tree level
    std::vector<std::vector<std::uint64_t>> survivors;  // global interval indices
    std::size_t leaf_count = 0;
};

inline TreeReport grow_tree(const PointProcess& pp, double root_lo, double root_hi,
                            const ScaleLadder& ladder, double gamma) {
    if (!(root_lo >= 0.0) || !(root_lo < root_hi) || !(root_hi <= pp.horizon))
        throw std::invalid_argument("grow_tree: root interval outside [0, horizon]");
    if (!(gamma > 0.0)) throw std::invalid_argument("grow_tree: gamma must be > 0");
    const std::size_t L = ladder.levels.size();
    if (L < 2) throw std::invalid_argument("grow_tree: ladder too short");
    if (L >= 3) {
        const double deepest_band_lo = std::pow(ladder.levels[L - 1], 1.0 / gamma);
        if (!(deepest_band_lo >= pp.z_min))
            throw std::invalid_argument("grow_tree: deepest size band below truncation");
    }

    TreeReport rep;
    rep.root_lo = root_lo;
    rep.root_hi = root_hi;

    // candidate children of [a,b) on the global grid of step eta
    auto children_of = [](double a, double b, double eta, auto&& visit) {
        auto k = static_cast<std::uint64_t>(std::ceil(a / eta));
        while (static_cast<double>(k) * eta < a) ++k;
        while (k > 0 && (static_cast<double>(k) - 1.0) * eta >= a) --k;
        for (; (static_cast<double>(k) + 1.0) * eta <= b; ++k) visit(k);
    };

    // parent intervals carried as (lo, hi) pairs; level 0 is the root
    std::vector<std::pair<double, double>> parents{{root_lo, root_hi}};

    std::vector<double> band_times;  // jump times in the level's size band, sorted
    for (std::size_t l = 1; l + 1 < L; ++l) {
        const double eta = ladder.levels[l];
        const double band_lo = std::pow(ladder.levels[l + 1], 1.0 / gamma);
        const double band_hi = std::pow(eta, 1.0 / gamma);
        band_times.clear();
        for (const auto& e : pp.events)
            if (e.z >= band_lo && e.z < band_hi) band_times.push_back(e.t);
        std::sort(band_times.begin(), band_times.end());

        std::vector<std::pair<double, double>> next;
        std::vector<std::uint64_t> level_survivors;
        for (const auto& [pa, pb] : parents) {
            children_of(pa, pb, eta, [&](std::uint64_t k) {
                const double lo = (static_cast<double>(k) - 1.0) * eta;
                const double hi = (static_cast<double>(k) + 2.0) * eta;
                const auto begin = std::lower_bound(band_times.begin(), band_times.end(), lo);
                if (begin != band_times.end() && *begin < hi) return;
                level_survivors.push_back(k);
                next.push_back({static_cast<double>(k) * eta,
                                (static_cast<double>(k) + 1.0) * eta});
            });
        }
        rep.level_lengths.push_back(eta);
        rep.level_counts.push_back(level_survivors.size());
        rep.survivors.push_back(std::move(level_survivors));
        parents = std::move(next);
        if (parents.empty()) break;
    }

    // final refinement to the deepest scale, containment only
    if (L >= 2 && !parents.empty()) {
        const double eta = ladder.levels[L - 1];
        std::vector<std::uint64_t> leaves;
        for (const auto& [pa, pb] : parents)
            children_of(pa, pb, eta, [&](std::uint64_t k) { leaves.push_back(k); });
        rep.level_lengths.push_back(eta);
        rep.level_counts.push_back(leaves.size());
        rep.leaf_count = leaves.size();
        rep.survivors.push_back(std::move(leaves));
    }
    return rep;
}

// For each n in [n_lo, n_hi]: does t have a jump of size at least
// 2^(-n/(gamma-eps)) within 2^-n on BOTH sides?
inline std::vector<int> surrounded_points(const PointProcess& pp, double t, double gamma,
                                          double eps, int n_lo, int n_hi) {
    if (!(gamma - eps > 0.0))
        throw std::invalid_argument("surrounded_points: gamma - eps must be > 0");
    if (n_lo < 1 || n_lo > n_hi)
        throw std::invalid_argument("surrounded_points: bad n range");
    if (!(t >= 0.0) || !(t <= pp.horizon))
        throw std::invalid_argument("surrounded_points: t outside [0, horizon]");
    if (!(std::exp2(-static_cast<double>(n_hi) / (gamma - eps)) > pp.z_min))
        throw std::invalid_argument("surrounded_points: finest size band below truncation");

    std::vector<int> hits;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double s = std::exp2(-static_cast<double>(n) / (gamma - eps));
        const double w = std::ldexp(1.0, -n);
        auto has_big = [&](double lo, double hi) {  // any event in (lo, hi] with z >= s
            auto it = std::upper_bound(pp.events.begin(), pp.events.end(), lo,
                                       [](double v, const PoissonEvent& e) { return v < e.t; });
            for (; it != pp.events.end() && it->t <= hi; ++it)
                if (it->z >= s) return true;
            return false;
        };
        if (has_big(t - w, t) && has_big(t, t + w)) hits.push_back(n);
    }
    return hits;
}

// Compensated small-jump concentration statistic: over grid pairs s < t
// with t - s <= 2^-n, the increment of (sum of jumps with z < 2^(-n/delta))
// minus its intensity integral, scaled by 2^(n / (delta (beta_right + 2/n)))
// with beta_right the index just past t. The compensator integrates the
// sampled truncated intensity, so an empty process leaves pure drift.
// A constant index drops the 2/n slack.
struct ConcentrationReport {
    int n = 0;
    double delta = 0.0;
    double cutoff = 0.0;     // small-jump size bound
    double threshold = 0.0;  // 6 n^2
    double max_scaled = 0.0;
    double max_abs_increment = 0.0;
    std::size_t pairs_checked = 0;
    bool exceeded = false;
};

inline ConcentrationReport concentration_check(const PointProcess& pp,
                                               const BetaFunction& beta, int n, double delta,
                                               const std::vector<double>& grid,
                                               bool constant_index = false) {
    if (n < 1) throw std::invalid_argument("concentration_check: n must be >= 1");
    if (!(delta > 1.0)) throw std::invalid_argument("concentration_check: delta must be > 1");
    const double cutoff = std::exp2(-static_cast<double>(n) / delta);
    if (!(cutoff > pp.z_min))
        throw std::invalid_argument("concentration_check: band below truncation");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !(grid[i] <= pp.horizon))
            throw std::invalid_argument("concentration_check: grid point outside [0, horizon]");
        if (i > 0 && !(grid[i] >= grid[i - 1]))
            throw std::invalid_argument("concentration_check: grid must be sorted");
    }

    const JumpPath path = build_stable_like(pp, beta);
    const std::size_t E = pp.events.size();

    // raw small-jump sums, cumulative at each event
    std::vector<double> small_prefix(E + 1, 0.0);
    {
        double value = 0.0;
        for (std::size_t k = 0; k < E; ++k) {
            const double b = beta.eval(value);
            double w = 0.0;
            if (pp.events[k].z < cutoff)
                w = detail::jump_kernel(pp.events[k].z, 1.0 / b);
            small_prefix[k + 1] = small_prefix[k] + w;
            value = path.values_after[k];
        }
    }

    // compensator: per piece, rate = integral of z^(1/b) dz/z^2 over
    // [z_min, cutoff), cumulated linearly in time
    std::vector<double> comp_prefix(E + 1, 0.0);
    std::vector<double> rate(E + 1, 0.0);
    {
        double value = 0.0, start = 0.0, acc = 0.0;
        for (std::size_t k = 0; k <= E; ++k) {
            const double b = beta.eval(value);
            const double e = 1.0 / b - 1.0;
            rate[k] = (std::pow(cutoff, e) - std::pow(pp.z_min, e)) / e;
            comp_prefix[k] = acc;
            if (k < E) {
                acc += rate[k] * (pp.events[k].t - start);
                start = pp.events[k].t;
                value = path.values_after[k];
            }
        }
    }
    auto compensator_at = [&](double t) {
        const auto k = static_cast<std::size_t>(
            std::upper_bound(pp.events.begin(), pp.events.end(), t,
                             [](double v, const PoissonEvent& e) { return v < e.t; }) -
            pp.events.begin());
        const double start = k == 0 ? 0.0 : pp.events[k - 1].t;
        return comp_prefix[k] + rate[k] * (t - start);
    };
    auto small_sum_at = [&](double t) {
        const auto k = static_cast<std::size_t>(
            std::upper_bound(pp.events.begin(), pp.events.end(), t,
                             [](double v, const PoissonEvent& e) { return v < e.t; }) -
            pp.events.begin());
        return small_prefix[k];
    };

    ConcentrationReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.cutoff = cutoff;
    rep.threshold = 6.0 * static_cast<double>(n) * static_cast<double>(n);
    const double width = std::ldexp(1.0, -n);
    const double slack = constant_index ? 0.0 : 2.0 / static_cast<double>(n);

    std::vector<double> x_at(grid.size()), scale_at(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x_at[i] = small_sum_at(grid[i]) - compensator_at(grid[i]);
        const double ahead = std::min(grid[i] + width, pp.horizon);
        const double b = beta.eval(eval(path, ahead));
        scale_at[i] = std::exp2(static_cast<double>(n) / (delta * (b + slack)));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            if (grid[j] - grid[i] > width) break;
            ++rep.pairs_checked;
            const double inc = std::abs(x_at[j] - x_at[i]);
            rep.max_abs_increment = std::max(rep.max_abs_increment, inc);
            rep.max_scaled = std::max(rep.max_scaled, scale_at[j] * inc);
        }
    }
    rep.exceeded = rep.max_scaled >= rep.threshold;
    return rep;
}

}  // namespace stablelike
