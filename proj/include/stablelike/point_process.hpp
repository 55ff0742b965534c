#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stablelike/rng.hpp"

// Poisson point process on [0,horizon] x (z_min, 1] with intensity
// dt * dz / z^2. This is the single source of randomness for every jump
// path in the library: truncation at z_min is always explicit.

namespace stablelike {

struct PoissonEvent {
    double t;
    double z;
};

struct PointProcess {
    double horizon = 0.0;
    double z_min = 0.0;
    std::uint64_t seed = 0;
    std::vector<PoissonEvent> events;  // sorted by t, t pairwise distinct
};

// Inverse CDF of the size marginal F(z) = (1/z_min - 1/z) / (1/z_min - 1).
// Fed with u in (0,1] it lands in (z_min, 1]: u = 1 hits z = 1 exactly and
// z_min itself is never produced.
inline double invcdf_size(double u, double inv_zmin) {
    return 1.0 / (inv_zmin - u * (inv_zmin - 1.0));
}

// One event at a time, in time order, without materializing the list.
// Exponential spacings; sequential on purpose so the sequence is a pure
// function of the seed independent of vectorization flags.
class EventStream {
  public:
    EventStream(double horizon, double z_min, std::uint64_t seed)
        : rng_(seed), horizon_(horizon), inv_zmin_(1.0 / z_min),
          inv_rate_(1.0 / (1.0 / z_min - 1.0)) {
        if (!(z_min > 0.0) || !(z_min < 1.0))
            throw std::invalid_argument("event stream: z_min must lie in (0,1)");
        if (!(horizon >= 0.0) || !std::isfinite(horizon))
            throw std::invalid_argument("event stream: horizon must be finite and >= 0");
    }

    bool next(PoissonEvent& out) {
        t_ += -std::log(rng_.u01_pos()) * inv_rate_;
        if (t_ > horizon_) return false;
        // keep event times pairwise distinct and strictly positive even when
        // a spacing rounds to zero
        double tt = t_;
        if (tt <= prev_) tt = std::nextafter(prev_, horizon_ + 1.0);
        prev_ = tt;
        out = {tt, invcdf_size(rng_.u01_pos(), inv_zmin_)};
        return true;
    }

  private:
    Rng rng_;
    double horizon_;
    double inv_zmin_;
    double inv_rate_;
    double t_ = 0.0;
    double prev_ = 0.0;
};

inline PointProcess sample_ppp(double horizon, double z_min, std::uint64_t seed) {
    if (!(z_min > 0.0) || !(z_min < 1.0))
        throw std::invalid_argument("sample_ppp: z_min must lie in (0,1)");
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("sample_ppp: horizon must be finite and >= 0");

    PointProcess pp;
    pp.horizon = horizon;
    pp.z_min = z_min;
    pp.seed = seed;
    if (horizon == 0.0) return pp;

    const double mean = horizon * (1.0 / z_min - 1.0);
    pp.events.reserve(static_cast<std::size_t>(mean + 6.0 * std::sqrt(mean) + 16.0));

    EventStream stream(horizon, z_min, seed);
    PoissonEvent e;
    while (stream.next(e)) pp.events.push_back(e);
    return pp;
}

// Count of events in [t_lo, t_hi) x [z_lo, z_hi).
inline std::size_t count_window(const PointProcess& pp, double t_lo, double t_hi,
                                double z_lo, double z_hi) {
    if (!(t_lo <= t_hi) || !(z_lo <= z_hi))
        throw std::invalid_argument("count_window: empty/inverted window bounds");
    auto lo = std::lower_bound(pp.events.begin(), pp.events.end(), t_lo,
                               [](const PoissonEvent& e, double v) { return e.t < v; });
    std::size_t n = 0;
    for (auto it = lo; it != pp.events.end() && it->t < t_hi; ++it)
        if (it->z >= z_lo && it->z < z_hi) ++n;
    return n;
}

// Dyadic size band index: z in [2^-(j+1), 2^-j) has band j; z = 1 gets 0.
inline int band_of(double z) {
    int j = static_cast<int>(std::floor(-std::log2(z)));
    // guard fp edges so band boundaries classify consistently
    if (std::ldexp(1.0, -j - 1) > z) ++j;
    else if (j > 0 && std::ldexp(1.0, -j) <= z) --j;
    return j < 0 ? 0 : j;
}

// Size/position census of one realization against the dyadic grid at
// resolution 2^-J: band populations, coarse coverage per interval, and the
// observed slack exponents. The slacks are outputs of the census, not
// tuning inputs.
struct BandCensusReport {
    int J = 0;
    std::vector<std::size_t> band_counts;    // index j, up to band of z_min
    std::size_t count_at_J = 0;              // #P_J
    double observed_eps_band = 0.0;          // |log2(#P_J)/J - 1|
    bool some_interval_empty = false;        // no jump at all in an interval
    int coarse_cutoff_band = 0;              // smallest cutoff covering all intervals
    double observed_eta = 0.0;               // max(0, cutoff/J - 1)
    std::size_t max_coarse_per_interval = 0; // jumps with band <= cutoff, worst interval
    double observed_eps_interval = 0.0;      // log2(max_coarse)/J
    std::size_t max_verybig_per_interval = 0;  // jumps with band <= J/3, worst interval
    std::vector<std::size_t> fine_band_max;    // per band >= cutoff: worst interval count
    std::vector<double> fine_band_eps;         // implied per-band slack
};

inline BandCensusReport band_census(const PointProcess& pp, int J) {
    if (J < 1) throw std::invalid_argument("band_census: J must be >= 1");
    const double dy = std::ldexp(1.0, -J);
    if (!(dy / 2.0 >= pp.z_min))
        throw std::invalid_argument("band_census: 2^-(J+1) below z_min truncation");
    const std::size_t n_int = static_cast<std::size_t>(std::floor(pp.horizon * std::ldexp(1.0, J)));
    if (n_int == 0) throw std::invalid_argument("band_census: horizon shorter than 2^-J");

    BandCensusReport r;
    r.J = J;
    const int j_max = band_of(pp.z_min);
    r.band_counts.assign(static_cast<std::size_t>(j_max) + 1, 0);

    std::vector<int> min_band(n_int, j_max + 1);
    std::vector<std::vector<int>> interval_bands(n_int);
    for (const auto& e : pp.events) {
        const int j = std::min(band_of(e.z), j_max);
        r.band_counts[static_cast<std::size_t>(j)]++;
        const auto k = static_cast<std::size_t>(e.t * std::ldexp(1.0, J));
        if (k >= n_int) continue;  // tail beyond the last whole interval
        min_band[k] = std::min(min_band[k], j);
        interval_bands[k].push_back(j);
    }

    r.count_at_J = J <= j_max ? r.band_counts[static_cast<std::size_t>(J)] : 0;
    if (r.count_at_J > 0)
        r.observed_eps_band = std::abs(std::log2(static_cast<double>(r.count_at_J)) / J - 1.0);

    int cutoff = 0;
    for (std::size_t k = 0; k < n_int; ++k) {
        if (min_band[k] > j_max) r.some_interval_empty = true;
        else cutoff = std::max(cutoff, min_band[k]);
    }
    r.coarse_cutoff_band = cutoff;
    r.observed_eta = std::max(0.0, static_cast<double>(cutoff) / J - 1.0);

    const int verybig_cut = J / 3;
    std::vector<std::size_t> fine_max(static_cast<std::size_t>(j_max) + 1, 0);
    for (std::size_t k = 0; k < n_int; ++k) {
        std::size_t coarse = 0, verybig = 0;
        std::vector<std::size_t> fine(static_cast<std::size_t>(j_max) + 1, 0);
        for (int j : interval_bands[k]) {
            if (j <= cutoff) ++coarse;
            if (j <= verybig_cut) ++verybig;
            if (j > cutoff) fine[static_cast<std::size_t>(j)]++;
        }
        r.max_coarse_per_interval = std::max(r.max_coarse_per_interval, coarse);
        r.max_verybig_per_interval = std::max(r.max_verybig_per_interval, verybig);
        for (std::size_t j = 0; j <= static_cast<std::size_t>(j_max); ++j)
            fine_max[j] = std::max(fine_max[j], fine[j]);
    }
    if (r.max_coarse_per_interval > 0)
        r.observed_eps_interval =
            std::log2(static_cast<double>(r.max_coarse_per_interval)) / J;

    for (int j = cutoff + 1; j <= j_max; ++j) {
        const std::size_t c = fine_max[static_cast<std::size_t>(j)];
        r.fine_band_max.push_back(c);
        // c <= 2^(j(1+eps)) * 2^-J  =>  eps = (log2 c + J)/j - 1
        r.fine_band_eps.push_back(
            c == 0 ? 0.0
                   : std::max(0.0, (std::log2(static_cast<double>(c)) + J) / j - 1.0));
    }
    return r;
}

}  // namespace stablelike
