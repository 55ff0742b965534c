#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Small statistics toolbox for the experiment layer: medians, least
// squares, distribution tests. Everything works on plain vectors and is
// deterministic given its inputs.

namespace stablelike {

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

struct LeastSquaresFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

inline LeastSquaresFit least_squares(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("least_squares: need equal nonzero sizes");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LeastSquaresFit fit;
    if (sxx == 0.0) {
        fit.intercept = my;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            sse += r * r;
        }
        fit.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
    }
    return fit;
}

// P(Poisson(lambda) >= 2), computed without cancellation for small lambda.
inline double poisson_tail_ge2(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_tail_ge2: lambda < 0");
    if (lambda < 1e-4) {
        // 1 - e^-l (1+l) = l^2/2 - l^3/3 + l^4/8 - ...
        return lambda * lambda * (0.5 - lambda / 3.0 + lambda * lambda / 8.0);
    }
    return -std::expm1(-lambda) - lambda * std::exp(-lambda);
}

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
template <typename Cdf>
inline double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

namespace detail {

// average ranks (1-based) with ties shared
inline std::vector<double> ranks_of(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        i = j + 1;
    }
    return rank;
}

}  // namespace detail

// One-sided Mann-Whitney rank test with tie correction: positive z means
// xs tends to exceed ys; z > 2.326 rejects at the 1% level.
inline double mann_whitney_z(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty())
        throw std::invalid_argument("mann_whitney_z: empty group");
    std::vector<double> pooled(xs);
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const std::vector<double> rank = detail::ranks_of(pooled);
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    const double n = n1 + n2;
    double r1 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) r1 += rank[i];
    const double u = r1 - n1 * (n1 + 1.0) / 2.0;
    const double mean_u = n1 * n2 / 2.0;

    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double var_u =
        n1 * n2 / (n * (n - 1.0)) * ((n * n * n - n) / 12.0 - tie_term / 12.0);
    if (!(var_u > 0.0)) return 0.0;
    return (u - mean_u) / std::sqrt(var_u);
}

// Spearman rank correlation with a normal-approximation z value.
struct SpearmanResult {
    double rho = 0.0;
    double z = 0.0;
};

inline SpearmanResult spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("spearman: need matched samples of size >= 3");
    const std::vector<double> rx = detail::ranks_of(xs);
    const std::vector<double> ry = detail::ranks_of(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
        sxy += (rx[i] - mx) * (ry[i] - my);
    }
    SpearmanResult res;
    if (sxx > 0.0 && syy > 0.0) {
        res.rho = sxy / std::sqrt(sxx * syy);
        res.z = res.rho * std::sqrt(n - 1.0);
    }
    return res;
}

}  // namespace stablelike
