#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

// Index maps fed to the path builders.
//
// BetaFunction is the state-dependent stability index: piecewise linear in
// the state variable, clamped to its end values outside the knot range, with
// all values inside [epsilon0, 1 - epsilon0]. StepFunction is a cadlag step
// map of time used for the time-changed subordinator.

namespace stablelike {

class BetaFunction {
  public:
    BetaFunction(double epsilon0, std::vector<std::pair<double, double>> knots)
        : epsilon0_(epsilon0), knots_(std::move(knots)) {
        if (!(epsilon0_ > 0.0) || !(epsilon0_ < 0.5))
            throw std::invalid_argument("BetaFunction: epsilon0 must lie in (0, 1/2)");
        if (knots_.empty())
            throw std::invalid_argument("BetaFunction: at least one knot required");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            const double b = knots_[i].second;
            if (!(b >= epsilon0_) || !(b <= 1.0 - epsilon0_))
                throw std::invalid_argument(
                    "BetaFunction: knot value outside [epsilon0, 1 - epsilon0]");
            if (i > 0) {
                if (!(knots_[i].first > knots_[i - 1].first))
                    throw std::invalid_argument(
                        "BetaFunction: knot positions must be strictly increasing");
                if (!(b > knots_[i - 1].second))
                    throw std::invalid_argument(
                        "BetaFunction: knot values must be strictly increasing");
            }
        }
    }

    static BetaFunction constant(double alpha, double epsilon0 = 0.0) {
        if (epsilon0 == 0.0) epsilon0 = std::min(alpha, 1.0 - alpha) / 2.0;
        return BetaFunction(epsilon0, {{0.0, alpha}});
    }

    double epsilon0() const { return epsilon0_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    bool is_constant() const { return knots_.size() == 1; }

    double eval(double x) const {
        if (x <= knots_.front().first) return knots_.front().second;
        if (x >= knots_.back().first) return knots_.back().second;
        std::size_t lo = 0, hi = knots_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (knots_[mid].first <= x) lo = mid;
            else hi = mid;
        }
        const auto& [x0, b0] = knots_[lo];
        const auto& [x1, b1] = knots_[hi];
        return b0 + (b1 - b0) * ((x - x0) / (x1 - x0));
    }

    // Exact Lipschitz constant of the interpolant: max slope between knots.
    double lipschitz() const {
        double m = 0.0;
        for (std::size_t i = 1; i < knots_.size(); ++i)
            m = std::max(m, (knots_[i].second - knots_[i - 1].second) /
                                (knots_[i].first - knots_[i - 1].first));
        return m;
    }

    double min_value() const { return knots_.front().second; }
    double max_value() const { return knots_.back().second; }

  private:
    double epsilon0_;
    std::vector<std::pair<double, double>> knots_;  // (state, index), both increasing
};

// Expected mass lost to the z_min truncation over one horizon, maximized
// over the admissible index range: horizon * z_min^(1/b - 1) / (1/b - 1)
// at b = 1 - epsilon0. Lets callers size z_min against a target tolerance.
inline double truncation_bias_bound(double horizon, double z_min, const BetaFunction& beta) {
    const double b = 1.0 - beta.epsilon0();
    const double e = 1.0 / b - 1.0;
    return horizon * std::pow(z_min, e) / e;
}

// Cadlag step map of time: value(t) = values[k] for the largest times[k] <= t.
// First knot must sit at t = 0 so the map is total on [0, horizon].
class StepFunction {
  public:
    StepFunction(std::vector<double> times, std::vector<double> values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.empty() || times_.size() != values_.size())
            throw std::invalid_argument("StepFunction: need equal nonzero knot counts");
        if (times_.front() != 0.0)
            throw std::invalid_argument("StepFunction: first knot must be at t = 0");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i] > times_[i - 1]))
                throw std::invalid_argument("StepFunction: times must be strictly increasing");
        for (double v : values_)
            if (!(v > 0.0) || !(v < 1.0))
                throw std::invalid_argument("StepFunction: values must lie in (0,1)");
    }

    bool non_decreasing() const {
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] < values_[i - 1]) return false;
        return true;
    }

    double eval(double t) const {
        std::size_t lo = 0, hi = times_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (times_[mid] <= t) lo = mid;
            else hi = mid;
        }
        return values_[lo];
    }

    // Left limit; at t = 0 there is no earlier piece, so the first value.
    double eval_left(double t) const {
        std::size_t lo = 0, hi = times_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (times_[mid] < t) lo = mid;
            else hi = mid;
        }
        return values_[lo];
    }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> times_;
    std::vector<double> values_;
};

}  // namespace stablelike
