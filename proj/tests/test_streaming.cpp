#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "stablelike/estimators.hpp"
#include "stablelike/streaming.hpp"

namespace sl = stablelike;

namespace {

// first passage of an increasing path at or above r, capped by its horizon
std::pair<double, std::size_t> first_passage(const sl::JumpPath& path, double r) {
    for (std::size_t k = 0; k < path.values_after.size(); ++k)
        if (path.values_after[k] >= r) return {path.jump_times[k], k};
    return {path.horizon, path.values_after.size()};
}

}  // namespace

TEST_CASE("streamed range boxes: bitwise equal to the materialized image",
          "[streaming][oracle]") {
    struct Setup {
        std::uint64_t seed;
        sl::BetaFunction beta;
    };
    const std::vector<Setup> setups{
        {11, sl::BetaFunction::constant(0.5)},
        {12, sl::BetaFunction(0.05, {{0.0, 0.35}, {1.0, 0.75}})},
    };
    for (const auto& s : setups) {
        const double horizon = 1.0, z_min = 1e-4;
        const auto rep = sl::stream_range_box_counts(horizon, z_min, s.seed, s.beta, 4, 12);

        const auto pp = sl::sample_ppp(horizon, z_min, s.seed);
        const auto path = sl::build_stable_like(pp, s.beta);
        const auto box = sl::box_dimension(sl::image_values(path, 0.0, horizon), 4, 12);

        REQUIRE(rep.counts == box.counts);
        REQUIRE(rep.slope == box.slope);
        REQUIRE(rep.slope_se == box.slope_se);
        REQUIRE(rep.event_count == pp.events.size());
        REQUIRE(rep.final_value == sl::eval(path, horizon));
        for (std::size_t i = 0; i < rep.counts.size(); ++i)
            REQUIRE(rep.log2_counts[i] ==
                    std::log2(static_cast<double>(rep.counts[i])));
    }

    const auto beta = sl::BetaFunction::constant(0.5);
    REQUIRE_THROWS_AS(sl::stream_range_box_counts(1.0, 1e-4, 1, beta, -1, 8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::stream_range_box_counts(1.0, 1e-4, 1, beta, 9, 8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::stream_range_box_counts(1.0, 1e-4, 1, beta, 0, 63),
                      std::invalid_argument);
}

TEST_CASE("typical point masses: first passages of the two half-paths",
          "[streaming][oracle]") {
    const double u = 0.4, horizon = 1.0, alpha = 0.5, z_min = 1e-3;
    const std::uint64_t seed = 5;
    const std::vector<double> radii{0.3, 0.1, 0.03, 0.01, 0.003};
    const auto out = sl::typical_point_masses(u, horizon, alpha, z_min, seed, radii);

    const auto fwd = sl::build_subordinator(
        sl::sample_ppp(horizon - u, z_min, sl::seed_for_trial(seed, 0)), alpha);
    const auto bwd = sl::build_subordinator(
        sl::sample_ppp(u, z_min, sl::seed_for_trial(seed, 1)), alpha);

    REQUIRE(out.radii == radii);
    REQUIRE(out.masses.size() == radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const auto [ft, fa] = first_passage(fwd, radii[i]);
        const auto [bt, ba] = first_passage(bwd, radii[i]);
        REQUIRE(out.masses[i] == ft + bt);
        REQUIRE(out.atoms[i] == fa + ba + 1);
    }
    for (std::size_t i = 1; i < radii.size(); ++i)
        REQUIRE(out.masses[i] <= out.masses[i - 1]);
    REQUIRE(out.masses.front() <= horizon);
    for (std::size_t a : out.atoms) REQUIRE(a >= 1);
    // a side is capped exactly when its half-path never climbs above the
    // largest radius before its own horizon
    REQUIRE(out.forward_capped ==
            (first_passage(fwd, radii.front()).second == fwd.values_after.size()));
    REQUIRE(out.backward_capped ==
            (first_passage(bwd, radii.front()).second == bwd.values_after.size()));

    // a radius beyond the total climb is capped by both endpoints
    const auto capped = sl::typical_point_masses(u, horizon, alpha, z_min, seed, {5.0});
    REQUIRE(capped.forward_capped);
    REQUIRE(capped.backward_capped);
    REQUIRE(capped.masses[0] == horizon);
    REQUIRE(capped.atoms[0] ==
            fwd.values_after.size() + bwd.values_after.size() + 1);
}

TEST_CASE("typical point masses: input validation", "[streaming]") {
    const std::vector<double> radii{0.1, 0.01};
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.0, 1.0, 0.5, 1e-3, 1, radii),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(1.0, 1.0, 0.5, 1e-3, 1, radii),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.5, 1.0, 0.0, 1e-3, 1, radii),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.5, 1.0, 1.0, 1e-3, 1, radii),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.5, 1.0, 0.5, 1e-3, 1, {}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.5, 1.0, 0.5, 1e-3, 1, {0.01, 0.1}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::typical_point_masses(0.5, 1.0, 0.5, 1e-3, 1, {0.1, 0.0}),
                      std::invalid_argument);
}
