#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stablelike/census.hpp"
#include "stablelike/stats.hpp"

namespace sl = stablelike;

namespace {

sl::PointProcess manual_pp(std::vector<sl::PoissonEvent> events, double horizon = 1.0,
                           double z_min = 1e-4) {
    sl::PointProcess pp;
    pp.horizon = horizon;
    pp.z_min = z_min;
    pp.seed = 0;
    pp.events = std::move(events);
    return pp;
}

}  // namespace

TEST_CASE("scale ladder: compounding exponents down to the floor", "[census]") {
    const auto ladder = sl::desk_ladder(0x1p-8, 0.1, 0x1p-20);
    REQUIRE(ladder.levels.size() == 11);
    REQUIRE(ladder.levels.front() == 0x1p-8);
    double expo = 8.0;
    for (std::size_t l = 1; l < ladder.levels.size(); ++l) {
        expo *= 1.1;
        REQUIRE(ladder.levels[l] ==
                Catch::Approx(std::exp2(-expo)).epsilon(1e-12));
        REQUIRE(ladder.levels[l] < ladder.levels[l - 1]);
    }
    REQUIRE(ladder.levels.back() <= ladder.floor);
    REQUIRE(ladder.levels[ladder.levels.size() - 2] > ladder.floor);

    REQUIRE_THROWS_AS(sl::desk_ladder(0x1p-8, 0.0, 0x1p-20), std::invalid_argument);
    REQUIRE_THROWS_AS(sl::desk_ladder(0x1p-8, 0.1, 0x1p-8), std::invalid_argument);
    REQUIRE_THROWS_AS(sl::desk_ladder(0x1p-8, 0.1, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(sl::desk_ladder(1.0, 0.1, 0x1p-20), std::invalid_argument);
    // an epsilon too small to reach the floor in 64 levels
    REQUIRE_THROWS_AS(sl::desk_ladder(0.9, 1e-9, 0.5), std::invalid_argument);
}

TEST_CASE("scale ladder: default settings give four aligned levels", "[census]") {
    const auto ladder = sl::default_desk_ladder();
    REQUIRE(ladder.levels.size() == 4);
    REQUIRE(ladder.levels[0] == 0x1p-16);
    REQUIRE(ladder.levels[1] == Catch::Approx(0x1p-20).epsilon(1e-14));
    REQUIRE(ladder.levels[2] == Catch::Approx(0x1p-25).epsilon(1e-14));
    REQUIRE(ladder.levels[3] == Catch::Approx(std::exp2(-31.25)).epsilon(1e-14));
}

TEST_CASE("double-jump census: engineered memberships", "[census]") {
    // gamma - eps = 2, n = 4: threshold 0.25, sixteen cells
    auto pp = manual_pp({{0.10, 0.30}, {0.12, 0.26}, {0.50, 0.20}, {0.90, 0.90}},
                        1.0, 0.01);
    const auto rep = sl::double_jump_limsup_census(pp, 4, 2.5, 0.5);
    REQUIRE(rep.threshold == 0.25);
    REQUIRE(rep.members == std::vector<std::uint32_t>{0, 1, 2});
    REQUIRE(rep.observed == 3);
    REQUIRE(rep.lambda == 0.5625);  // 3 * 2^-4 * (1/0.25 - 1)
    REQUIRE(rep.expected ==
            Catch::Approx(16.0 * sl::poisson_tail_ge2(0.5625)).epsilon(1e-15));

    const auto empty = sl::double_jump_limsup_census(manual_pp({}), 4, 2.5, 0.5);
    REQUIRE(empty.observed == 0);
    REQUIRE(empty.members.empty());

    // a jump at the right edge of [0,1] is outside every census cell
    const auto edge = sl::double_jump_limsup_census(
        manual_pp({{1.0, 0.9}, {1.5, 0.9}}, 2.0), 4, 2.5, 0.5);
    REQUIRE(edge.observed == 0);

    REQUIRE_THROWS_AS(sl::double_jump_limsup_census(pp, 0, 2.5, 0.5),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::double_jump_limsup_census(pp, 27, 2.5, 0.5),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::double_jump_limsup_census(pp, 4, 0.2, 0.2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::double_jump_limsup_census(manual_pp({}, 0.5), 4, 2.5, 0.5),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        sl::double_jump_limsup_census(manual_pp({}, 1.0, 0.5), 4, 2.5, 0.5),
        std::invalid_argument);
}

TEST_CASE("double-jump census: members match a window-count oracle",
          "[census][oracle]") {
    const auto pp = sl::sample_ppp(1.0, 1e-3, 271);
    const int n = 6;
    const auto rep = sl::double_jump_limsup_census(pp, n, 1.5, 0.1);
    const double width = std::ldexp(1.0, -n);
    std::vector<std::uint32_t> oracle;
    for (std::uint32_t k = 0; k < (1u << n); ++k) {
        const double lo = k == 0 ? 0.0 : (k - 1.0) * width;
        const double hi = std::min(1.0, (k + 2.0) * width);
        if (sl::count_window(pp, lo, hi, rep.threshold, 2.0) >= 2) oracle.push_back(k);
    }
    REQUIRE(rep.members == oracle);
}

TEST_CASE("double-jump census: sampled mean tracks the closed form",
          "[census][slow]") {
    const int n = 10;
    std::vector<double> observed;
    double expected = 0.0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto pp = sl::sample_ppp(1.0, 1e-3, 9000 + seed);
        const auto rep = sl::double_jump_limsup_census(pp, n, 1.5, 0.1);
        observed.push_back(static_cast<double>(rep.observed));
        expected = rep.expected;
    }
    const double mean =
        std::accumulate(observed.begin(), observed.end(), 0.0) / observed.size();
    double var = 0.0;
    for (double o : observed) var += (o - mean) * (o - mean);
    var /= (observed.size() - 1.0);
    const double se = std::sqrt(var / observed.size());
    REQUIRE(std::abs(mean - expected) <= 4.0 * se + 1e-9);
}

TEST_CASE("configuration probabilities: closed forms and underflow", "[census]") {
    const auto cp = sl::config_probabilities(0x1p-8, 0x1p-10, 1.5);
    REQUIRE(cp.half_band_mean == Catch::Approx(std::exp2(-8.0 / 3.0)).epsilon(1e-14));
    REQUIRE(cp.q == Catch::Approx(1.8103e-2).epsilon(1e-3));
    const double mean =
        3.0 * 0x1p-8 * (std::pow(0x1p-10, -1.0 / 1.5) - std::pow(0x1p-8, -1.0 / 1.5));
    REQUIRE(cp.zero_jump_mean == Catch::Approx(mean).epsilon(1e-14));
    REQUIRE(cp.p == Catch::Approx(std::exp(-mean)).epsilon(1e-14));
    REQUIRE_FALSE(cp.underflow);

    // indices below one make the half-band mean explode for small scales
    const auto uf = sl::config_probabilities(1e-16, 1e-20, 0.5);
    REQUIRE(uf.underflow);
    REQUIRE(uf.p == 0.0);
    REQUIRE(uf.q == 0.0);

    // large gamma: the half-band mean approaches the scale itself
    const auto lg = sl::config_probabilities(0x1p-8, 0x1p-10, 1e6);
    REQUIRE(lg.half_band_mean == Catch::Approx(0x1p-8).epsilon(1e-4));

    REQUIRE_THROWS_AS(sl::config_probabilities(0.5, 0.5, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(sl::config_probabilities(1.0, 0.5, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(sl::config_probabilities(0.5, 0.25, 0.0), std::invalid_argument);
}

TEST_CASE("configuration probabilities: Monte Carlo agreement", "[census][slow]") {
    const double eta = 0x1p-6;
    const double eta_next = std::exp2(-7.5);
    const auto rep = sl::config_probability_mc(eta, eta_next, 1.5, 4000, 77);
    REQUIRE(rep.windows == 4000);
    REQUIRE(std::abs(rep.freq_zero - rep.closed_form.p) <= 4.0 * rep.se_zero + 1e-3);
    REQUIRE(std::abs(rep.freq_double - rep.closed_form.q) <=
            4.0 * rep.se_double + 1e-3);
    REQUIRE_THROWS_AS(sl::config_probability_mc(eta, eta_next, 1.5, 0, 77),
                      std::invalid_argument);
}

TEST_CASE("zero-jump family: engineered occupancy", "[census]") {
    const auto ladder = sl::desk_ladder(0x1p-4, 0.5, 0x1p-13);
    REQUIRE(ladder.levels.size() == 4);
    const double gamma = 1.5;

    const auto all = sl::zero_jump_family(manual_pp({}), ladder, 0, gamma);
    REQUIRE(all.size() == 16);

    // one band jump in cell 5 kills cells 4, 5, 6
    const auto one =
        sl::zero_jump_family(manual_pp({{5.5 * 0x1p-4, 0.10}}), ladder, 0, gamma);
    REQUIRE(one.size() == 13);
    for (std::uint32_t k : one) REQUIRE((k < 4 || k > 6));

    // a jump below the size band is invisible
    const auto below =
        sl::zero_jump_family(manual_pp({{5.5 * 0x1p-4, 0.05}}), ladder, 0, gamma);
    REQUIRE(below.size() == 16);

    // boundary: cell 0 occupancy has no left neighbor to kill
    const auto edge =
        sl::zero_jump_family(manual_pp({{0.5 * 0x1p-4, 0.10}}), ladder, 0, gamma);
    REQUIRE(edge.size() == 14);
    REQUIRE(edge.front() == 2);

    REQUIRE_THROWS_AS(sl::zero_jump_family(manual_pp({}), ladder, 3, gamma),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::zero_jump_family(manual_pp({}), ladder, 0, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::zero_jump_family(manual_pp({}, 0.5), ladder, 0, gamma),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::zero_jump_family(manual_pp({}, 1.0, 0.1), ladder, 0, gamma),
                      std::invalid_argument);
}

TEST_CASE("double-jump family: exactly-one flanks", "[census]") {
    const auto ladder = sl::desk_ladder(0x1p-4, 0.5, 0x1p-13);
    const double gamma = 1.5;
    const double z = 0.10;  // inside [band_hi / 2, band_hi) at the top level

    const auto hit = sl::double_jump_family(
        manual_pp({{3.5 * 0x1p-4, z}, {7.5 * 0x1p-4, z}}), ladder, 0, gamma);
    REQUIRE(std::count(hit.begin(), hit.end(), 5u) == 1);

    // doubling a flank breaks the exactly-one requirement
    const auto twice = sl::double_jump_family(
        manual_pp({{3.4 * 0x1p-4, z}, {3.6 * 0x1p-4, z}, {7.5 * 0x1p-4, z}}), ladder, 0,
        gamma);
    REQUIRE(std::count(twice.begin(), twice.end(), 5u) == 0);

    const auto none = sl::double_jump_family(manual_pp({}), ladder, 0, gamma);
    REQUIRE(none.empty());

    // second neighbors must exist inside [0,1]
    for (const auto& fam : {hit, twice})
        for (std::uint32_t k : fam) {
            REQUIRE(k >= 2);
            REQUIRE(k + 2 < 16);
        }

    REQUIRE_THROWS_AS(sl::double_jump_family(manual_pp({}), ladder, 9, gamma),
                      std::invalid_argument);
}

TEST_CASE("survivor tree: complete on an empty process", "[census]") {
    const auto ladder = sl::desk_ladder(0x1p-4, 0.5, 0x1p-13);
    const auto pp = manual_pp({});
    const auto rep = sl::grow_tree(pp, 0.0, 0.25, ladder, 1.5);
    REQUIRE(rep.level_lengths.size() == 3);
    REQUIRE(rep.level_lengths[0] == ladder.levels[1]);
    REQUIRE(rep.level_lengths[1] == ladder.levels[2]);
    REQUIRE(rep.level_lengths[2] == ladder.levels[3]);
    REQUIRE(rep.level_counts[0] == 16);   // 0.25 / 2^-6
    REQUIRE(rep.level_counts[1] == 128);  // each survivor splits into 8
    REQUIRE(rep.leaf_count == rep.level_counts[2]);
    // each level-2 survivor of length 2^-9 holds 21 or 22 complete cells of
    // the irrational deepest scale 2^-13.5 (window/cell ratio 2^4.5 = 22.6)
    REQUIRE(rep.leaf_count >= 128 * 21);
    REQUIRE(rep.leaf_count <= 128 * 22);
    // determinism
    const auto again = sl::grow_tree(pp, 0.0, 0.25, ladder, 1.5);
    REQUIRE(again.survivors == rep.survivors);
}

TEST_CASE("survivor tree: matches a per-interval rescan and nests", "[census][oracle]") {
    const auto ladder = sl::desk_ladder(0x1p-4, 0.5, 0x1p-13);
    const double gamma = 3.0;  // wide enough bands to let branches survive deep
    const auto pp = sl::sample_ppp(1.0, 1e-4, 42);
    const auto rep = sl::grow_tree(pp, 0.0, 0.5, ladder, gamma);
    REQUIRE_FALSE(rep.survivors.empty());

    // oracle: re-derive each tested level by scanning all events per interval
    std::vector<std::pair<double, double>> parents{{0.0, 0.5}};
    for (std::size_t l = 1; l + 1 < ladder.levels.size() && !parents.empty(); ++l) {
        REQUIRE(l - 1 < rep.survivors.size());
        const double eta = ladder.levels[l];
        const double band_lo = std::pow(ladder.levels[l + 1], 1.0 / gamma);
        const double band_hi = std::pow(eta, 1.0 / gamma);
        std::vector<std::uint64_t> level;
        std::vector<std::pair<double, double>> next;
        for (const auto& [pa, pb] : parents) {
            auto k = static_cast<std::uint64_t>(std::ceil(pa / eta));
            while (static_cast<double>(k) * eta < pa) ++k;
            while (k > 0 && (static_cast<double>(k) - 1.0) * eta >= pa) --k;
            for (; (static_cast<double>(k) + 1.0) * eta <= pb; ++k) {
                const double lo = (static_cast<double>(k) - 1.0) * eta;
                const double hi = (static_cast<double>(k) + 2.0) * eta;
                bool clean = true;
                for (const auto& e : pp.events)
                    if (e.z >= band_lo && e.z < band_hi && e.t >= lo && e.t < hi) {
                        clean = false;
                        break;
                    }
                if (clean) {
                    level.push_back(k);
                    next.push_back({static_cast<double>(k) * eta,
                                    (static_cast<double>(k) + 1.0) * eta});
                }
            }
        }
        REQUIRE(rep.survivors[l - 1] == level);
        parents = std::move(next);
    }

    // nesting: every survivor sits inside one survivor of the level above
    for (std::size_t i = 1; i < rep.survivors.size(); ++i) {
        const double eta = rep.level_lengths[i];
        const double eta_up = rep.level_lengths[i - 1];
        for (std::uint64_t k : rep.survivors[i]) {
            const double lo = static_cast<double>(k) * eta;
            const double hi = (static_cast<double>(k) + 1.0) * eta;
            std::size_t inside = 0;
            for (std::uint64_t ku : rep.survivors[i - 1]) {
                const double ulo = static_cast<double>(ku) * eta_up;
                const double uhi = (static_cast<double>(ku) + 1.0) * eta_up;
                if (lo >= ulo && hi <= uhi) ++inside;
            }
            REQUIRE(inside == 1);
        }
    }

    // if the tree reached the leaf refinement it should not be empty here
    if (rep.survivors.size() == ladder.levels.size() - 1)
        REQUIRE(rep.leaf_count > 0);

    REQUIRE_THROWS_AS(sl::grow_tree(pp, -0.1, 0.5, ladder, gamma),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::grow_tree(pp, 0.5, 0.5, ladder, gamma),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::grow_tree(pp, 0.0, 1.5, ladder, gamma),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::grow_tree(pp, 0.0, 0.5, ladder, 0.0),
                      std::invalid_argument);
    sl::ScaleLadder stub;
    stub.levels = {0.25};
    REQUIRE_THROWS_AS(sl::grow_tree(pp, 0.0, 0.5, stub, gamma),
                      std::invalid_argument);
    const auto coarse = manual_pp({}, 1.0, 0.1);
    REQUIRE_THROWS_AS(sl::grow_tree(coarse, 0.0, 0.5, ladder, gamma),
                      std::invalid_argument);
}

TEST_CASE("surrounded points: twin jumps and size thresholds", "[census]") {
    const double gamma = 1.5, eps = 0.25;  // gamma - eps = 1.25
    auto pp = manual_pp({{0.497, 0.9}, {0.503, 0.9}}, 1.0, 0.005);
    REQUIRE(sl::surrounded_points(pp, 0.5, gamma, eps, 1, 8) ==
            std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
    REQUIRE(sl::surrounded_points(pp, 0.1, gamma, eps, 1, 8).empty());

    // smaller jumps only clear the size threshold at fine scales
    auto small = manual_pp({{0.497, 0x1p-6}, {0.503, 0x1p-6}}, 1.0, 0.005);
    REQUIRE(sl::surrounded_points(small, 0.5, gamma, eps, 1, 8) ==
            std::vector<int>{8});

    REQUIRE_THROWS_AS(sl::surrounded_points(pp, 0.5, 0.2, 0.25, 1, 8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::surrounded_points(pp, 0.5, gamma, eps, 0, 8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::surrounded_points(pp, 0.5, gamma, eps, 5, 4),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::surrounded_points(pp, 1.5, gamma, eps, 1, 8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::surrounded_points(pp, 0.5, gamma, eps, 1, 26),
                      std::invalid_argument);
}

TEST_CASE("concentration statistic: pure drift on an empty process", "[census]") {
    const auto pp = manual_pp({}, 1.0, 1e-3);
    const auto beta = sl::BetaFunction::constant(0.5);
    const int n = 4;
    const double cutoff = 0x1p-2;
    const double rate = cutoff - 1e-3;  // exponent 1/beta - 1 = 1 integrates to z
    const std::vector<double> grid{0.0, 0x1p-4, 2.0 * 0x1p-4, 1.0};

    const auto rep = sl::concentration_check(pp, beta, n, 2.0, grid);
    REQUIRE(rep.cutoff == cutoff);
    REQUIRE(rep.threshold == 96.0);
    REQUIRE(rep.pairs_checked == 2);  // only adjacent points sit within 2^-n
    REQUIRE(rep.max_abs_increment == Catch::Approx(rate * 0x1p-4).epsilon(1e-12));
    REQUIRE(rep.max_scaled ==
            Catch::Approx(std::exp2(4.0 / (2.0 * 1.0)) * rep.max_abs_increment)
                .epsilon(1e-12));
    REQUIRE_FALSE(rep.exceeded);

    // a constant index drops the slack in the scaling exponent
    const auto tight = sl::concentration_check(pp, beta, n, 2.0, grid, true);
    REQUIRE(tight.max_scaled ==
            Catch::Approx(std::exp2(4.0) * rep.max_abs_increment).epsilon(1e-12));

    REQUIRE_THROWS_AS(sl::concentration_check(pp, beta, 0, 2.0, grid),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::concentration_check(pp, beta, n, 1.0, grid),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        sl::concentration_check(manual_pp({}, 1.0, 0.5), beta, n, 2.0, grid),
        std::invalid_argument);
    REQUIRE_THROWS_AS(sl::concentration_check(pp, beta, n, 2.0, {0.5, 0.2}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::concentration_check(pp, beta, n, 2.0, {0.5, 1.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sl::concentration_check(pp, beta, n, 2.0, {-0.5}),
                      std::invalid_argument);
}

TEST_CASE("concentration statistic: sampled path stays in bounds", "[census]") {
    const auto pp = sl::sample_ppp(1.0, 1e-4, 3);
    const sl::BetaFunction beta(0.05, {{0.0, 0.3}, {1.0, 0.7}});
    std::vector<double> grid;
    for (int i = 0; i <= 256; ++i) grid.push_back(i / 256.0);
    const auto rep = sl::concentration_check(pp, beta, 6, 2.0, grid);
    REQUIRE(rep.pairs_checked > 0);
    REQUIRE(rep.max_scaled > 0.0);
    REQUIRE_FALSE(rep.exceeded);
}
