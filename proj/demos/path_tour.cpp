#include <cstdio>

#include "stablelike/stablelike.hpp"

// Tour of one simulated path: sample the driving events, build the three
// coupled processes, and print where the state, the occupation measure, and
// the coupling defect end up.

namespace sl = stablelike;

int main() {
    const double horizon = 1.0;
    const double z_min = 1e-5;
    const sl::BetaFunction beta(0.05, {{0.0, 0.3}, {2.0, 0.7}});

    const sl::PointProcess pp = sl::sample_ppp(horizon, z_min, 42);
    std::printf("events: %zu (mean %.0f)\n", pp.events.size(),
                horizon * (1.0 / z_min - 1.0));

    const sl::JumpPath path = sl::build_stable_like(pp, beta);
    std::printf("final state: %.6f   index there: %.4f\n", sl::eval(path, horizon),
                beta.eval(sl::eval(path, horizon)));

    const sl::OccupationMeasure om = sl::occupation_measure(path);
    std::printf("occupation atoms: %zu   total mass: %.12f\n", om.levels.size(), om.total);
    std::printf("mass in (0, 0.1): %.6f\n", sl::mass_interval(om, 0.0, 0.1));

    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(horizon * i / 200.0);
    const sl::CouplingReport rep = sl::check_coupling(pp, beta, grid);
    std::printf("coupling pairs checked: %zu   violations: %zu   worst defect: %.3g\n",
                rep.pairs_checked, rep.violation_count, rep.max_relative_defect);

    const sl::LocalDimEstimate est = sl::local_dim(om, sl::eval(path, 0.5), 1e-5, 1e-2);
    std::printf("local dim at midpoint state: lower %.3f  upper %.3f  (%zu usable scales)\n",
                est.lower_est, est.upper_est, est.usable_count);
    return 0;
}
