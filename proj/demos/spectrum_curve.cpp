#include <cstdio>

#include "stablelike/stablelike.hpp"

// Spectrum envelope of a constant-index path: prints the (h, value) curve
// alpha (2 alpha / h - 1) on [alpha, 2 alpha) and the census expectations
// for the default ladder, the plot-ready counterpart of the CLI's
// `spectrum` and `census` subcommands.

namespace sl = stablelike;

int main() {
    const double alpha = 0.6;
    sl::IndexSet attained;
    attained.components.push_back({alpha, alpha});

    std::printf("h,space_value,time_value\n");
    for (int i = 1; i <= 28; ++i) {
        const double h = 0.05 * i;
        const sl::SpectrumValue s = sl::spectrum_envelope(h, attained, sl::SpectrumMode::space);
        const sl::SpectrumValue t = sl::spectrum_envelope(h, attained, sl::SpectrumMode::time);
        std::printf("%.2f,%s,%s\n", h, s.value.neg_inf ? "-inf" : sl::fmt_g17(s.value.value).c_str(),
                    t.value.neg_inf ? "-inf" : sl::fmt_g17(t.value.value).c_str());
    }

    const sl::ScaleLadder ladder = sl::default_desk_ladder();
    std::printf("\ndefault ladder levels:");
    for (double eta : ladder.levels) std::printf(" %.3g", eta);
    std::printf("\n");
    for (std::size_t l = 0; l + 1 < ladder.levels.size(); ++l) {
        const auto cp = sl::config_probabilities(ladder.levels[l], ladder.levels[l + 1], 1.8);
        std::printf("level %zu: zero-jump p = %.4f   double-jump q = %.3g\n", l, cp.p, cp.q);
    }
    return 0;
}
