#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablelike/beta_function.hpp"
#include "stablelike/census.hpp"
#include "stablelike/estimators.hpp"
#include "stablelike/jump_path.hpp"
#include "stablelike/occupation.hpp"
#include "stablelike/point_process.hpp"
#include "stablelike/spectrum.hpp"
#include "stablelike/streaming.hpp"

// Serialization: CSV for tabular path/measure/spectrum data, JSON for
// reports and configs. Numbers print with 17 significant digits so a file
// round-trips the exact double. Minus infinity is the literal "-inf" in CSV
// and a null value with an explicit flag in JSON, never a float sentinel.

namespace stablelike {

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string dim_csv(const DimValue& d) {
    return d.neg_inf ? std::string("-inf") : fmt_g17(d.value);
}

inline nlohmann::json dim_json(const DimValue& d) {
    if (d.neg_inf) return {{"value", nullptr}, {"neg_inf", true}};
    return {{"value", d.value}, {"neg_inf", false}};
}

inline const char* spectrum_tag_name(SpectrumCase tag) {
    switch (tag) {
        case SpectrumCase::regular: return "regular";
        case SpectrumCase::empty_admissible: return "empty_admissible";
        case SpectrumCase::exceptional_case1: return "exceptional_case1";
        case SpectrumCase::exceptional_case2: return "exceptional_case2";
        case SpectrumCase::exceptional_case3: return "exceptional_case3";
    }
    return "unknown";
}

namespace detail {

inline std::ofstream open_out(const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file);
    return out;
}

}  // namespace detail

inline void write_path_csv(const JumpPath& path, const std::string& file) {
    auto out = detail::open_out(file);
    out << "t,value_after\n0,0\n";
    for (std::size_t k = 0; k < path.jump_times.size(); ++k)
        out << fmt_g17(path.jump_times[k]) << ',' << fmt_g17(path.values_after[k]) << '\n';
    if (!out) throw std::runtime_error("short write on " + file);
}

inline nlohmann::json beta_json(const BetaFunction& beta) {
    nlohmann::json knots = nlohmann::json::array();
    for (const auto& k : beta.knots()) knots.push_back({k.first, k.second});
    return {{"epsilon0", beta.epsilon0()}, {"knots", knots}};
}

inline nlohmann::json path_metadata_json(const PointProcess& pp, const JumpPath& path,
                                         const BetaFunction& beta) {
    const char* kind = path.kind == PathKind::stable_like ? "stable_like"
                       : path.kind == PathKind::subordinator ? "subordinator"
                                                             : "time_changed";
    return {{"kind", kind},
            {"seed", pp.seed},
            {"horizon", pp.horizon},
            {"z_min", pp.z_min},
            {"events", pp.events.size()},
            {"beta", beta_json(beta)},
            {"truncation_bias_bound",
             truncation_bias_bound(pp.horizon, pp.z_min, beta)}};
}

inline void write_occupation_csv(const OccupationMeasure& om, const std::string& file) {
    auto out = detail::open_out(file);
    out << "level,duration,cumulative\n";
    for (std::size_t k = 0; k < om.levels.size(); ++k)
        out << fmt_g17(om.levels[k]) << ',' << fmt_g17(om.durations[k]) << ','
            << fmt_g17(om.cumulative[k]) << '\n';
    if (!out) throw std::runtime_error("short write on " + file);
}

inline nlohmann::json local_dim_json(const LocalDimEstimate& est) {
    nlohmann::json scales = nlohmann::json::array();
    for (std::size_t i = 0; i < est.radii.size(); ++i)
        scales.push_back({{"r", est.radii[i]},
                          {"ratio", est.ratios[i]},
                          {"atoms", est.atoms[i]}});
    return {{"x", est.x},
            {"scales", scales},
            {"usable_count", est.usable_count},
            {"lower_est", est.lower_est},
            {"upper_est", est.upper_est},
            {"low_confidence", est.low_confidence},
            {"few_atom_scales", est.few_atom_scales}};
}

// Spectrum tables: one row per h with the envelope value, its case tag, the
// maximizing index when one exists, and the closed-variant value at that
// index (the half-open convention only differs where a level set doubles).
inline void write_spectrum_csv(const std::vector<SpectrumValue>& rows, SpectrumMode mode,
                               const std::string& file) {
    auto out = detail::open_out(file);
    out << "h,value,tag,alpha_star,closed_variant\n";
    for (const auto& r : rows) {
        out << fmt_g17(r.h) << ',' << dim_csv(r.value) << ',' << spectrum_tag_name(r.tag) << ',';
        if (std::isnan(r.alpha_star)) {
            out << ",\n";
            continue;
        }
        DimValue closed = g_spectrum(r.alpha_star, r.h, GVariant::closed);
        if (mode == SpectrumMode::time && !closed.neg_inf) closed.value /= r.alpha_star;
        out << fmt_g17(r.alpha_star) << ',' << dim_csv(closed) << '\n';
    }
    if (!out) throw std::runtime_error("short write on " + file);
}

inline nlohmann::json census_json(const CensusReport& rep) {
    return {{"n", rep.n},
            {"gamma", rep.gamma},
            {"eps", rep.eps},
            {"threshold", rep.threshold},
            {"lambda", rep.lambda},
            {"observed", rep.observed},
            {"expected", rep.expected}};
}

inline nlohmann::json config_mc_json(const ConfigMcReport& rep) {
    return {{"windows", rep.windows},
            {"freq_zero", rep.freq_zero},
            {"freq_double", rep.freq_double},
            {"se_zero", rep.se_zero},
            {"se_double", rep.se_double},
            {"p", rep.closed_form.p},
            {"q", rep.closed_form.q},
            {"zero_jump_mean", rep.closed_form.zero_jump_mean},
            {"half_band_mean", rep.closed_form.half_band_mean},
            {"underflow", rep.closed_form.underflow},
            {"zero_within_3se", std::abs(rep.freq_zero - rep.closed_form.p) <= 3.0 * rep.se_zero},
            {"double_within_3se",
             std::abs(rep.freq_double - rep.closed_form.q) <= 3.0 * rep.se_double}};
}

inline nlohmann::json tree_json(const TreeReport& rep) {
    return {{"root_lo", rep.root_lo},
            {"root_hi", rep.root_hi},
            {"level_lengths", rep.level_lengths},
            {"level_counts", rep.level_counts},
            {"leaf_count", rep.leaf_count}};
}

inline nlohmann::json concentration_json(const ConcentrationReport& rep) {
    return {{"n", rep.n},
            {"delta", rep.delta},
            {"cutoff", rep.cutoff},
            {"threshold", rep.threshold},
            {"max_scaled", rep.max_scaled},
            {"max_abs_increment", rep.max_abs_increment},
            {"pairs_checked", rep.pairs_checked},
            {"exceeded", rep.exceeded}};
}

inline nlohmann::json box_dim_json(const BoxDimEstimate& est) {
    return {{"j_min", est.j_min},
            {"j_max", est.j_max},
            {"counts", est.counts},
            {"log2_counts", est.log2_counts},
            {"slope", est.slope},
            {"slope_se", est.slope_se}};
}

inline nlohmann::json range_box_json(const RangeBoxReport& rep) {
    return {{"j_min", rep.j_min},
            {"j_max", rep.j_max},
            {"counts", rep.counts},
            {"log2_counts", rep.log2_counts},
            {"slope", rep.slope},
            {"slope_se", rep.slope_se},
            {"final_value", rep.final_value},
            {"event_count", rep.event_count}};
}

inline nlohmann::json image_dim_json(const ImageDimReport& rep) {
    return {{"predicted_lo", rep.predicted_lo},
            {"predicted_hi", rep.predicted_hi},
            {"box", box_dim_json(rep.box)},
            {"tolerance", rep.tolerance},
            {"contained", rep.contained}};
}

inline void write_json(const nlohmann::json& j, const std::string& file) {
    auto out = detail::open_out(file);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("short write on " + file);
}

}  // namespace stablelike
