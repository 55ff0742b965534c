#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stablelike/beta_function.hpp"
#include "stablelike/census.hpp"

// Experiment configuration: one JSON-serializable struct that fixes every
// knob an experiment needs, validated up front so a bad value fails before
// any sampling starts. Round-trips through JSON unchanged.

namespace stablelike {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    double horizon = 1.0;
    double z_min = 1e-6;

    // index map: constant alpha when knots is empty, else epsilon0 + knots
    double alpha = 0.5;
    double epsilon0 = 0.05;
    std::vector<std::pair<double, double>> knots;

    // estimator windows
    double r_min = 1e-6;
    double r_max = 1e-2;
    int scales_per_decade = 4;
    int j_min = 5;
    int j_max = 13;

    // census ladder
    double ladder_eta0 = default_ladder_eta0;
    double ladder_eps = default_ladder_eps;
    double ladder_floor = default_ladder_floor;
    double gamma = 1.8;

    std::string out_dir = ".";
    std::string format = "csv";  // csv | json
};

inline BetaFunction make_beta(const ExperimentConfig& cfg) {
    if (cfg.knots.empty()) return BetaFunction::constant(cfg.alpha);
    return BetaFunction(cfg.epsilon0, cfg.knots);
}

inline void validate(const ExperimentConfig& cfg) {
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
    if (!(cfg.z_min > 0.0) || !(cfg.z_min < 1.0))
        throw std::invalid_argument("config: z_min must lie in (0,1)");
    make_beta(cfg);  // throws on a bad index spec
    if (!(cfg.r_min > 0.0) || !(cfg.r_min < cfg.r_max))
        throw std::invalid_argument("config: need 0 < r_min < r_max");
    if (cfg.scales_per_decade < 1) throw std::invalid_argument("config: scales_per_decade < 1");
    if (cfg.j_min < 0 || cfg.j_min > cfg.j_max || cfg.j_max > 62)
        throw std::invalid_argument("config: need 0 <= j_min <= j_max <= 62");
    desk_ladder(cfg.ladder_eta0, cfg.ladder_eps, cfg.ladder_floor);  // throws on a bad ladder
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("config: gamma must be > 0");
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("config: format must be csv or json");
}

inline nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json knots = nlohmann::json::array();
    for (const auto& k : cfg.knots) knots.push_back({k.first, k.second});
    return {{"seed", cfg.seed},
            {"trials", cfg.trials},
            {"horizon", cfg.horizon},
            {"z_min", cfg.z_min},
            {"alpha", cfg.alpha},
            {"epsilon0", cfg.epsilon0},
            {"knots", knots},
            {"r_min", cfg.r_min},
            {"r_max", cfg.r_max},
            {"scales_per_decade", cfg.scales_per_decade},
            {"j_min", cfg.j_min},
            {"j_max", cfg.j_max},
            {"ladder_eta0", cfg.ladder_eta0},
            {"ladder_eps", cfg.ladder_eps},
            {"ladder_floor", cfg.ladder_floor},
            {"gamma", cfg.gamma},
            {"out_dir", cfg.out_dir},
            {"format", cfg.format}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.z_min = j.value("z_min", cfg.z_min);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.epsilon0 = j.value("epsilon0", cfg.epsilon0);
    if (j.contains("knots"))
        for (const auto& k : j.at("knots"))
            cfg.knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    cfg.r_min = j.value("r_min", cfg.r_min);
    cfg.r_max = j.value("r_max", cfg.r_max);
    cfg.scales_per_decade = j.value("scales_per_decade", cfg.scales_per_decade);
    cfg.j_min = j.value("j_min", cfg.j_min);
    cfg.j_max = j.value("j_max", cfg.j_max);
    cfg.ladder_eta0 = j.value("ladder_eta0", cfg.ladder_eta0);
    cfg.ladder_eps = j.value("ladder_eps", cfg.ladder_eps);
    cfg.ladder_floor = j.value("ladder_floor", cfg.ladder_floor);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.format = j.value("format", cfg.format);
    return cfg;
}

}  // namespace stablelike
