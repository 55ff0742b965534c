#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stablelike/stablelike.hpp"

// Command-line front end: seeded experiments in, CSV/JSON artifacts out.
// Every output is a pure function of the config (file plus flag overrides),
// with per-trial seeds derived from the base seed so --jobs never changes
// a byte of any artifact.

namespace sl = stablelike;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    long long trials = -1;
    int jobs = 1;
    std::string out_dir;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "base seed (overrides config)");
    cmd->add_option("--trials", flags.trials, "trial count (overrides config)");
    cmd->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--format", flags.format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
}

sl::ExperimentConfig load_config(const CLI::App* cmd, const CommonFlags& flags) {
    sl::ExperimentConfig cfg;
    if (cmd->count("--config")) {
        std::ifstream in(flags.config_path);
        if (!in) throw std::runtime_error("cannot read config " + flags.config_path);
        nlohmann::json j;
        in >> j;
        cfg = sl::config_from_json(j);
    } else if (const char* env = std::getenv("STABLELIKE_OUT")) {
        // default output dir from the environment, still overridable by --out
        cfg.out_dir = env;
    }
    if (cmd->count("--seed")) cfg.seed = flags.seed;
    if (cmd->count("--trials")) cfg.trials = static_cast<std::size_t>(flags.trials);
    if (cmd->count("--out")) cfg.out_dir = flags.out_dir;
    if (cmd->count("--format")) cfg.format = flags.format;
    sl::validate(cfg);
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string trial_file(const sl::ExperimentConfig& cfg, const std::string& stem,
                       std::size_t trial, const std::string& ext) {
    return (fs::path(cfg.out_dir) / (stem + "_trial" + std::to_string(trial) + "." + ext))
        .string();
}

// Run fn over every trial, splitting across jobs; collect per-trial errors.
// Trial seeds come from the base seed and the trial index alone.
template <class Fn>
int run_trials(const sl::ExperimentConfig& cfg, int jobs, Fn&& fn) {
    std::vector<std::string> errors(cfg.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cfg.trials) return;
            try {
                fn(k, sl::seed_for_trial(cfg.seed, k));
            } catch (const std::exception& ex) {
                errors[k] = ex.what();
            }
        }
    };
    if (jobs <= 1 || cfg.trials <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min<long long>(jobs, static_cast<long long>(cfg.trials));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    int rc = 0;
    for (std::size_t k = 0; k < cfg.trials; ++k) {
        if (errors[k].empty()) continue;
        std::cerr << "trial " << k << " failed: " << errors[k] << '\n';
        rc = 1;
    }
    return rc;
}

nlohmann::json path_json_rows(const sl::JumpPath& path) {
    nlohmann::json rows = nlohmann::json::array();
    rows.push_back({0.0, 0.0});
    for (std::size_t k = 0; k < path.jump_times.size(); ++k)
        rows.push_back({path.jump_times[k], path.values_after[k]});
    return rows;
}

int cmd_simulate(const sl::ExperimentConfig& cfg, int jobs) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        const sl::JumpPath path = sl::build_stable_like(pp, beta);
        if (cfg.format == "csv")
            sl::write_path_csv(path, trial_file(cfg, "path", k, "csv"));
        else
            sl::write_json({{"rows", path_json_rows(path)}},
                           trial_file(cfg, "path", k, "json"));
        sl::write_json(sl::path_metadata_json(pp, path, beta),
                       trial_file(cfg, "path_meta", k, "json"));
    });
}

int cmd_occupation(const sl::ExperimentConfig& cfg, int jobs) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        const sl::JumpPath path = sl::build_stable_like(pp, beta);
        const sl::OccupationMeasure om = sl::occupation_measure(path);
        if (cfg.format == "csv") {
            sl::write_occupation_csv(om, trial_file(cfg, "occupation", k, "csv"));
        } else {
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < om.levels.size(); ++i)
                rows.push_back({om.levels[i], om.durations[i], om.cumulative[i]});
            sl::write_json({{"total", om.total}, {"rows", rows}},
                           trial_file(cfg, "occupation", k, "json"));
        }
    });
}

int cmd_localdim(const sl::ExperimentConfig& cfg, int jobs, std::size_t probes) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        const sl::JumpPath path = sl::build_stable_like(pp, beta);
        const sl::OccupationMeasure om = sl::occupation_measure(path);
        sl::Rng rng(sl::seed_for_trial(seed, 0xd1));
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t i = 0; i < probes; ++i) {
            const double t = rng.u01() * cfg.horizon;
            const double x = sl::eval(path, t);
            auto est = sl::local_dim(om, x, cfg.r_min, cfg.r_max, cfg.scales_per_decade);
            nlohmann::json j = sl::local_dim_json(est);
            j["t"] = t;
            j["index_at_x"] = beta.eval(x);
            out.push_back(std::move(j));
        }
        sl::write_json({{"probes", out}}, trial_file(cfg, "localdim", k, "json"));
    });
}

int cmd_spectrum(const sl::ExperimentConfig& cfg, int jobs, const std::string& mode_name,
                 double h_min, double h_max, std::size_t h_steps) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    const sl::SpectrumMode mode =
        mode_name == "time" ? sl::SpectrumMode::time : sl::SpectrumMode::space;
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        const sl::JumpPath path = sl::build_stable_like(pp, beta);
        const sl::IndexSet attained =
            mode == sl::SpectrumMode::time
                ? sl::index_range(path, beta, 0.0, cfg.horizon, mode)
                : sl::index_range(path, beta, -1.0, std::numeric_limits<double>::infinity(),
                                  mode);
        std::vector<sl::SpectrumValue> rows;
        rows.reserve(h_steps);
        for (std::size_t i = 0; i < h_steps; ++i) {
            const double h =
                h_steps == 1 ? h_min
                             : h_min + (h_max - h_min) * static_cast<double>(i) /
                                           static_cast<double>(h_steps - 1);
            rows.push_back(sl::spectrum_envelope(h, attained, mode));
        }
        if (cfg.format == "csv") {
            sl::write_spectrum_csv(rows, mode, trial_file(cfg, "spectrum", k, "csv"));
        } else {
            nlohmann::json jr = nlohmann::json::array();
            for (const auto& r : rows)
                jr.push_back({{"h", r.h},
                              {"value", sl::dim_json(r.value)},
                              {"tag", sl::spectrum_tag_name(r.tag)},
                              {"alpha_star", r.alpha_star}});
            sl::write_json({{"mode", mode_name}, {"rows", jr}},
                           trial_file(cfg, "spectrum", k, "json"));
        }
    });
}

int cmd_images(const sl::ExperimentConfig& cfg, int jobs, double a_frac, double b_frac) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        const sl::JumpPath path = sl::build_stable_like(pp, beta);
        auto rep = sl::image_dim_bounds(path, beta, a_frac * cfg.horizon, b_frac * cfg.horizon,
                                        cfg.j_min, cfg.j_max);
        sl::write_json(sl::image_dim_json(rep), trial_file(cfg, "images", k, "json"));
    });
}

int cmd_census(const sl::ExperimentConfig& cfg, int jobs, int n, double eps) {
    const sl::ScaleLadder ladder =
        sl::desk_ladder(cfg.ladder_eta0, cfg.ladder_eps, cfg.ladder_floor);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        nlohmann::json out;
        out["census"] = sl::census_json(sl::double_jump_limsup_census(pp, n, cfg.gamma, eps));
        if (ladder.levels.size() >= 2) {
            const double lo = ladder.eta0;
            const double hi = 2.0 * ladder.eta0;
            if (hi <= cfg.horizon)
                out["tree"] = sl::tree_json(sl::grow_tree(pp, lo, hi, ladder, cfg.gamma));
            out["config_probabilities"] = {
                {"eta", ladder.levels[0]},
                {"eta_next", ladder.levels[1]},
                {"p", sl::config_probabilities(ladder.levels[0], ladder.levels[1], cfg.gamma).p},
                {"q", sl::config_probabilities(ladder.levels[0], ladder.levels[1], cfg.gamma).q}};
        }
        sl::write_json(out, trial_file(cfg, "census", k, "json"));
    });
}

int cmd_concentration(const sl::ExperimentConfig& cfg, int jobs, int n, double delta,
                      std::size_t grid_points) {
    const sl::BetaFunction beta = sl::make_beta(cfg);
    return run_trials(cfg, jobs, [&](std::size_t k, std::uint64_t seed) {
        const sl::PointProcess pp = sl::sample_ppp(cfg.horizon, cfg.z_min, seed);
        std::vector<double> grid(grid_points);
        for (std::size_t i = 0; i < grid_points; ++i)
            grid[i] = cfg.horizon * static_cast<double>(i) /
                      static_cast<double>(grid_points - 1);
        auto rep = sl::concentration_check(pp, beta, n, delta, grid, beta.is_constant());
        sl::write_json(sl::concentration_json(rep),
                       trial_file(cfg, "concentration", k, "json"));
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable-like jump process experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::size_t probes = 16;
    std::string mode_name = "space";
    double h_min = 0.05, h_max = 1.5;
    std::size_t h_steps = 146;
    double a_frac = 0.1, b_frac = 0.9;
    int census_n = 10;
    double census_eps = 0.1;
    int conc_n = 8;
    double conc_delta = 2.0;
    std::size_t grid_points = 257;

    auto* simulate = app.add_subcommand("simulate", "sample paths to CSV/JSON");
    auto* occupation = app.add_subcommand("occupation", "occupation measures of sampled paths");
    auto* localdim = app.add_subcommand("localdim", "local dimension probes at sampled times");
    auto* spectrum = app.add_subcommand("spectrum", "spectrum envelope table over an h grid");
    auto* images = app.add_subcommand("images", "box dimension of path images vs prediction");
    auto* census = app.add_subcommand("census", "jump configuration censuses and trees");
    auto* concentration =
        app.add_subcommand("concentration", "compensated small-jump concentration check");
    for (auto* cmd : {simulate, occupation, localdim, spectrum, images, census, concentration})
        add_common(cmd, flags);

    localdim->add_option("--probes", probes, "probe times per trial");
    spectrum->add_option("--mode", mode_name, "space or time")
        ->check(CLI::IsMember({"space", "time"}));
    spectrum->add_option("--h-min", h_min, "grid start");
    spectrum->add_option("--h-max", h_max, "grid end");
    spectrum->add_option("--h-steps", h_steps, "grid size");
    images->add_option("--a", a_frac, "window start as a fraction of the horizon");
    images->add_option("--b", b_frac, "window end as a fraction of the horizon");
    census->add_option("--n", census_n, "dyadic census depth");
    census->add_option("--eps", census_eps, "census size-band slack");
    concentration->add_option("--n", conc_n, "dyadic pair scale");
    concentration->add_option("--delta", conc_delta, "small-jump cutoff exponent divisor");
    concentration->add_option("--grid-points", grid_points, "uniform grid size")
        ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1 << 20)));

    CLI11_PARSE(app, argc, argv);

    try {
        auto* cmd = app.get_subcommands().front();
        const sl::ExperimentConfig cfg = load_config(cmd, flags);
        if (cmd == simulate) return cmd_simulate(cfg, flags.jobs);
        if (cmd == occupation) return cmd_occupation(cfg, flags.jobs);
        if (cmd == localdim) return cmd_localdim(cfg, flags.jobs, probes);
        if (cmd == spectrum)
            return cmd_spectrum(cfg, flags.jobs, mode_name, h_min, h_max, h_steps);
        if (cmd == images) return cmd_images(cfg, flags.jobs, a_frac, b_frac);
        if (cmd == census) return cmd_census(cfg, flags.jobs, census_n, census_eps);
        if (cmd == concentration)
            return cmd_concentration(cfg, flags.jobs, conc_n, conc_delta, grid_points);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
