#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plantnav/config.hpp"
#include "plantnav/errors.hpp"
#include "plantnav/eval.hpp"
#include "plantnav/features.hpp"
#include "plantnav/log.hpp"
#include "plantnav/text.hpp"

namespace fs = std::filesystem;
using namespace plantnav;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string world_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::string resume_path;
};

RunConfig effective_config(const CommonFlags& flags) {
    RunConfig cfg = flags.config_path.empty() ? RunConfig{} : load_run_config(flags.config_path);
    if (!flags.world_path.empty()) cfg.world_path = flags.world_path;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.seed) cfg.train.seed = *flags.seed;
    if (flags.episodes) cfg.train.episodes = *flags.episodes;
    validate_config(cfg.train);
    return cfg;
}

// Checkpoints are only usable when their observation layout matches ours.
QNetwork load_compatible_checkpoint(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    if (ckpt.layout_hash != feature_layout_hash())
        throw CheckpointError(CheckpointError::Kind::LayoutMismatch,
                              "checkpoint was written for a different feature layout; refusing to use " + path);
    return std::move(ckpt.net);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file: " + path.string());
    return out;
}

int run_train(const CommonFlags& flags) {
    RunConfig cfg = effective_config(flags);
    const World world = load_world(cfg.world_path);

    std::optional<QNetwork> initial;
    if (!flags.resume_path.empty()) initial = load_compatible_checkpoint(flags.resume_path);

    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    write_run_manifest(cfg, out_dir / "run_manifest.json");

    std::ofstream episodes_csv = open_output(out_dir / "episodes.csv");
    episodes_csv << kEpisodeCsvHeader << '\n';

    TrainHooks hooks;
    hooks.on_episode = [&](const EpisodeResult& r) {
        episodes_csv << r.episode << ',' << format_double(r.score) << ',' << r.steps << ','
                     << termination_name(r.termination) << ',' << format_double(r.epsilon) << ',' << r.stage << ','
                     << r.turns << ',' << format_double(r.final_distance) << ',' << format_double(r.energy_used)
                     << '\n';
        episodes_csv.flush();
        if (!episodes_csv) throw ConfigError("failed writing episode log");
    };
    hooks.on_checkpoint = [&](const QNetwork& net, int episodes_done, bool final) {
        const std::string name = final ? "ckpt_final.bin" : "ckpt_" + std::to_string(episodes_done) + ".bin";
        save_checkpoint(net, feature_layout_hash(), out_dir / name);
        log_debug("wrote " + name);
    };

    train(world, cfg.train, hooks, initial ? &*initial : nullptr);
    log_info("training finished: " + std::to_string(cfg.train.episodes) + " episodes");
    return 0;
}

int run_eval(const CommonFlags& flags) {
    RunConfig cfg = effective_config(flags);
    if (flags.resume_path.empty()) throw ConfigError("eval requires --resume <checkpoint>");
    const int episodes = flags.episodes.value_or(100);
    if (episodes < 1) throw ConfigError("eval requires --episodes >= 1");

    const World world = load_world(cfg.world_path);
    const QNetwork net = load_compatible_checkpoint(flags.resume_path);

    EvalConfig ecfg;
    ecfg.max_steps = cfg.train.max_steps;
    ecfg.clearance_cap = cfg.train.clearance_cap;
    ecfg.energy = cfg.train.energy;
    ecfg.reward = cfg.train.reward;

    std::vector<Trajectory> trajectories;
    const EvalSummary summary =
        evaluate(world, net, cfg.train.start_pos, ecfg, episodes, cfg.train.seed, &trajectories);

    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "traj_%03zu.csv", i);
        write_trajectory_csv(trajectories[i], out_dir / name);
    }
    open_output(out_dir / "eval_summary.json") << eval_summary_to_json(summary);
    std::cout << eval_summary_to_json(summary);
    return 0;
}

int run_export_scores(const CommonFlags& flags, int window) {
    if (window < 1) throw ConfigError("--window must be >= 1");
    const fs::path out_dir(flags.out_dir.empty() ? "runs/out" : flags.out_dir);
    const std::vector<std::pair<int, double>> rows = read_episode_scores(out_dir / "episodes.csv");

    std::vector<double> scores;
    scores.reserve(rows.size());
    for (const auto& [episode, score] : rows) scores.push_back(score);
    const std::vector<double> avg = moving_average(scores, window);

    std::ofstream out = open_output(out_dir / "scores_avg.csv");
    out << "episode,score,avg_score\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << rows[i].first << ',' << format_double(rows[i].second) << ',' << format_double(avg[i]) << '\n';
    if (!out) throw ConfigError("failed writing scores_avg.csv");
    return 0;
}

struct GenWorldFlags {
    std::string out_path;
    bool use_default = false;
    std::vector<int> dims;
    std::vector<std::string> obstacles;
    double wind_speed = 30.0;
    std::vector<double> wind_dir;
    double height_gain = 0.5;
    double drift_ref = 120.0;
    int clearance = 3;
};

int run_gen_world(const GenWorldFlags& flags) {
    World w;
    if (flags.use_default) {
        w = default_world();
    } else {
        if (flags.dims.size() != 3) throw ConfigError("--dims requires three values: x y z");
        w.dims = {flags.dims[0], flags.dims[1], flags.dims[2]};
        for (const std::string& spec : flags.obstacles) {
            // cx,cy,cz,sx,sy,sz,color
            std::istringstream in(spec);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(in, field, ',')) fields.push_back(field);
            if (fields.size() != 7)
                throw ConfigError("--obstacle expects cx,cy,cz,sx,sy,sz,color; got \"" + spec + "\"");
            BoxObstacle box;
            try {
                box.center = {std::stoi(fields[0]), std::stoi(fields[1]), std::stoi(fields[2])};
                box.size = {std::stoi(fields[3]), std::stoi(fields[4]), std::stoi(fields[5])};
            } catch (const std::exception&) {
                throw ConfigError("--obstacle has non-integer geometry: \"" + spec + "\"");
            }
            box.color = fields[6];
            w.obstacles.push_back(std::move(box));
        }
        w.wind.base_speed = flags.wind_speed;
        if (!flags.wind_dir.empty()) {
            if (flags.wind_dir.size() != 2) throw ConfigError("--wind-dir requires two values: x y");
            w.wind.direction = {flags.wind_dir[0], flags.wind_dir[1], 0.0};
        }
        w.wind.height_gain = flags.height_gain;
        w.wind.drift_reference_speed = flags.drift_ref;
        w.target_clearance = flags.clearance;
    }
    save_world(w, flags.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic 3D inspection-flight simulator and DQN trainer"};
    app.require_subcommand(1);

    CommonFlags flags;
    int window = 100;
    GenWorldFlags gen;

    CLI::App* train_cmd = app.add_subcommand("train", "Train a policy and log per-episode results");
    train_cmd->add_option("--config", flags.config_path, "Run configuration JSON");
    train_cmd->add_option("--world", flags.world_path, "World JSON (overrides config)");
    train_cmd->add_option("--out", flags.out_dir, "Output directory (overrides config)");
    train_cmd->add_option("--seed", flags.seed, "Master seed (overrides config)");
    train_cmd->add_option("--episodes", flags.episodes, "Episode count (overrides config)");
    train_cmd->add_option("--resume", flags.resume_path, "Checkpoint to continue from");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Greedy rollouts from a checkpoint");
    eval_cmd->add_option("--config", flags.config_path, "Run configuration JSON");
    eval_cmd->add_option("--world", flags.world_path, "World JSON (overrides config)");
    eval_cmd->add_option("--out", flags.out_dir, "Output directory (overrides config)");
    eval_cmd->add_option("--seed", flags.seed, "Evaluation seed (overrides config)");
    eval_cmd->add_option("--episodes", flags.episodes, "Rollout count (default 100)");
    eval_cmd->add_option("--resume", flags.resume_path, "Checkpoint to evaluate")->required();

    CLI::App* export_cmd = app.add_subcommand("export-scores", "Moving-average score table from an episode log");
    export_cmd->add_option("--out", flags.out_dir, "Run directory holding episodes.csv");
    export_cmd->add_option("--window", window, "Moving-average window (default 100)");

    CLI::App* gen_cmd = app.add_subcommand("gen-world", "Write a world JSON file");
    gen_cmd->add_option("--out", gen.out_path, "Destination path")->required();
    gen_cmd->add_flag("--default", gen.use_default, "Emit the bundled default world");
    gen_cmd->add_option("--dims", gen.dims, "Space dimensions: x y z")->expected(3);
    gen_cmd->add_option("--obstacle", gen.obstacles, "Box as cx,cy,cz,sx,sy,sz,color (repeatable)");
    gen_cmd->add_option("--wind-speed", gen.wind_speed, "Ground wind speed, km/h (default 30)");
    gen_cmd->add_option("--wind-dir", gen.wind_dir, "Wind direction: x y (default 1 0)")->expected(2);
    gen_cmd->add_option("--height-gain", gen.height_gain, "Wind gain per km of altitude (default 0.5)");
    gen_cmd->add_option("--drift-ref", gen.drift_ref, "Wind speed at which drift is certain (default 120)");
    gen_cmd->add_option("--clearance", gen.clearance, "Required target clearance in cells (default 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, bad usage exits 2
    }

    try {
        if (app.got_subcommand(train_cmd)) return run_train(flags);
        if (app.got_subcommand(eval_cmd)) return run_eval(flags);
        if (app.got_subcommand(export_cmd)) return run_export_scores(flags, window);
        if (app.got_subcommand(gen_cmd)) return run_gen_world(gen);
    } catch (const ConfigError& e) {
        log_error(e.what());
        return 2;
    } catch (const WorldError& e) {
        log_error(e.what());
        return 3;
    } catch (const NumericError& e) {
        log_error(e.what());
        return 4;
    } catch (const std::exception& e) {
        log_error(std::string("unexpected failure: ") + e.what());
        return 1;
    }
    return 0;
}
