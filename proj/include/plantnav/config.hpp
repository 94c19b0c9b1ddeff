#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "plantnav/trainer.hpp"

namespace plantnav {

// Everything a run needs beyond the world file. CLI flags override fields
// after loading.
struct RunConfig {
    std::string world_path = "worlds/default.json";
    std::string out_dir = "runs/out";
    TrainConfig train;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Strict parse: unknown keys anywhere are ConfigError, as are wrong types
// and broken value invariants. Missing keys keep their defaults.
RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical echo of the effective configuration (sorted keys, two-space
// indent); embedded in run_manifest.json.
std::string run_config_to_json_text(const RunConfig& cfg);

std::string run_manifest_json(const RunConfig& cfg);
void write_run_manifest(const RunConfig& cfg, const std::filesystem::path& path);

// Parses an episode log produced by training: returns (episode, score)
// pairs. Throws ConfigError on malformed content.
std::vector<std::pair<int, double>> read_episode_scores(const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "plantnav 0.1.0";
inline constexpr const char* kCheckpointFormat = "DQNCKPT1";
inline constexpr const char* kEpisodeCsvHeader =
    "episode,score,steps,termination,epsilon,stage,turns,final_distance,energy_used";

}  // namespace plantnav
