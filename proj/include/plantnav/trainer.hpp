#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "plantnav/features.hpp"
#include "plantnav/qnet.hpp"
#include "plantnav/replay.hpp"
#include "plantnav/reward.hpp"
#include "plantnav/world.hpp"

namespace plantnav {

struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.01;
    int decay_episodes = 4000;

    friend bool operator==(const EpsilonSchedule&, const EpsilonSchedule&) = default;
};

// Linear decay; exactly `end` from decay_episodes onward.
double epsilon_at(const EpsilonSchedule& s, int episode);

// Greedy on the network with probability 1 - epsilon, otherwise uniform over
// the six actions. Greedy ties break toward the lowest action index.
Action select_action(const QNetwork& net, std::span<const double> phi, double epsilon, Rng& rng);

// y = r for terminal transitions, else r + gamma * max_a target(phi_next).
std::vector<double> bellman_targets(std::span<const Transition* const> batch, const QNetwork& target_net,
                                    double gamma);

struct CurriculumStage {
    double max_target_distance = 1e9;  // Euclidean cap on sampled targets
    bool wind_enabled = true;
    double advance_success_rate = 0.8;
    int advance_window = 200;

    friend bool operator==(const CurriculumStage&, const CurriculumStage&) = default;
};

std::vector<CurriculumStage> default_curriculum();

struct TrainConfig {
    int episodes = 1000;
    int start_episode = 0;  // offsets the epsilon schedule and episode streams
    int start_stage = 0;    // curriculum stage to resume into
    int max_steps = 400;
    double gamma = 0.99;
    double lr = 1e-3;
    int batch_size = 64;
    std::size_t replay_capacity = 100000;
    int target_sync_interval = 1000;  // gradient steps between target syncs
    int warmup_transitions = 1000;    // replay fill level before learning
    int checkpoint_interval = 500;    // episodes between checkpoint snapshots
    std::uint64_t seed = 0;
    Vec3 start_pos{5, 5, 1};
    std::vector<int> hidden_layers{64, 64};
    int clearance_cap = 10;
    EpsilonSchedule schedule;
    RewardConfig reward;
    EnergyConfig energy;
    std::vector<CurriculumStage> curriculum = default_curriculum();

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Throws ConfigError on any broken invariant.
void validate_config(const TrainConfig& cfg);

struct EpisodeResult {
    int episode = 0;  // absolute index (start_episode offset included)
    double score = 0.0;
    int steps = 0;
    Termination termination = Termination::Running;
    double epsilon = 0.0;
    int stage = 0;
    int turns = 0;  // action changes between consecutive steps
    double final_distance = 0.0;
    double energy_used = 0.0;
};

// Owns the learning state. Episode k always consumes the RNG stream derived
// from (seed, Episode, k), so runs can be split and resumed reproducibly.
class Trainer {
public:
    Trainer(World world, TrainConfig cfg);
    Trainer(World world, TrainConfig cfg, QNetwork initial);

    EpisodeResult run_episode();

    const QNetwork& net() const { return net_; }
    const QNetwork& target_net() const { return target_; }
    const ReplayMemory& memory() const { return memory_; }
    int episode_index() const { return episode_; }
    int stage_index() const { return stage_; }
    std::uint64_t gradient_steps() const { return gradient_steps_; }

private:
    World world_;       // as configured
    World calm_world_;  // wind zeroed for stages that disable it
    TrainConfig cfg_;
    TargetSampler sampler_;
    FeatureConfig feature_cfg_;
    QNetwork net_;
    QNetwork target_;
    ReplayMemory memory_;
    int episode_;
    int stage_ = 0;
    std::uint64_t gradient_steps_ = 0;
    std::vector<bool> stage_window_;  // successes within the current stage

    void learn_step(Rng& rng, int episode, int step);
    void update_curriculum(bool success);
};

struct TrainHooks {
    std::function<void(const EpisodeResult&)> on_episode;
    // Invoked at every checkpoint interval and once more when training ends.
    std::function<void(const QNetwork&, int episodes_done, bool final)> on_checkpoint;
};

// Runs cfg.episodes episodes and returns their results. `initial` continues
// from existing weights instead of a fresh initialisation.
std::vector<EpisodeResult> train(const World& world, const TrainConfig& cfg, const TrainHooks& hooks = {},
                                 const QNetwork* initial = nullptr);

}  // namespace plantnav
