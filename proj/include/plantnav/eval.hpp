#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plantnav/qnet.hpp"
#include "plantnav/reward.hpp"
#include "plantnav/trainer.hpp"
#include "plantnav/world.hpp"

namespace plantnav {

struct EvalConfig {
    int max_steps = 400;
    int clearance_cap = 10;
    EnergyConfig energy;
    RewardConfig reward;
};

struct TrajectoryStep {
    Vec3 pos;  // position after the step
    Action action = Action::PlusX;
    double reward = 0.0;
    Termination termination = Termination::Running;
};

struct Trajectory {
    Vec3 start;
    Vec3 target;
    std::vector<TrajectoryStep> steps;
    Termination termination = Termination::Running;
    double score = 0.0;
};

// Follows the network greedily (epsilon 0) until termination. The seed feeds
// wind drift only; calm worlds give bit-identical trajectories for any seed.
Trajectory rollout_greedy(const World& w, const QNetwork& net, Vec3 start, Vec3 target, const EvalConfig& cfg,
                          std::uint64_t seed);

// Direction changes between consecutive steps.
int turn_count(const Trajectory& t);

// avg[i] = mean of the trailing window ending at i (shorter at the front).
std::vector<double> moving_average(std::span<const double> values, int window);

struct EvalSummary {
    int episodes = 0;
    double success_rate = 0.0;
    double mean_steps = 0.0;
    double mean_turns = 0.0;
    std::map<std::string, int> termination_counts;
};

// n greedy rollouts against freshly sampled targets; rollout i draws from
// the (seed, Rollout, i) stream, so any prefix of a longer evaluation is
// reproducible. Collects trajectories when `trajectories` is non-null.
EvalSummary evaluate(const World& w, const QNetwork& net, Vec3 start, const EvalConfig& cfg, int episodes,
                     std::uint64_t seed, std::vector<Trajectory>* trajectories = nullptr);

double success_rate(const World& w, const QNetwork& net, Vec3 start, const EvalConfig& cfg, int episodes,
                    std::uint64_t seed);

std::string trajectory_to_csv(const Trajectory& t);
void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path);
std::string eval_summary_to_json(const EvalSummary& s);

// Exact tabular solution of a small deterministic instance; the reference
// the learned network is compared against.
struct TinyMdp {
    World world;  // calm wind only; free-cell count capped at 200
    Vec3 target;
    RewardConfig reward;
};

class QTable {
public:
    QTable(Vec3 dims);

    std::array<double, kNumActions>& at(Vec3 p);
    const std::array<double, kNumActions>& at(Vec3 p) const;

private:
    Vec3 dims_;
    std::vector<std::array<double, kNumActions>> q_;
};

// Synchronous backups iterated until the largest update falls below tol.
QTable value_iteration(const TinyMdp& mdp, double gamma, double tol = 1e-10, int max_iterations = 1000000);

// Actions within tie_tol of the best value at s.
std::vector<int> optimal_actions(const QTable& q, Vec3 s, double tie_tol = 1e-9);

}  // namespace plantnav
