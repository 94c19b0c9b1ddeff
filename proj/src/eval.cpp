#include "plantnav/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plantnav/errors.hpp"
#include "plantnav/features.hpp"
#include "plantnav/text.hpp"

namespace plantnav {
namespace {

Trajectory rollout_with_rng(const World& w, const QNetwork& net, Vec3 start, Vec3 target, const EvalConfig& cfg,
                            Rng& rng) {
    Trajectory traj;
    traj.start = start;
    traj.target = target;

    const FeatureConfig fcfg{cfg.clearance_cap, cfg.max_steps};
    UavState s = make_initial_state(start, target, cfg.energy);
    while (true) {
        const FeatureVector fv = phi(w, s, fcfg);
        const Action a = select_action(net, fv, 0.0, rng);
        const StepOutcome outcome = apply_action(w, s, a, cfg.energy, cfg.max_steps, rng);
        const RewardBreakdown rb = total_reward(outcome, s, cfg.reward);
        traj.steps.push_back({outcome.next_state.pos, a, rb.r_total, outcome.termination});
        traj.score += rb.r_total;
        s = outcome.next_state;
        if (outcome.termination != Termination::Running) {
            traj.termination = outcome.termination;
            return traj;
        }
    }
}

}  // namespace

Trajectory rollout_greedy(const World& w, const QNetwork& net, Vec3 start, Vec3 target, const EvalConfig& cfg,
                          std::uint64_t seed) {
    Rng rng(seed);
    return rollout_with_rng(w, net, start, target, cfg, rng);
}

int turn_count(const Trajectory& t) {
    int turns = 0;
    for (std::size_t i = 1; i < t.steps.size(); ++i)
        if (t.steps[i].action != t.steps[i - 1].action) ++turns;
    return turns;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
    if (window < 1) throw ConfigError("moving_average: window must be >= 1");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - static_cast<std::size_t>(window) : 0;
        double sum = 0.0;
        for (std::size_t j = lo; j <= i; ++j) sum += values[j];
        out[i] = sum / static_cast<double>(i - lo + 1);
    }
    return out;
}

EvalSummary evaluate(const World& w, const QNetwork& net, Vec3 start, const EvalConfig& cfg, int episodes,
                     std::uint64_t seed, std::vector<Trajectory>* trajectories) {
    if (episodes < 1) throw ConfigError("evaluate: episodes must be >= 1");
    if (!in_bounds(w, start) || collides(w, start)) throw WorldError("evaluate: start position is blocked");

    const TargetSampler sampler(w);
    EvalSummary summary;
    summary.episodes = episodes;
    summary.termination_counts = {{"crash", 0}, {"reached_target", 0}, {"max_steps", 0}, {"battery_out", 0}};

    long total_steps = 0;
    long total_turns = 0;
    int successes = 0;
    for (int i = 0; i < episodes; ++i) {
        Rng rng(derive_seed(seed, Stream::Rollout, static_cast<std::uint64_t>(i)));
        const Vec3 target = sampler.sample_within(rng, start, 1e18);  // any qualifying cell except start
        Trajectory traj = rollout_with_rng(w, net, start, target, cfg, rng);

        total_steps += static_cast<long>(traj.steps.size());
        total_turns += turn_count(traj);
        if (traj.termination == Termination::ReachedTarget) ++successes;
        ++summary.termination_counts[termination_name(traj.termination)];
        if (trajectories) trajectories->push_back(std::move(traj));
    }
    summary.success_rate = static_cast<double>(successes) / episodes;
    summary.mean_steps = static_cast<double>(total_steps) / episodes;
    summary.mean_turns = static_cast<double>(total_turns) / episodes;
    return summary;
}

double success_rate(const World& w, const QNetwork& net, Vec3 start, const EvalConfig& cfg, int episodes,
                    std::uint64_t seed) {
    return evaluate(w, net, start, cfg, episodes, seed).success_rate;
}

std::string trajectory_to_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "step,x,y,z,action,reward,termination\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const TrajectoryStep& s = t.steps[i];
        out << (i + 1) << ',' << s.pos.x << ',' << s.pos.y << ',' << s.pos.z << ',' << action_name(s.action) << ','
            << format_double(s.reward) << ',' << termination_name(s.termination) << '\n';
    }
    return out.str();
}

void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write trajectory file: " + path.string());
    out << trajectory_to_csv(t);
    if (!out) throw ConfigError("failed writing trajectory file: " + path.string());
}

std::string eval_summary_to_json(const EvalSummary& s) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [name, count] : s.termination_counts) counts[name] = count;
    const nlohmann::json j{
        {"episodes", s.episodes},
        {"success_rate", s.success_rate},
        {"mean_steps", s.mean_steps},
        {"mean_turns", s.mean_turns},
        {"termination_histogram", counts},
    };
    return j.dump(2) + "\n";
}

QTable::QTable(Vec3 dims) : dims_(dims) {
    q_.assign(static_cast<std::size_t>(dims.x) * dims.y * dims.z, {});
}

std::array<double, kNumActions>& QTable::at(Vec3 p) {
    return q_[(static_cast<std::size_t>(p.x) * dims_.y + p.y) * dims_.z + p.z];
}

const std::array<double, kNumActions>& QTable::at(Vec3 p) const {
    return q_[(static_cast<std::size_t>(p.x) * dims_.y + p.y) * dims_.z + p.z];
}

QTable value_iteration(const TinyMdp& mdp, double gamma, double tol, int max_iterations) {
    const World& w = mdp.world;
    if (w.wind.base_speed != 0.0 || w.wind.height_gain != 0.0)
        throw ConfigError("value_iteration: the instance must be calm (deterministic transitions)");
    if (!(gamma > 0.0) || gamma >= 1.0) throw ConfigError("value_iteration: gamma must be in (0, 1)");

    std::vector<Vec3> states;
    for (int x = 0; x < w.dims.x; ++x)
        for (int y = 0; y < w.dims.y; ++y)
            for (int z = 0; z < w.dims.z; ++z) {
                const Vec3 p{x, y, z};
                if (!collides(w, p) && !(p == mdp.target)) states.push_back(p);
            }
    if (states.size() > 200) throw ConfigError("value_iteration: instance too large (over 200 free cells)");
    if (!in_bounds(w, mdp.target) || collides(w, mdp.target))
        throw ConfigError("value_iteration: target must be a free cell");

    QTable q(w.dims);
    QTable next_q(w.dims);
    for (int iter = 0; iter < max_iterations; ++iter) {
        double max_delta = 0.0;
        for (const Vec3& s : states) {
            for (int ai = 0; ai < kNumActions; ++ai) {
                const Vec3 raw = s + action_delta(static_cast<Action>(ai));
                const Vec3 nxt{std::clamp(raw.x, 0, w.dims.x - 1), std::clamp(raw.y, 0, w.dims.y - 1),
                               std::clamp(raw.z, 0, w.dims.z - 1)};
                const bool moved = !(nxt == s);
                const bool crashed = collides(w, nxt);
                const bool reached = nxt == mdp.target;

                double r = climb_reward(nxt.z, mdp.target.z, mdp.reward.wc) +
                           target_reward(euclidean_distance(s, mdp.target), euclidean_distance(nxt, mdp.target),
                                         mdp.reward.wt) +
                           (moved ? 0.0 : mdp.reward.no_move_penalty);
                double value;
                if (crashed) {
                    value = r + mdp.reward.crash_adjust;
                } else if (reached) {
                    value = r + mdp.reward.target_adjust;
                } else {
                    const std::array<double, kNumActions>& qn = q.at(nxt);
                    value = r + gamma * *std::max_element(qn.begin(), qn.end());
                }
                next_q.at(s)[static_cast<std::size_t>(ai)] = value;
                max_delta = std::max(max_delta, std::abs(value - q.at(s)[static_cast<std::size_t>(ai)]));
            }
        }
        std::swap(q, next_q);
        if (max_delta < tol) return q;
    }
    throw NumericError("value_iteration: no convergence within the iteration limit");
}

std::vector<int> optimal_actions(const QTable& q, Vec3 s, double tie_tol) {
    const std::array<double, kNumActions>& qs = q.at(s);
    const double best = *std::max_element(qs.begin(), qs.end());
    std::vector<int> out;
    for (int i = 0; i < kNumActions; ++i)
        if (qs[static_cast<std::size_t>(i)] >= best - tie_tol) out.push_back(i);
    return out;
}

}  // namespace plantnav
