#include "plantnav/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plantnav/errors.hpp"
#include "plantnav/log.hpp"

namespace plantnav {
namespace {

World without_wind(World w) {
    w.wind.base_speed = 0.0;
    w.wind.height_gain = 0.0;
    return w;
}

World checked_world(World w) {
    validate_world(w);
    return w;
}

TrainConfig checked_config(TrainConfig cfg) {
    validate_config(cfg);
    return cfg;
}

double param_norm(const QNetwork& net) {
    double sum = 0.0;
    for (const double v : net.parameters()) sum += v * v;
    return std::sqrt(sum);
}

}  // namespace

double epsilon_at(const EpsilonSchedule& s, int episode) {
    if (episode >= s.decay_episodes) return s.end;
    const double frac = static_cast<double>(episode) / static_cast<double>(s.decay_episodes);
    return std::max(s.end, s.start - (s.start - s.end) * frac);
}

Action select_action(const QNetwork& net, std::span<const double> phi, double epsilon, Rng& rng) {
    if (rng.uniform() < epsilon) return static_cast<Action>(rng.below(kNumActions));
    const std::vector<double> q = net.forward(phi);
    std::size_t best = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
        if (q[i] > q[best]) best = i;
    return static_cast<Action>(best);
}

std::vector<double> bellman_targets(std::span<const Transition* const> batch, const QNetwork& target_net,
                                    double gamma) {
    std::vector<double> ys;
    ys.reserve(batch.size());
    for (const Transition* t : batch) {
        if (t->terminal) {
            ys.push_back(t->reward);
            continue;
        }
        const std::vector<double> q = target_net.forward(t->phi_next);
        ys.push_back(t->reward + gamma * *std::max_element(q.begin(), q.end()));
    }
    return ys;
}

std::vector<CurriculumStage> default_curriculum() {
    return {
        {15.0, false, 0.8, 200},
        {40.0, true, 0.8, 200},
        {1e9, true, 0.8, 200},
    };
}

void validate_config(const TrainConfig& cfg) {
    const auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (cfg.episodes < 0) fail("episodes must be >= 0");
    if (cfg.start_episode < 0) fail("start_episode must be >= 0");
    if (cfg.max_steps < 1) fail("max_steps must be >= 1");
    if (!(cfg.gamma > 0.0) || cfg.gamma > 1.0) fail("gamma must be in (0, 1]");
    if (!(cfg.lr > 0.0)) fail("lr must be > 0");
    if (cfg.batch_size < 1) fail("batch_size must be >= 1");
    if (cfg.warmup_transitions < cfg.batch_size) fail("warmup_transitions must be >= batch_size");
    if (cfg.replay_capacity < static_cast<std::size_t>(cfg.warmup_transitions))
        fail("replay_capacity must be >= warmup_transitions");
    if (cfg.target_sync_interval < 1) fail("target_sync_interval must be >= 1");
    if (cfg.checkpoint_interval < 1) fail("checkpoint_interval must be >= 1");
    if (cfg.clearance_cap < 1) fail("clearance_cap must be >= 1");
    if (cfg.hidden_layers.empty()) fail("hidden_layers must not be empty");
    for (const int h : cfg.hidden_layers)
        if (h < 1) fail("hidden layer sizes must be >= 1");
    if (!(cfg.schedule.end > 0.0)) fail("epsilon end must be > 0");
    if (cfg.schedule.start < cfg.schedule.end) fail("epsilon start must be >= end");
    if (cfg.schedule.start > 1.0) fail("epsilon start must be <= 1");
    if (cfg.schedule.decay_episodes < 1) fail("epsilon decay_episodes must be >= 1");
    if (!(cfg.energy.base_cost > 0.0)) fail("energy base_cost must be > 0");
    if (cfg.energy.climb_bonus < 0.0) fail("energy climb_bonus must be >= 0");
    if (cfg.energy.wind_coeff < 0.0) fail("energy wind_coeff must be >= 0");
    if (!(cfg.energy.base_energy > 0.0)) fail("energy base_energy must be > 0");
    if (cfg.reward.wc < 0.0) fail("reward wc must be >= 0");
    if (cfg.reward.wt < 0.0) fail("reward wt must be >= 0");
    if (cfg.reward.crash_adjust > 0.0) fail("reward crash_adjust must be <= 0");
    if (cfg.reward.target_adjust < 0.0) fail("reward target_adjust must be >= 0");
    if (cfg.reward.max_steps_adjust > 0.0) fail("reward max_steps_adjust must be <= 0");
    if (cfg.reward.battery_adjust > 0.0) fail("reward battery_adjust must be <= 0");
    if (cfg.reward.no_move_penalty > 0.0) fail("reward no_move_penalty must be <= 0");
    if (cfg.curriculum.empty()) fail("curriculum must have at least one stage");
    if (cfg.start_stage < 0 || cfg.start_stage >= static_cast<int>(cfg.curriculum.size()))
        fail("start_stage must name an existing curriculum stage");
    double prev_dist = 0.0;
    for (std::size_t i = 0; i < cfg.curriculum.size(); ++i) {
        const CurriculumStage& st = cfg.curriculum[i];
        if (!(st.max_target_distance > 0.0)) fail("curriculum stage distances must be > 0");
        if (st.max_target_distance < prev_dist) fail("curriculum stage distances must be non-decreasing");
        prev_dist = st.max_target_distance;
        if (!(st.advance_success_rate > 0.0) || st.advance_success_rate > 1.0)
            fail("curriculum advance_success_rate must be in (0, 1]");
        if (st.advance_window < 1) fail("curriculum advance_window must be >= 1");
    }
}

Trainer::Trainer(World world, TrainConfig cfg) : Trainer(std::move(world), std::move(cfg), QNetwork{}) {}

Trainer::Trainer(World world, TrainConfig cfg, QNetwork initial)
    : world_(checked_world(std::move(world))),
      calm_world_(without_wind(world_)),
      cfg_(checked_config(std::move(cfg))),
      sampler_(world_),
      feature_cfg_{cfg_.clearance_cap, cfg_.max_steps},
      memory_(cfg_.replay_capacity),
      episode_(cfg_.start_episode),
      stage_(cfg_.start_stage) {
    if (!in_bounds(world_, cfg_.start_pos) || collides(world_, cfg_.start_pos))
        throw WorldError("start position is blocked or out of bounds");

    if (initial.empty()) {
        std::vector<int> sizes;
        sizes.push_back(kFeatureDim);
        sizes.insert(sizes.end(), cfg_.hidden_layers.begin(), cfg_.hidden_layers.end());
        sizes.push_back(kNumActions);
        Rng init_rng(derive_seed(cfg_.seed, Stream::NetInit, 0));
        net_ = QNetwork::init(sizes, init_rng);
    } else {
        if (initial.input_dim() != kFeatureDim || initial.output_dim() != kNumActions)
            throw ConfigError("config: resumed network shape does not match the observation/action layout");
        net_ = std::move(initial);
    }
    target_ = sync_target(net_);
}

void Trainer::learn_step(Rng& rng, int episode, int step) {
    const std::vector<const Transition*> batch = memory_.sample(static_cast<std::size_t>(cfg_.batch_size), rng);
    const std::vector<double> ys = bellman_targets(batch, target_, cfg_.gamma);

    std::vector<QTrainSample> samples(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        samples[i] = QTrainSample{batch[i]->phi_t, static_cast<int>(batch[i]->action), ys[i]};

    GradResult grad = loss_and_grad(net_, samples);
    if (!std::isfinite(grad.loss)) {
        std::ostringstream msg;
        msg << "training diverged: non-finite loss at episode " << episode << " step " << step
            << " (gradient step " << gradient_steps_ << ", parameter norm " << param_norm(net_) << ")";
        throw NumericError(msg.str());
    }
    sgd_step(net_, grad.grad, cfg_.lr);
    ++gradient_steps_;
    if (gradient_steps_ % static_cast<std::uint64_t>(cfg_.target_sync_interval) == 0) target_ = sync_target(net_);
}

void Trainer::update_curriculum(bool success) {
    const CurriculumStage& st = cfg_.curriculum[static_cast<std::size_t>(stage_)];
    stage_window_.push_back(success);
    if (static_cast<int>(stage_window_.size()) > st.advance_window) stage_window_.erase(stage_window_.begin());
    if (static_cast<int>(stage_window_.size()) < st.advance_window) return;
    if (stage_ + 1 >= static_cast<int>(cfg_.curriculum.size())) return;

    const int successes = static_cast<int>(std::count(stage_window_.begin(), stage_window_.end(), true));
    if (static_cast<double>(successes) / st.advance_window >= st.advance_success_rate) {
        ++stage_;
        stage_window_.clear();
        log_info("curriculum advanced to stage " + std::to_string(stage_));
    }
}

EpisodeResult Trainer::run_episode() {
    const int episode = episode_;
    const double eps = epsilon_at(cfg_.schedule, episode);
    const CurriculumStage& st = cfg_.curriculum[static_cast<std::size_t>(stage_)];
    const World& w = st.wind_enabled ? world_ : calm_world_;

    Rng rng(derive_seed(cfg_.seed, Stream::Episode, static_cast<std::uint64_t>(episode)));
    const Vec3 target = sampler_.sample_within(rng, cfg_.start_pos, st.max_target_distance);
    UavState s = make_initial_state(cfg_.start_pos, target, cfg_.energy);

    EpisodeResult result;
    result.episode = episode;
    result.epsilon = eps;
    result.stage = stage_;

    std::optional<Action> prev_action;
    Termination term = Termination::Running;
    while (true) {
        const FeatureVector fv = phi(w, s, feature_cfg_);
        const Action a = select_action(net_, fv, eps, rng);
        if (prev_action && *prev_action != a) ++result.turns;
        prev_action = a;

        const StepOutcome outcome = apply_action(w, s, a, cfg_.energy, cfg_.max_steps, rng);
        const RewardBreakdown rb = total_reward(outcome, s, cfg_.reward);
        result.score += rb.r_total;

        Transition t;
        t.phi_t = fv;
        t.action = a;
        t.reward = rb.r_total;
        t.terminal = outcome.termination != Termination::Running;
        if (outcome.termination == Termination::Crash)
            t.phi_next = FeatureVector(kFeatureDim, 0.0);  // never read: terminal targets ignore phi_next
        else
            t.phi_next = phi(w, outcome.next_state, feature_cfg_);
        memory_.push(std::move(t));

        if (memory_.size() >= static_cast<std::size_t>(cfg_.warmup_transitions))
            learn_step(rng, episode, outcome.next_state.steps_taken);

        s = outcome.next_state;
        if (outcome.termination != Termination::Running) {
            term = outcome.termination;
            break;
        }
    }

    result.steps = s.steps_taken;
    result.termination = term;
    result.final_distance = s.prev_target_distance;
    result.energy_used = s.used_energy;

    update_curriculum(term == Termination::ReachedTarget);
    ++episode_;
    return result;
}

std::vector<EpisodeResult> train(const World& world, const TrainConfig& cfg, const TrainHooks& hooks,
                                 const QNetwork* initial) {
    Trainer trainer = initial ? Trainer(world, cfg, *initial) : Trainer(world, cfg);
    std::vector<EpisodeResult> results;
    results.reserve(static_cast<std::size_t>(cfg.episodes));
    for (int i = 0; i < cfg.episodes; ++i) {
        EpisodeResult r = trainer.run_episode();
        if (hooks.on_episode) hooks.on_episode(r);
        if ((i + 1) % 100 == 0)
            log_info("episode " + std::to_string(r.episode) + " score " + std::to_string(r.score) + " stage " +
                     std::to_string(r.stage));
        results.push_back(r);
        if (hooks.on_checkpoint && (i + 1) % cfg.checkpoint_interval == 0)
            hooks.on_checkpoint(trainer.net(), cfg.start_episode + i + 1, false);
    }
    if (hooks.on_checkpoint) hooks.on_checkpoint(trainer.net(), cfg.start_episode + cfg.episodes, true);
    return results;
}

}  // namespace plantnav
