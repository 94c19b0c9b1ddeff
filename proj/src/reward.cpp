#include "plantnav/reward.hpp"

namespace plantnav {

double climb_reward(double z, double target_z, double wc) { return wc * (z - target_z); }

double target_reward(double prev_distance, double curr_distance, double wt) {
    return wt * (prev_distance - curr_distance);
}

double terminal_adjustment(Termination t, const RewardConfig& cfg) {
    switch (t) {
        case Termination::Running: return 0.0;
        case Termination::Crash: return cfg.crash_adjust;
        case Termination::ReachedTarget: return cfg.target_adjust;
        case Termination::MaxSteps: return cfg.max_steps_adjust;
        case Termination::BatteryOut: return cfg.battery_adjust;
    }
    return 0.0;
}

RewardBreakdown total_reward(const StepOutcome& outcome, const UavState& prev, const RewardConfig& cfg) {
    const UavState& next = outcome.next_state;
    RewardBreakdown r;
    r.r_climb = climb_reward(next.pos.z, next.target.z, cfg.wc);
    r.r_target = target_reward(prev.prev_target_distance, next.prev_target_distance, cfg.wt);
    r.no_move = outcome.moved ? 0.0 : cfg.no_move_penalty;
    r.terminal_adjust = terminal_adjustment(outcome.termination, cfg);
    r.r_total = r.r_climb + r.r_target + r.no_move + r.terminal_adjust;
    return r;
}

}  // namespace plantnav
