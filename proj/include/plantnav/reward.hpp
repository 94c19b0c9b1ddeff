#pragma once

#include "plantnav/dynamics.hpp"

namespace plantnav {

struct RewardConfig {
    double wc = 1.0;   // altitude-alignment weight
    double wt = 10.0;  // approach weight per km closed
    double crash_adjust = -500.0;
    double target_adjust = 500.0;
    double max_steps_adjust = -30.0;
    double battery_adjust = -30.0;
    double no_move_penalty = -5.0;

    friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

struct RewardBreakdown {
    double r_climb = 0.0;
    double r_target = 0.0;
    double no_move = 0.0;
    double terminal_adjust = 0.0;
    double r_total = 0.0;  // always the exact sum of the four components
};

// wc * (z - target_z), evaluated on the post-move altitude.
double climb_reward(double z, double target_z, double wc);

// wt * (previous distance - current distance), Euclidean km.
double target_reward(double prev_distance, double curr_distance, double wt);

// Additive adjustment for the step's termination; zero while running.
double terminal_adjustment(Termination t, const RewardConfig& cfg);

// Full decomposition for the step that produced `outcome` from `prev`.
RewardBreakdown total_reward(const StepOutcome& outcome, const UavState& prev, const RewardConfig& cfg);

}  // namespace plantnav
