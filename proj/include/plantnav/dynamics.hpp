#pragma once

#include <optional>

#include "plantnav/rng.hpp"
#include "plantnav/vec3.hpp"
#include "plantnav/world.hpp"

namespace plantnav {

// One-cell axis moves, encoded 0..5 for the network's output layer.
enum class Action : int {
    PlusX = 0,
    MinusX = 1,
    PlusY = 2,
    MinusY = 3,
    PlusZ = 4,
    MinusZ = 5,
};

inline constexpr int kNumActions = 6;

Vec3 action_delta(Action a);
const char* action_name(Action a);  // "+x", "-x", ...

struct EnergyConfig {
    double base_cost = 1.0;    // units per step
    double climb_bonus = 0.5;  // extra cost when ascending
    double wind_coeff = 0.02;  // cost per km/h of local wind speed
    double base_energy = 600.0;

    friend bool operator==(const EnergyConfig&, const EnergyConfig&) = default;
};

struct UavState {
    Vec3 pos;
    Vec3 target;
    std::optional<Action> last_move;
    int steps_taken = 0;
    double base_energy = 600.0;
    double used_energy = 0.0;
    double prev_target_distance = 0.0;  // Euclidean km, maintained by apply_action

    friend bool operator==(const UavState&, const UavState&) = default;
};

UavState make_initial_state(Vec3 start, Vec3 target, const EnergyConfig& energy);

enum class Termination {
    Running,
    Crash,
    ReachedTarget,
    MaxSteps,
    BatteryOut,
};

const char* termination_name(Termination t);  // "running", "crash", ...

struct StepOutcome {
    UavState next_state;
    bool moved = false;  // false when clamping cancelled the whole displacement
    Termination termination = Termination::Running;
};

// Energy drawn by one step: base cost, plus the climb bonus for +z moves,
// plus wind_coeff per km/h of local wind speed.
double energy_cost(Action a, double wind_speed, const EnergyConfig& energy);

// Probability that wind displaces the vehicle one cell this step.
double drift_probability(const World& w, Vec3 pos);

// Crash dominates ReachedTarget dominates BatteryOut dominates MaxSteps.
Termination check_termination(const World& w, const UavState& s, int max_steps);

// One simulation step: intended move, probabilistic wind drift, boundary
// clamp, energy bookkeeping, termination check. The state must be live.
StepOutcome apply_action(const World& w, const UavState& s, Action a, const EnergyConfig& energy, int max_steps,
                         Rng& rng);

}  // namespace plantnav
