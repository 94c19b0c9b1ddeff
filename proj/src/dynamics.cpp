#include "plantnav/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "plantnav/errors.hpp"

namespace plantnav {
namespace {

int clamp_axis(int v, int dim) { return v < 0 ? 0 : (v >= dim ? dim - 1 : v); }

}  // namespace

Vec3 action_delta(Action a) {
    switch (a) {
        case Action::PlusX: return {1, 0, 0};
        case Action::MinusX: return {-1, 0, 0};
        case Action::PlusY: return {0, 1, 0};
        case Action::MinusY: return {0, -1, 0};
        case Action::PlusZ: return {0, 0, 1};
        case Action::MinusZ: return {0, 0, -1};
    }
    throw std::logic_error("action_delta: invalid action");
}

const char* action_name(Action a) {
    switch (a) {
        case Action::PlusX: return "+x";
        case Action::MinusX: return "-x";
        case Action::PlusY: return "+y";
        case Action::MinusY: return "-y";
        case Action::PlusZ: return "+z";
        case Action::MinusZ: return "-z";
    }
    throw std::logic_error("action_name: invalid action");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Running: return "running";
        case Termination::Crash: return "crash";
        case Termination::ReachedTarget: return "reached_target";
        case Termination::MaxSteps: return "max_steps";
        case Termination::BatteryOut: return "battery_out";
    }
    throw std::logic_error("termination_name: invalid termination");
}

UavState make_initial_state(Vec3 start, Vec3 target, const EnergyConfig& energy) {
    UavState s;
    s.pos = start;
    s.target = target;
    s.base_energy = energy.base_energy;
    s.prev_target_distance = euclidean_distance(start, target);
    return s;
}

double energy_cost(Action a, double wind_speed, const EnergyConfig& energy) {
    double cost = energy.base_cost + energy.wind_coeff * wind_speed;
    if (a == Action::PlusZ) cost += energy.climb_bonus;
    return cost;
}

double drift_probability(const World& w, Vec3 pos) {
    const double speed = norm(wind_at(w, pos));
    return std::min(1.0, speed / w.wind.drift_reference_speed);
}

Termination check_termination(const World& w, const UavState& s, int max_steps) {
    if (collides(w, s.pos)) return Termination::Crash;
    if (s.pos == s.target) return Termination::ReachedTarget;
    if (s.used_energy >= s.base_energy) return Termination::BatteryOut;
    if (s.steps_taken >= max_steps) return Termination::MaxSteps;
    return Termination::Running;
}

StepOutcome apply_action(const World& w, const UavState& s, Action a, const EnergyConfig& energy, int max_steps,
                         Rng& rng) {
    if (check_termination(w, s, max_steps) != Termination::Running)
        throw std::logic_error("apply_action: state is already terminal");

    const Vec3d wind = wind_at(w, s.pos);
    const double wind_speed = norm(wind);

    Vec3 displacement = action_delta(a);
    const double p_drift = std::min(1.0, wind_speed / w.wind.drift_reference_speed);
    if (p_drift > 0.0 && rng.uniform() < p_drift) {
        // Wind shoves one cell along its (horizontal, unit) direction.
        displacement.x += static_cast<int>(std::lround(w.wind.direction.x));
        displacement.y += static_cast<int>(std::lround(w.wind.direction.y));
    }

    const Vec3 raw = s.pos + displacement;
    const Vec3 clamped{clamp_axis(raw.x, w.dims.x), clamp_axis(raw.y, w.dims.y), clamp_axis(raw.z, w.dims.z)};

    StepOutcome out;
    out.next_state = s;
    out.next_state.pos = clamped;
    out.next_state.last_move = a;
    out.next_state.steps_taken = s.steps_taken + 1;
    out.next_state.used_energy = s.used_energy + energy_cost(a, wind_speed, energy);
    out.next_state.prev_target_distance = euclidean_distance(clamped, s.target);
    out.moved = !(clamped == s.pos);
    out.termination = check_termination(w, out.next_state, max_steps);
    return out;
}

}  // namespace plantnav
