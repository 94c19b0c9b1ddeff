#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "plantnav/dynamics.hpp"
#include "plantnav/errors.hpp"

using namespace plantnav;

namespace {

World calm_world(Vec3 dims) {
    World w;
    w.dims = dims;
    w.wind.base_speed = 0.0;
    w.wind.height_gain = 0.0;
    w.target_clearance = 1;
    return w;
}

World windy_world(Vec3 dims, double base_speed, double height_gain = 0.5) {
    World w = calm_world(dims);
    w.wind.base_speed = base_speed;
    w.wind.height_gain = height_gain;
    return w;
}

UavState live_state(Vec3 pos, Vec3 target, const EnergyConfig& energy = {}) {
    return make_initial_state(pos, target, energy);
}

}  // namespace

TEST_CASE("action deltas are the six axis unit moves") {
    CHECK(action_delta(Action::PlusX) == Vec3{1, 0, 0});
    CHECK(action_delta(Action::MinusX) == Vec3{-1, 0, 0});
    CHECK(action_delta(Action::PlusY) == Vec3{0, 1, 0});
    CHECK(action_delta(Action::MinusY) == Vec3{0, -1, 0});
    CHECK(action_delta(Action::PlusZ) == Vec3{0, 0, 1});
    CHECK(action_delta(Action::MinusZ) == Vec3{0, 0, -1});
    CHECK(std::string(action_name(Action::PlusX)) == "+x");
    CHECK(std::string(action_name(Action::MinusZ)) == "-z");
}

TEST_CASE("energy cost combines base, climb bonus, and wind load") {
    const EnergyConfig e;
    CHECK(energy_cost(Action::PlusX, 30.0, e) == 1.0 + 0.02 * 30.0);
    CHECK(energy_cost(Action::PlusX, 30.0, e) == doctest::Approx(1.6));
    CHECK(energy_cost(Action::PlusZ, 0.0, e) == 1.5);   // climb bonus, no wind
    CHECK(energy_cost(Action::MinusZ, 0.0, e) == 1.0);  // descending is not a climb
    CHECK(energy_cost(Action::PlusY, 10.0, e) == doctest::Approx(1.2));
}

TEST_CASE("drift probability is wind speed over the reference, capped at one") {
    const World w = windy_world({50, 50, 22}, 30.0);
    CHECK(drift_probability(w, {10, 10, 0}) == 0.25);  // 30 / 120
    CHECK(drift_probability(w, {10, 10, 20}) == doctest::Approx(40.0 / 120.0));

    const World strong = windy_world({50, 50, 22}, 200.0, 0.0);
    CHECK(drift_probability(strong, {10, 10, 0}) == 1.0);

    const World calm = calm_world({50, 50, 22});
    CHECK(drift_probability(calm, {10, 10, 20}) == 0.0);
}

TEST_CASE("drift occurs at the expected rate over many draws") {
    const World w = windy_world({50, 50, 22}, 30.0);  // p = 0.25 at z = 0
    const UavState s = live_state({20, 20, 0}, {40, 40, 10});
    Rng rng(123);
    const int trials = 10000;
    int drifted = 0;
    for (int i = 0; i < trials; ++i) {
        // +z keeps the intended move vertical, so any x displacement is drift.
        const StepOutcome out = apply_action(w, s, Action::PlusZ, {}, 400, rng);
        if (out.next_state.pos.x != s.pos.x) ++drifted;
    }
    const double fraction = static_cast<double>(drifted) / trials;
    // Binomial three-sigma bound around 0.25.
    const double sigma = std::sqrt(0.25 * 0.75 / trials);
    CHECK(std::abs(fraction - 0.25) < 3.0 * sigma);
}

TEST_CASE("drift displaces along the wind direction only") {
    World w = windy_world({50, 50, 22}, 200.0, 0.0);  // certain drift
    w.wind.direction = {0.0, 1.0, 0.0};
    const UavState s = live_state({20, 20, 5}, {40, 40, 10});
    Rng rng(7);
    const StepOutcome out = apply_action(w, s, Action::PlusX, {}, 400, rng);
    CHECK(out.next_state.pos == Vec3{21, 21, 5});  // +x intent, +y drift
}

TEST_CASE("drift never alters altitude") {
    const World w = windy_world({30, 30, 10}, 150.0);
    Rng rng(55);
    UavState s = live_state({5, 5, 3}, {25, 25, 9});
    for (int i = 0; i < 200 && !(s.pos == s.target); ++i) {
        const Action a = static_cast<Action>(rng.below(6));
        if (check_termination(w, s, 1000) != Termination::Running) break;
        const StepOutcome out = apply_action(w, s, a, {}, 1000, rng);
        const int az = action_delta(a).z;
        const int expected_z = std::clamp(s.pos.z + az, 0, w.dims.z - 1);
        REQUIRE(out.next_state.pos.z == expected_z);
        s = out.next_state;
    }
}

TEST_CASE("boundary moves clamp instead of crashing") {
    const World w = calm_world({10, 10, 5});
    const UavState s = live_state({0, 0, 0}, {5, 5, 2});
    Rng rng(1);

    const StepOutcome out = apply_action(w, s, Action::MinusX, {}, 400, rng);
    CHECK(out.next_state.pos == Vec3{0, 0, 0});
    CHECK_FALSE(out.moved);
    CHECK(out.termination == Termination::Running);
    CHECK(out.next_state.steps_taken == 1);
    CHECK(out.next_state.used_energy == 1.0);  // clamped moves still cost energy

    const StepOutcome down = apply_action(w, s, Action::MinusZ, {}, 400, rng);
    CHECK(down.next_state.pos.z == 0);
    CHECK_FALSE(down.moved);
}

TEST_CASE("a clamped move with drift can still move the vehicle") {
    World w = windy_world({10, 10, 5}, 200.0, 0.0);  // certain +x drift
    const UavState s = live_state({5, 0, 2}, {9, 9, 4});
    Rng rng(3);
    // -y clamps at the wall, drift still shifts +x: net movement.
    const StepOutcome out = apply_action(w, s, Action::MinusY, {}, 400, rng);
    CHECK(out.next_state.pos == Vec3{6, 0, 2});
    CHECK(out.moved);
}

TEST_CASE("stepping into an obstacle crashes") {
    World w = calm_world({10, 10, 5});
    w.obstacles.push_back({{5, 5, 2}, {2, 2, 2}, "red"});
    const UavState s = live_state({3, 5, 2}, {8, 8, 4});
    Rng rng(1);
    const StepOutcome out = apply_action(w, s, Action::PlusX, {}, 400, rng);
    CHECK(out.next_state.pos == Vec3{4, 5, 2});
    CHECK(out.termination == Termination::Crash);
}

TEST_CASE("reaching the target terminates with ReachedTarget") {
    const World w = calm_world({10, 10, 5});
    const UavState s = live_state({4, 5, 2}, {5, 5, 2});
    Rng rng(1);
    const StepOutcome out = apply_action(w, s, Action::PlusX, {}, 400, rng);
    CHECK(out.termination == Termination::ReachedTarget);
    CHECK(out.next_state.prev_target_distance == 0.0);
}

TEST_CASE("battery exhaustion terminates the episode") {
    const World w = calm_world({10, 10, 5});
    EnergyConfig e;
    e.base_energy = 3.0;  // three unit-cost steps
    UavState s = live_state({0, 0, 0}, {9, 9, 4}, e);
    Rng rng(1);
    for (int i = 0; i < 2; ++i) {
        const StepOutcome out = apply_action(w, s, Action::PlusX, e, 400, rng);
        REQUIRE(out.termination == Termination::Running);
        s = out.next_state;
    }
    const StepOutcome out = apply_action(w, s, Action::PlusY, e, 400, rng);
    CHECK(out.termination == Termination::BatteryOut);
    CHECK(out.next_state.used_energy == 3.0);
}

TEST_CASE("step limit terminates the episode") {
    const World w = calm_world({10, 10, 5});
    UavState s = live_state({0, 0, 0}, {9, 9, 4});
    Rng rng(1);
    StepOutcome out;
    for (int i = 0; i < 3; ++i) {
        out = apply_action(w, s, i % 2 == 0 ? Action::PlusX : Action::MinusX, {}, 3, rng);
        s = out.next_state;
    }
    CHECK(out.termination == Termination::MaxSteps);
    CHECK(s.steps_taken == 3);
}

TEST_CASE("termination priority is crash, target, battery, steps") {
    World w = calm_world({10, 10, 5});
    w.obstacles.push_back({{5, 5, 2}, {2, 2, 2}, "red"});

    UavState s;
    s.pos = {5, 5, 2};  // inside the obstacle
    s.target = {5, 5, 2};
    s.base_energy = 1.0;
    s.used_energy = 5.0;
    s.steps_taken = 100;
    CHECK(check_termination(w, s, 10) == Termination::Crash);

    s.pos = {1, 1, 1};
    s.target = {1, 1, 1};
    CHECK(check_termination(w, s, 10) == Termination::ReachedTarget);

    s.target = {8, 8, 3};
    CHECK(check_termination(w, s, 10) == Termination::BatteryOut);

    s.used_energy = 0.0;
    CHECK(check_termination(w, s, 10) == Termination::MaxSteps);

    s.steps_taken = 0;
    CHECK(check_termination(w, s, 10) == Termination::Running);
}

TEST_CASE("applying an action to a terminal state is a contract violation") {
    const World w = calm_world({10, 10, 5});
    UavState s = live_state({5, 5, 2}, {5, 5, 2});  // already at the target
    Rng rng(1);
    CHECK_THROWS_AS(apply_action(w, s, Action::PlusX, {}, 400, rng), std::logic_error);
}

TEST_CASE("calm-world steps are fully deterministic") {
    const World w = calm_world({10, 10, 5});
    const UavState s = live_state({3, 3, 2}, {8, 8, 4});
    Rng r1(111);
    Rng r2(999);  // different stream must not matter without wind
    const StepOutcome a = apply_action(w, s, Action::PlusY, {}, 400, r1);
    const StepOutcome b = apply_action(w, s, Action::PlusY, {}, 400, r2);
    CHECK(a.next_state == b.next_state);
    CHECK(a.moved == b.moved);
    CHECK(a.termination == b.termination);
}

TEST_CASE("the state keeps its distance-to-target cache consistent") {
    const World w = windy_world({20, 20, 10}, 60.0);
    Rng rng(8);
    UavState s = live_state({2, 2, 2}, {15, 15, 8});
    CHECK(s.prev_target_distance == euclidean_distance(s.pos, s.target));
    for (int i = 0; i < 50; ++i) {
        if (check_termination(w, s, 1000) != Termination::Running) break;
        const StepOutcome out = apply_action(w, s, static_cast<Action>(rng.below(6)), {}, 1000, rng);
        REQUIRE(out.next_state.prev_target_distance == euclidean_distance(out.next_state.pos, s.target));
        s = out.next_state;
    }
}

TEST_CASE("energy accumulates the per-step cost") {
    const World w = windy_world({20, 20, 10}, 30.0, 0.0);  // 30 km/h everywhere
    UavState s = live_state({2, 2, 2}, {15, 15, 8});
    Rng rng(8);
    const StepOutcome first = apply_action(w, s, Action::PlusZ, {}, 400, rng);
    CHECK(first.next_state.used_energy == (1.0 + 0.02 * 30.0) + 0.5);
    const StepOutcome second = apply_action(w, first.next_state, Action::PlusX, {}, 400, rng);
    CHECK(second.next_state.used_energy == doctest::Approx(first.next_state.used_energy + 1.6));
}
