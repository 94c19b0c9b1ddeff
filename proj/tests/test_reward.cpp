#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plantnav/reward.hpp"
#include "plantnav/rng.hpp"

using namespace plantnav;

namespace {

Termination termination_from_name(const std::string& name) {
    if (name == "running") return Termination::Running;
    if (name == "crash") return Termination::Crash;
    if (name == "reached_target") return Termination::ReachedTarget;
    if (name == "max_steps") return Termination::MaxSteps;
    if (name == "battery_out") return Termination::BatteryOut;
    FAIL("unknown termination name ", name);
    return Termination::Running;
}

struct GoldenRow {
    int z, target_z;
    double wc, prev_dist, curr_dist, wt;
    bool moved;
    Termination termination;
    double climb, target, no_move, terminal, total;
};

std::vector<GoldenRow> load_golden() {
    const std::string path = std::string(PLANTNAV_REPO_DIR) + "/tests/golden/rewards.csv";
    std::ifstream in(path);
    REQUIRE(in);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "z,target_z,wc,prev_dist,curr_dist,wt,moved,termination,climb,target,no_move,terminal,total");

    std::vector<GoldenRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<std::string> f;
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        REQUIRE(f.size() == 13);
        GoldenRow r;
        r.z = std::stoi(f[0]);
        r.target_z = std::stoi(f[1]);
        r.wc = std::stod(f[2]);
        r.prev_dist = std::stod(f[3]);
        r.curr_dist = std::stod(f[4]);
        r.wt = std::stod(f[5]);
        r.moved = f[6] == "1";
        r.termination = termination_from_name(f[7]);
        r.climb = std::stod(f[8]);
        r.target = std::stod(f[9]);
        r.no_move = std::stod(f[10]);
        r.terminal = std::stod(f[11]);
        r.total = std::stod(f[12]);
        rows.push_back(r);
    }
    return rows;
}

// Builds the prev-state / outcome pair a golden row describes.
RewardBreakdown breakdown_for(const GoldenRow& r, const RewardConfig& cfg) {
    UavState prev;
    prev.prev_target_distance = r.prev_dist;
    prev.target = {0, 0, r.target_z};

    StepOutcome outcome;
    outcome.next_state = prev;
    outcome.next_state.pos = {0, 0, r.z};
    outcome.next_state.prev_target_distance = r.curr_dist;
    outcome.moved = r.moved;
    outcome.termination = r.termination;
    return total_reward(outcome, prev, cfg);
}

}  // namespace

TEST_CASE("golden reward table reproduces every component exactly") {
    const std::vector<GoldenRow> rows = load_golden();
    REQUIRE(rows.size() >= 10);

    // The table must exhaust termination x moved.
    std::set<std::pair<int, bool>> combos;
    for (const GoldenRow& r : rows) combos.insert({static_cast<int>(r.termination), r.moved});
    CHECK(combos.size() == 10);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const GoldenRow& r = rows[i];
        CAPTURE(i);
        RewardConfig cfg;
        cfg.wc = r.wc;
        cfg.wt = r.wt;
        const RewardBreakdown b = breakdown_for(r, cfg);
        REQUIRE(b.r_climb == r.climb);
        REQUIRE(b.r_target == r.target);
        REQUIRE(b.no_move == r.no_move);
        REQUIRE(b.terminal_adjust == r.terminal);
        REQUIRE(b.r_total == r.total);
    }
}

TEST_CASE("climb reward is the weighted altitude gap") {
    CHECK(climb_reward(10.0, 5.0, 1.0) == 5.0);
    CHECK(climb_reward(3.0, 5.0, 1.0) == -2.0);
    CHECK(climb_reward(7.0, 7.0, 4.0) == 0.0);
    // Linear in the weight.
    CHECK(climb_reward(9.0, 4.0, 2.0) == 2.0 * climb_reward(9.0, 4.0, 1.0));
}

TEST_CASE("target reward pays for distance closed") {
    CHECK(target_reward(10.0, 9.0, 10.0) == 10.0);
    CHECK(target_reward(9.0, 10.0, 10.0) == -10.0);
    CHECK(target_reward(4.0, 4.0, 10.0) == 0.0);
    CHECK(target_reward(2.5, 2.0, 4.0) == 2.0);
}

TEST_CASE("terminal adjustments match their termination") {
    const RewardConfig cfg;
    CHECK(terminal_adjustment(Termination::Running, cfg) == 0.0);
    CHECK(terminal_adjustment(Termination::Crash, cfg) == -500.0);
    CHECK(terminal_adjustment(Termination::ReachedTarget, cfg) == 500.0);
    CHECK(terminal_adjustment(Termination::MaxSteps, cfg) == -30.0);
    CHECK(terminal_adjustment(Termination::BatteryOut, cfg) == -30.0);
}

TEST_CASE("the no-move penalty applies exactly when nothing moved") {
    const RewardConfig cfg;
    GoldenRow r{};
    r.z = 3;
    r.target_z = 3;
    r.prev_dist = 4.0;
    r.curr_dist = 4.0;
    r.wc = cfg.wc;
    r.wt = cfg.wt;
    r.termination = Termination::Running;

    r.moved = false;
    CHECK(breakdown_for(r, cfg).no_move == -5.0);
    CHECK(breakdown_for(r, cfg).r_total == -5.0);
    r.moved = true;
    CHECK(breakdown_for(r, cfg).no_move == 0.0);
    CHECK(breakdown_for(r, cfg).r_total == 0.0);
}

TEST_CASE("the total is always the exact sum of its components") {
    Rng rng(404);
    const RewardConfig cfg;
    for (int i = 0; i < 500; ++i) {
        GoldenRow r{};
        r.z = static_cast<int>(rng.below(22));
        r.target_z = static_cast<int>(rng.below(22));
        r.prev_dist = rng.uniform() * 100.0;
        r.curr_dist = rng.uniform() * 100.0;
        r.wc = cfg.wc;
        r.wt = cfg.wt;
        r.moved = rng.below(2) == 1;
        r.termination = static_cast<Termination>(rng.below(5));
        const RewardBreakdown b = breakdown_for(r, cfg);
        REQUIRE(b.r_total == b.r_climb + b.r_target + b.no_move + b.terminal_adjust);
    }
}
