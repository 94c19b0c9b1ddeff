#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "plantnav/features.hpp"
#include "plantnav/world.hpp"

using namespace plantnav;

namespace {

World small_empty_world() {
    World w;
    w.dims = {10, 10, 5};
    w.obstacles.clear();
    w.wind.base_speed = 0.0;
    w.wind.height_gain = 0.0;
    return w;
}

UavState fresh_state(Vec3 pos, Vec3 target) {
    UavState s;
    s.pos = pos;
    s.target = target;
    s.base_energy = 600.0;
    s.used_energy = 0.0;
    s.steps_taken = 0;
    s.prev_target_distance = euclidean_distance(pos, target);
    return s;
}

}  // namespace

TEST_CASE("feature vector layout is frozen") {
    const World w = small_empty_world();
    const UavState s = fresh_state({2, 3, 1}, {7, 3, 4});
    const FeatureVector f = phi(w, s, FeatureConfig{});

    REQUIRE(f.size() == kFeatureDim);
    REQUIRE(kFeatureDim == 18);

    // Every entry here is a correctly rounded quotient, so == is exact.
    const std::vector<double> expected = {
        0.2, 0.3, 0.2,        // position / dims
        0.7, 0.3, 0.8,        // target / dims
        0.5, 0.0, 0.6,        // (target - position) / dims
        1.0,                  // battery fraction
        0.0,                  // step fraction
        0.2,                  // clearance 2 / cap 10
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,  // nothing blocked
    };
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        REQUIRE(f[i] == expected[i]);
    }
}

TEST_CASE("blocked flags see walls and obstacles in action order") {
    World w = small_empty_world();

    SUBCASE("corner cell flags out-of-bounds directions") {
        const FeatureVector f = phi(w, fresh_state({0, 0, 0}, {7, 3, 4}), FeatureConfig{});
        CHECK(f[12] == 0.0);  // +x open
        CHECK(f[13] == 1.0);  // -x wall
        CHECK(f[14] == 0.0);  // +y open
        CHECK(f[15] == 1.0);  // -y wall
        CHECK(f[16] == 0.0);  // +z open
        CHECK(f[17] == 1.0);  // -z floor
    }

    SUBCASE("an adjacent box blocks exactly the direction it occupies") {
        w.obstacles.push_back({{6, 3, 1}, {1, 1, 1}, "gray"});
        const FeatureVector f = phi(w, fresh_state({5, 3, 1}, {9, 9, 4}), FeatureConfig{});
        CHECK(f[12] == 1.0);  // +x into the box
        CHECK(f[13] == 0.0);
        CHECK(f[14] == 0.0);
        CHECK(f[15] == 0.0);
        CHECK(f[16] == 0.0);
        CHECK(f[17] == 0.0);
    }
}

TEST_CASE("battery and step fractions clamp to the unit interval") {
    const World w = small_empty_world();
    UavState s = fresh_state({2, 3, 1}, {7, 3, 4});
    FeatureConfig cfg;
    cfg.max_steps = 100;

    s.used_energy = 150.0;
    s.base_energy = 600.0;
    s.steps_taken = 25;
    FeatureVector f = phi(w, s, cfg);
    CHECK(f[9] == 0.75);
    CHECK(f[10] == 0.25);

    s.used_energy = 700.0;  // overdrawn
    s.steps_taken = 140;    // past the cap
    f = phi(w, s, cfg);
    CHECK(f[9] == 0.0);
    CHECK(f[10] == 1.0);
}

TEST_CASE("clearance feature saturates at the cap") {
    World w;
    w.dims = {100, 100, 60};
    w.obstacles.clear();
    w.wind.base_speed = 0.0;
    w.wind.height_gain = 0.0;

    // Mid-air cell far from every wall: raw clearance exceeds the cap.
    const FeatureVector f = phi(w, fresh_state({50, 50, 30}, {10, 10, 5}), FeatureConfig{});
    CHECK(f[11] == 1.0);
}

TEST_CASE("layout hash is stable and frozen") {
    CHECK(feature_layout_hash() == feature_layout_hash());
    CHECK(feature_layout_hash() == 0x9e5c4e8072664dd2ull);
}
