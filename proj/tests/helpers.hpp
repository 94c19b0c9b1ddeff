#pragma once

#include <string>

#include "plantnav/features.hpp"
#include "plantnav/qnet.hpp"
#include "plantnav/world.hpp"

namespace plantnav::testhelpers {

// Obstacle-free world with no wind; every cell qualifies as a target.
inline World calm_empty_world(Vec3 dims) {
    World w;
    w.dims = dims;
    w.obstacles.clear();
    w.wind.base_speed = 0.0;
    w.wind.height_gain = 0.0;
    w.target_clearance = 1;
    return w;
}

// Hand-wired linear policy that reads the normalized target-delta features
// and walks the largest remaining axis gap. In an empty world its greedy
// rollout reaches any target in exactly the Manhattan distance.
inline QNetwork axis_chase_net() {
    QNetwork net = QNetwork::zeros({kFeatureDim, kNumActions});
    std::span<double> p = net.parameters_mut();
    const std::size_t w0 = net.weight_offset(0);
    // Feature indices 6/7/8 hold (target - pos) / dims per axis.
    p[w0 + 0 * kFeatureDim + 6] = 1.0;   // +x
    p[w0 + 1 * kFeatureDim + 6] = -1.0;  // -x
    p[w0 + 2 * kFeatureDim + 7] = 1.0;   // +y
    p[w0 + 3 * kFeatureDim + 7] = -1.0;  // -y
    p[w0 + 4 * kFeatureDim + 8] = 1.0;   // +z
    p[w0 + 5 * kFeatureDim + 8] = -1.0;  // -z
    return net;
}

template <typename E, typename Fn>
std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "<no exception>";
}

}  // namespace plantnav::testhelpers
