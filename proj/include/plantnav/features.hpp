#pragma once

#include <cstdint>
#include <vector>

#include "plantnav/dynamics.hpp"
#include "plantnav/world.hpp"

namespace plantnav {

inline constexpr int kFeatureDim = 18;

// Variable-length so replay and the network also accept synthetic encodings
// in tests; phi itself always produces kFeatureDim entries.
using FeatureVector = std::vector<double>;

struct FeatureConfig {
    int clearance_cap = 10;  // clearance saturates here before scaling
    int max_steps = 400;     // denominator of the step-budget fraction

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Observation layout (all entries in [-1, 1], see docs/features.md):
//   0-2   position / dims
//   3-5   target / dims
//   6-8   (target - position) / dims
//   9     remaining battery fraction, clamped to [0, 1]
//   10    steps taken / max_steps, clamped to [0, 1]
//   11    min(clearance, cap) / cap
//   12-17 neighbour blocked flags in action order (+x, -x, +y, -y, +z, -z);
//         out of bounds counts as blocked
FeatureVector phi(const World& w, const UavState& s, const FeatureConfig& cfg);

// Fingerprint of the layout above; stored in checkpoints so stale weight
// files are rejected instead of silently misread.
std::uint64_t feature_layout_hash();

}  // namespace plantnav
