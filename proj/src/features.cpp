#include "plantnav/features.hpp"

#include <algorithm>
#include <string_view>

namespace plantnav {

FeatureVector phi(const World& w, const UavState& s, const FeatureConfig& cfg) {
    FeatureVector f(kFeatureDim);
    const double dx = w.dims.x;
    const double dy = w.dims.y;
    const double dz = w.dims.z;

    f[0] = s.pos.x / dx;
    f[1] = s.pos.y / dy;
    f[2] = s.pos.z / dz;
    f[3] = s.target.x / dx;
    f[4] = s.target.y / dy;
    f[5] = s.target.z / dz;
    f[6] = (s.target.x - s.pos.x) / dx;
    f[7] = (s.target.y - s.pos.y) / dy;
    f[8] = (s.target.z - s.pos.z) / dz;

    const double remaining = (s.base_energy - s.used_energy) / s.base_energy;
    f[9] = std::clamp(remaining, 0.0, 1.0);
    f[10] = std::clamp(static_cast<double>(s.steps_taken) / cfg.max_steps, 0.0, 1.0);

    const int clearance = obstacle_clearance(w, s.pos);
    f[11] = static_cast<double>(std::min(clearance, cfg.clearance_cap)) / cfg.clearance_cap;

    for (int a = 0; a < kNumActions; ++a) {
        const Vec3 q = s.pos + action_delta(static_cast<Action>(a));
        f[12 + a] = (!in_bounds(w, q) || collides(w, q)) ? 1.0 : 0.0;
    }
    return f;
}

std::uint64_t feature_layout_hash() {
    // FNV-1a over a description that changes whenever the layout does.
    constexpr std::string_view layout =
        "v1:pos/dims:3|target/dims:3|delta/dims:3|battery:1|steps:1|clearance/cap:1|blocked+x-x+y-y+z-z:6|dim=18";
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : layout) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace plantnav
