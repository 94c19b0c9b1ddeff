#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plantnav/rng.hpp"
#include "plantnav/vec3.hpp"

namespace plantnav {

// Axis-aligned box. The box spans [center - size/2, center + size/2] in cell
// coordinates; a cell on the surface counts as colliding.
struct BoxObstacle {
    Vec3 center;
    Vec3 size;          // full extents in cells, each >= 1
    std::string color;  // render label, physics-inert

    friend bool operator==(const BoxObstacle&, const BoxObstacle&) = default;
};

struct WindParams {
    double base_speed = 30.0;              // km/h at ground level
    Vec3d direction{1.0, 0.0, 0.0};        // unit length, horizontal
    double height_gain = 0.5;              // km/h gained per km of altitude
    double drift_reference_speed = 120.0;  // km/h at which drift becomes certain

    friend bool operator==(const WindParams&, const WindParams&) = default;
};

struct World {
    Vec3 dims{100, 100, 22};
    std::vector<BoxObstacle> obstacles;
    WindParams wind;
    int target_clearance = 3;

    friend bool operator==(const World&, const World&) = default;
};

// Throws WorldError naming the first broken invariant (obstacles by index).
void validate_world(const World& w);

bool in_bounds(const World& w, Vec3 p);

// True iff p lies inside or on the face of some obstacle. Throws WorldError
// when p is out of bounds.
bool collides(const World& w, Vec3 p);

// Wind velocity (km/h) at p: direction scaled by base_speed + height_gain * z.
Vec3d wind_at(const World& w, Vec3 p);

// Chebyshev distance from a free cell to the nearest colliding or
// out-of-bounds cell; >= 1 on every free cell. Throws WorldError when p
// itself collides.
int obstacle_clearance(const World& w, Vec3 p);

// Uniform draw over free cells with clearance >= target_clearance.
Vec3 sample_target(const World& w, Rng& rng);

// Precomputed qualifying-cell list so repeated sampling stays cheap. Cells
// are kept in deterministic lexicographic scan order.
class TargetSampler {
public:
    explicit TargetSampler(const World& w);

    Vec3 sample(Rng& rng) const;

    // Restricts the draw to cells within max_distance (Euclidean) of origin,
    // excluding origin itself. Throws WorldError when nothing qualifies.
    Vec3 sample_within(Rng& rng, Vec3 origin, double max_distance) const;

    const std::vector<Vec3>& cells() const { return cells_; }

private:
    std::vector<Vec3> cells_;
};

// JSON world files. Loading validates; saving writes the canonical form
// (sorted keys, two-space indent, trailing newline).
World load_world(const std::filesystem::path& path);
void save_world(const World& w, const std::filesystem::path& path);
std::string world_to_json_text(const World& w);
World world_from_json_text(const std::string& text);

// The world bundled with the repository: 100x100x22 cells, three boxes of
// differing heights, 30 km/h ground wind.
World default_world();

}  // namespace plantnav
