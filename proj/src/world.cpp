#include "plantnav/world.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plantnav/errors.hpp"

namespace plantnav {
namespace {

using nlohmann::json;

// Inclusive cell interval covered by one obstacle axis. Integer division
// matches the doubled-integer collision test for both parities of size.
struct CellSpan {
    int lo;
    int hi;
};

CellSpan obstacle_span(int center, int size) { return {center - size / 2, center + size / 2}; }

[[noreturn]] void world_fail(const std::string& msg) { throw WorldError("world: " + msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* context) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) world_fail(std::string(context) + ": unknown key \"" + item.key() + "\"");
    }
}

const json& get_field(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end()) world_fail(std::string(context) + ": missing key \"" + key + "\"");
    return *it;
}

int get_int(const json& j, const char* key, const char* context) {
    const json& v = get_field(j, key, context);
    if (!v.is_number_integer()) world_fail(std::string(context) + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

double get_double(const json& j, const char* key, const char* context) {
    const json& v = get_field(j, key, context);
    if (!v.is_number()) world_fail(std::string(context) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

Vec3 get_vec3(const json& j, const char* key, const char* context) {
    const json& v = get_field(j, key, context);
    if (!v.is_object()) world_fail(std::string(context) + ": \"" + key + "\" must be an object");
    const std::string ctx = std::string(context) + "." + key;
    check_keys(v, {"x", "y", "z"}, ctx.c_str());
    return {get_int(v, "x", ctx.c_str()), get_int(v, "y", ctx.c_str()), get_int(v, "z", ctx.c_str())};
}

json vec3_to_json(Vec3 v) { return json{{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

}  // namespace

void validate_world(const World& w) {
    if (w.dims.x < 1 || w.dims.y < 1 || w.dims.z < 1) world_fail("dims must be positive in every axis");
    if (w.target_clearance < 1) world_fail("target_clearance must be >= 1");

    for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
        const BoxObstacle& b = w.obstacles[i];
        const std::string name = "obstacle " + std::to_string(i);
        if (b.size.x < 1 || b.size.y < 1 || b.size.z < 1) world_fail(name + ": size must be >= 1 per axis");
        const int cs[3] = {b.center.x, b.center.y, b.center.z};
        const int ss[3] = {b.size.x, b.size.y, b.size.z};
        const int ds[3] = {w.dims.x, w.dims.y, w.dims.z};
        for (int axis = 0; axis < 3; ++axis) {
            // Box must fit inside the cell grid: center +- size/2 within [0, dims-1].
            if (2 * cs[axis] - ss[axis] < 0 || 2 * cs[axis] + ss[axis] > 2 * (ds[axis] - 1))
                world_fail(name + ": extends outside the space");
        }
    }

    const WindParams& wind = w.wind;
    if (wind.base_speed < 0.0) world_fail("wind.base_speed must be >= 0");
    if (wind.height_gain < 0.0) world_fail("wind.height_gain must be >= 0");
    if (!(wind.drift_reference_speed > 0.0)) world_fail("wind.drift_reference_speed must be > 0");
    if (wind.direction.z != 0.0) world_fail("wind.direction must be horizontal");
    if (std::abs(norm(wind.direction) - 1.0) > 1e-9) world_fail("wind.direction must be unit length");

    // At least one cell must qualify as a target.
    for (int x = 0; x < w.dims.x; ++x)
        for (int y = 0; y < w.dims.y; ++y)
            for (int z = 0; z < w.dims.z; ++z) {
                const Vec3 p{x, y, z};
                if (!collides(w, p) && obstacle_clearance(w, p) >= w.target_clearance) return;
            }
    world_fail("no free cell satisfies target_clearance");
}

bool in_bounds(const World& w, Vec3 p) {
    return p.x >= 0 && p.x < w.dims.x && p.y >= 0 && p.y < w.dims.y && p.z >= 0 && p.z < w.dims.z;
}

bool collides(const World& w, Vec3 p) {
    if (!in_bounds(w, p)) world_fail("collides: position out of bounds");
    for (const BoxObstacle& b : w.obstacles) {
        // Doubled-integer test avoids fractional box faces.
        if (2 * std::abs(p.x - b.center.x) <= b.size.x && 2 * std::abs(p.y - b.center.y) <= b.size.y &&
            2 * std::abs(p.z - b.center.z) <= b.size.z)
            return true;
    }
    return false;
}

Vec3d wind_at(const World& w, Vec3 p) {
    if (!in_bounds(w, p)) world_fail("wind_at: position out of bounds");
    const double speed = w.wind.base_speed + w.wind.height_gain * p.z;
    return {w.wind.direction.x * speed, w.wind.direction.y * speed, w.wind.direction.z * speed};
}

int obstacle_clearance(const World& w, Vec3 p) {
    if (collides(w, p)) world_fail("obstacle_clearance: position collides");
    // Nearest out-of-bounds cell lies just past the closest face.
    int best = std::min({p.x + 1, w.dims.x - p.x, p.y + 1, w.dims.y - p.y, p.z + 1, w.dims.z - p.z});
    for (const BoxObstacle& b : w.obstacles) {
        const CellSpan sx = obstacle_span(b.center.x, b.size.x);
        const CellSpan sy = obstacle_span(b.center.y, b.size.y);
        const CellSpan sz = obstacle_span(b.center.z, b.size.z);
        const int dx = std::max({sx.lo - p.x, p.x - sx.hi, 0});
        const int dy = std::max({sy.lo - p.y, p.y - sy.hi, 0});
        const int dz = std::max({sz.lo - p.z, p.z - sz.hi, 0});
        best = std::min(best, std::max({dx, dy, dz}));
    }
    return best;
}

Vec3 sample_target(const World& w, Rng& rng) { return TargetSampler(w).sample(rng); }

TargetSampler::TargetSampler(const World& w) {
    for (int x = 0; x < w.dims.x; ++x)
        for (int y = 0; y < w.dims.y; ++y)
            for (int z = 0; z < w.dims.z; ++z) {
                const Vec3 p{x, y, z};
                if (!collides(w, p) && obstacle_clearance(w, p) >= w.target_clearance) cells_.push_back(p);
            }
    if (cells_.empty()) world_fail("no free cell satisfies target_clearance");
}

Vec3 TargetSampler::sample(Rng& rng) const { return cells_[rng.below(cells_.size())]; }

Vec3 TargetSampler::sample_within(Rng& rng, Vec3 origin, double max_distance) const {
    std::vector<Vec3> eligible;
    for (const Vec3& c : cells_)
        if (!(c == origin) && euclidean_distance(c, origin) <= max_distance) eligible.push_back(c);
    if (eligible.empty()) world_fail("no qualifying target cell within the requested distance");
    return eligible[rng.below(eligible.size())];
}

World world_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        world_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) world_fail("document root must be an object");
    check_keys(j, {"dims", "obstacles", "wind", "target_clearance"}, "world");

    World w;
    w.dims = get_vec3(j, "dims", "world");
    w.target_clearance = get_int(j, "target_clearance", "world");

    const json& obstacles = get_field(j, "obstacles", "world");
    if (!obstacles.is_array()) world_fail("\"obstacles\" must be an array");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const json& ob = obstacles[i];
        const std::string ctx = "obstacle " + std::to_string(i);
        if (!ob.is_object()) world_fail(ctx + ": must be an object");
        check_keys(ob, {"center", "size", "color"}, ctx.c_str());
        BoxObstacle box;
        box.center = get_vec3(ob, "center", ctx.c_str());
        box.size = get_vec3(ob, "size", ctx.c_str());
        const json& color = get_field(ob, "color", ctx.c_str());
        if (!color.is_string()) world_fail(ctx + ": \"color\" must be a string");
        box.color = color.get<std::string>();
        w.obstacles.push_back(std::move(box));
    }

    const json& wind = get_field(j, "wind", "world");
    if (!wind.is_object()) world_fail("\"wind\" must be an object");
    check_keys(wind, {"base_speed", "direction", "height_gain", "drift_reference_speed"}, "wind");
    w.wind.base_speed = get_double(wind, "base_speed", "wind");
    w.wind.height_gain = get_double(wind, "height_gain", "wind");
    w.wind.drift_reference_speed = get_double(wind, "drift_reference_speed", "wind");
    const json& dir = get_field(wind, "direction", "wind");
    if (!dir.is_object()) world_fail("wind.direction must be an object");
    check_keys(dir, {"x", "y", "z"}, "wind.direction");
    w.wind.direction = {get_double(dir, "x", "wind.direction"), get_double(dir, "y", "wind.direction"),
                        get_double(dir, "z", "wind.direction")};

    validate_world(w);
    return w;
}

std::string world_to_json_text(const World& w) {
    json obstacles = json::array();
    for (const BoxObstacle& b : w.obstacles)
        obstacles.push_back(json{{"center", vec3_to_json(b.center)}, {"size", vec3_to_json(b.size)}, {"color", b.color}});
    const json j{
        {"dims", vec3_to_json(w.dims)},
        {"obstacles", obstacles},
        {"wind",
         {{"base_speed", w.wind.base_speed},
          {"direction", {{"x", w.wind.direction.x}, {"y", w.wind.direction.y}, {"z", w.wind.direction.z}}},
          {"height_gain", w.wind.height_gain},
          {"drift_reference_speed", w.wind.drift_reference_speed}}},
        {"target_clearance", w.target_clearance},
    };
    return j.dump(2) + "\n";
}

World load_world(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) world_fail("cannot open world file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return world_from_json_text(buf.str());
}

void save_world(const World& w, const std::filesystem::path& path) {
    validate_world(w);
    std::ofstream out(path, std::ios::binary);
    if (!out) world_fail("cannot write world file: " + path.string());
    out << world_to_json_text(w);
    if (!out) world_fail("failed writing world file: " + path.string());
}

World default_world() {
    World w;
    w.dims = {100, 100, 22};
    w.obstacles = {
        {{30, 30, 6}, {12, 12, 12}, "silver"},
        {{60, 55, 9}, {10, 14, 18}, "slategray"},
        {{45, 70, 3}, {16, 10, 6}, "firebrick"},
    };
    w.wind = WindParams{};  // 30 km/h ground wind along +x
    w.target_clearance = 3;
    return w;
}

}  // namespace plantnav
