#include "plantnav/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plantnav/errors.hpp"
#include "plantnav/features.hpp"
#include "plantnav/text.hpp"

namespace plantnav {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* context) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(std::string(context) + ": unknown key \"" + item.key() + "\"");
    }
}

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void read_int(const json& j, const char* key, const char* context, int& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number_integer()) fail(std::string(context) + ": \"" + key + "\" must be an integer");
        out = v->get<int>();
    }
}

void read_u64(const json& j, const char* key, const char* context, std::uint64_t& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
            fail(std::string(context) + ": \"" + key + "\" must be a non-negative integer");
        out = v->get<std::uint64_t>();
    }
}

void read_size(const json& j, const char* key, const char* context, std::size_t& out) {
    std::uint64_t v = out;
    read_u64(j, key, context, v);
    out = static_cast<std::size_t>(v);
}

void read_double(const json& j, const char* key, const char* context, double& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number()) fail(std::string(context) + ": \"" + key + "\" must be a number");
        out = v->get<double>();
    }
}

void read_bool(const json& j, const char* key, const char* context, bool& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_boolean()) fail(std::string(context) + ": \"" + key + "\" must be a boolean");
        out = v->get<bool>();
    }
}

void read_string(const json& j, const char* key, const char* context, std::string& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_string()) fail(std::string(context) + ": \"" + key + "\" must be a string");
        out = v->get<std::string>();
    }
}

void read_vec3(const json& j, const char* key, const char* context, Vec3& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_object()) fail(std::string(context) + ": \"" + key + "\" must be an object");
        const std::string ctx = std::string(context) + "." + key;
        check_keys(*v, {"x", "y", "z"}, ctx.c_str());
        read_int(*v, "x", ctx.c_str(), out.x);
        read_int(*v, "y", ctx.c_str(), out.y);
        read_int(*v, "z", ctx.c_str(), out.z);
    }
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("document root must be an object");
    check_keys(j,
               {"world", "out", "seed", "episodes", "start_episode", "start_stage", "max_steps", "gamma", "lr",
                "batch_size", "replay_capacity", "target_sync_interval", "warmup_transitions", "checkpoint_interval",
                "start_pos", "hidden_layers", "clearance_cap", "epsilon", "reward", "energy", "curriculum"},
               "run");

    RunConfig cfg;
    TrainConfig& t = cfg.train;
    read_string(j, "world", "run", cfg.world_path);
    read_string(j, "out", "run", cfg.out_dir);
    read_u64(j, "seed", "run", t.seed);
    read_int(j, "episodes", "run", t.episodes);
    read_int(j, "start_episode", "run", t.start_episode);
    read_int(j, "start_stage", "run", t.start_stage);
    read_int(j, "max_steps", "run", t.max_steps);
    read_double(j, "gamma", "run", t.gamma);
    read_double(j, "lr", "run", t.lr);
    read_int(j, "batch_size", "run", t.batch_size);
    read_size(j, "replay_capacity", "run", t.replay_capacity);
    read_int(j, "target_sync_interval", "run", t.target_sync_interval);
    read_int(j, "warmup_transitions", "run", t.warmup_transitions);
    read_int(j, "checkpoint_interval", "run", t.checkpoint_interval);
    read_vec3(j, "start_pos", "run", t.start_pos);
    read_int(j, "clearance_cap", "run", t.clearance_cap);

    if (const json* v = find(j, "hidden_layers")) {
        if (!v->is_array()) fail("\"hidden_layers\" must be an array of integers");
        t.hidden_layers.clear();
        for (const json& h : *v) {
            if (!h.is_number_integer()) fail("\"hidden_layers\" must be an array of integers");
            t.hidden_layers.push_back(h.get<int>());
        }
    }

    if (const json* v = find(j, "epsilon")) {
        if (!v->is_object()) fail("\"epsilon\" must be an object");
        check_keys(*v, {"start", "end", "decay_episodes"}, "epsilon");
        read_double(*v, "start", "epsilon", t.schedule.start);
        read_double(*v, "end", "epsilon", t.schedule.end);
        read_int(*v, "decay_episodes", "epsilon", t.schedule.decay_episodes);
    }

    if (const json* v = find(j, "reward")) {
        if (!v->is_object()) fail("\"reward\" must be an object");
        check_keys(*v,
                   {"wc", "wt", "crash_adjust", "target_adjust", "max_steps_adjust", "battery_adjust",
                    "no_move_penalty"},
                   "reward");
        read_double(*v, "wc", "reward", t.reward.wc);
        read_double(*v, "wt", "reward", t.reward.wt);
        read_double(*v, "crash_adjust", "reward", t.reward.crash_adjust);
        read_double(*v, "target_adjust", "reward", t.reward.target_adjust);
        read_double(*v, "max_steps_adjust", "reward", t.reward.max_steps_adjust);
        read_double(*v, "battery_adjust", "reward", t.reward.battery_adjust);
        read_double(*v, "no_move_penalty", "reward", t.reward.no_move_penalty);
    }

    if (const json* v = find(j, "energy")) {
        if (!v->is_object()) fail("\"energy\" must be an object");
        check_keys(*v, {"base_cost", "climb_bonus", "wind_coeff", "base_energy"}, "energy");
        read_double(*v, "base_cost", "energy", t.energy.base_cost);
        read_double(*v, "climb_bonus", "energy", t.energy.climb_bonus);
        read_double(*v, "wind_coeff", "energy", t.energy.wind_coeff);
        read_double(*v, "base_energy", "energy", t.energy.base_energy);
    }

    if (const json* v = find(j, "curriculum")) {
        if (!v->is_array()) fail("\"curriculum\" must be an array");
        t.curriculum.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& stage = (*v)[i];
            const std::string ctx = "curriculum stage " + std::to_string(i);
            if (!stage.is_object()) fail(ctx + ": must be an object");
            check_keys(stage, {"max_target_distance", "wind_enabled", "advance_success_rate", "advance_window"},
                       ctx.c_str());
            CurriculumStage cs;
            read_double(stage, "max_target_distance", ctx.c_str(), cs.max_target_distance);
            read_bool(stage, "wind_enabled", ctx.c_str(), cs.wind_enabled);
            read_double(stage, "advance_success_rate", ctx.c_str(), cs.advance_success_rate);
            read_int(stage, "advance_window", ctx.c_str(), cs.advance_window);
            t.curriculum.push_back(cs);
        }
    }

    validate_config(t);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_config_from_json_text(buf.str());
}

std::string run_config_to_json_text(const RunConfig& cfg) {
    const TrainConfig& t = cfg.train;
    json curriculum = json::array();
    for (const CurriculumStage& st : t.curriculum)
        curriculum.push_back(json{
            {"max_target_distance", st.max_target_distance},
            {"wind_enabled", st.wind_enabled},
            {"advance_success_rate", st.advance_success_rate},
            {"advance_window", st.advance_window},
        });
    const json j{
        {"world", cfg.world_path},
        {"out", cfg.out_dir},
        {"seed", t.seed},
        {"episodes", t.episodes},
        {"start_episode", t.start_episode},
        {"start_stage", t.start_stage},
        {"max_steps", t.max_steps},
        {"gamma", t.gamma},
        {"lr", t.lr},
        {"batch_size", t.batch_size},
        {"replay_capacity", t.replay_capacity},
        {"target_sync_interval", t.target_sync_interval},
        {"warmup_transitions", t.warmup_transitions},
        {"checkpoint_interval", t.checkpoint_interval},
        {"start_pos", {{"x", t.start_pos.x}, {"y", t.start_pos.y}, {"z", t.start_pos.z}}},
        {"hidden_layers", t.hidden_layers},
        {"clearance_cap", t.clearance_cap},
        {"epsilon",
         {{"start", t.schedule.start}, {"end", t.schedule.end}, {"decay_episodes", t.schedule.decay_episodes}}},
        {"reward",
         {{"wc", t.reward.wc},
          {"wt", t.reward.wt},
          {"crash_adjust", t.reward.crash_adjust},
          {"target_adjust", t.reward.target_adjust},
          {"max_steps_adjust", t.reward.max_steps_adjust},
          {"battery_adjust", t.reward.battery_adjust},
          {"no_move_penalty", t.reward.no_move_penalty}}},
        {"energy",
         {{"base_cost", t.energy.base_cost},
          {"climb_bonus", t.energy.climb_bonus},
          {"wind_coeff", t.energy.wind_coeff},
          {"base_energy", t.energy.base_energy}}},
        {"curriculum", curriculum},
    };
    return j.dump(2) + "\n";
}

std::string run_manifest_json(const RunConfig& cfg) {
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(feature_layout_hash()));
    const json manifest{
        {"config", json::parse(run_config_to_json_text(cfg))},
        {"seed", cfg.train.seed},
        {"versions",
         {{"tool", kToolVersion},
          {"checkpoint_format", kCheckpointFormat},
          {"feature_layout_hash", std::string(hash_hex)}}},
    };
    return manifest.dump(2) + "\n";
}

void write_run_manifest(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write manifest: " + path.string());
    out << run_manifest_json(cfg);
    if (!out) fail("failed writing manifest: " + path.string());
}

std::vector<std::pair<int, double>> read_episode_scores(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open episode log: " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail("episode log is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kEpisodeCsvHeader) fail("episode log has an unexpected header: " + path.string());

    std::vector<std::pair<int, double>> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 9)
            fail("episode log line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                 " fields, expected 9");
        try {
            std::size_t used = 0;
            const int episode = std::stoi(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing junk");
            const double score = std::stod(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("trailing junk");
            out.emplace_back(episode, score);
        } catch (const std::exception&) {
            fail("episode log line " + std::to_string(line_no) + " is not parseable");
        }
    }
    return out;
}

}  // namespace plantnav
