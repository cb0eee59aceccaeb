#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

#include <json.hpp>

#include "optseq/config.hpp"
#include "optseq/errors.hpp"

namespace optseq {

namespace {

using Field = std::variant<double*, int*, std::int64_t*, std::uint64_t*, bool*>;

struct Binding {
    std::string key;
    Field field;
};

void bind_vec3(std::vector<Binding>& out, const std::string& prefix, Vec3& v) {
    out.push_back({prefix + "_x", &v.x()});
    out.push_back({prefix + "_y", &v.y()});
    out.push_back({prefix + "_z", &v.z()});
}

void bind_region(std::vector<Binding>& out, const std::string& p, InitRegion& r) {
    bind_vec3(out, p + "ee_min", r.ee_min);
    bind_vec3(out, p + "ee_max", r.ee_max);
    out.push_back({p + "ee_relative_to_grasp", &r.ee_relative_to_grasp});
    out.push_back({p + "yaw_min_deg", &r.yaw_min_deg});
    out.push_back({p + "yaw_max_deg", &r.yaw_max_deg});
    out.push_back({p + "gripper_min", &r.gripper_min});
    out.push_back({p + "gripper_max", &r.gripper_max});
    out.push_back({p + "attached", &r.attached});
    bind_vec3(out, p + "cup_min", r.cup_min);
    bind_vec3(out, p + "cup_max", r.cup_max);
    out.push_back({p + "cup_relative_to_target", &r.cup_relative_to_target});
    out.push_back({p + "target_min_x", &r.target_min.x()});
    out.push_back({p + "target_min_y", &r.target_min.y()});
    out.push_back({p + "target_max_x", &r.target_max.x()});
    out.push_back({p + "target_max_y", &r.target_max.y()});
    out.push_back({p + "context_min", &r.context_min});
    out.push_back({p + "context_max", &r.context_max});
}

// Every configurable key, in documentation order.
std::vector<Binding> bindings(Scenario& s) {
    std::vector<Binding> b;
    EnvConfig& e = s.env;
    b.push_back({"env.table_z", &e.table_z});
    b.push_back({"env.table_half_extent", &e.table_half_extent});
    bind_vec3(b, "env.workspace_min", e.workspace_min);
    bind_vec3(b, "env.workspace_max", e.workspace_max);
    b.push_back({"env.edge_margin", &e.edge_margin});
    b.push_back({"env.grasp_radius", &e.grasp_radius});
    b.push_back({"env.grasp_point_height", &e.grasp_point_height});
    b.push_back({"env.grasp_threshold", &e.grasp_threshold});
    b.push_back({"env.grasp_align_deg", &e.grasp_align_deg});
    b.push_back({"env.tilt_threshold_deg", &e.tilt_threshold_deg});
    b.push_back({"env.upright_deg", &e.upright_deg});
    b.push_back({"env.h_lift", &e.h_lift});
    b.push_back({"env.cup_radius", &e.cup_radius});
    b.push_back({"env.cup_height", &e.cup_height});
    b.push_back({"env.drop_tip_height", &e.drop_tip_height});
    b.push_back({"env.max_delta_position", &e.max_delta_position});
    b.push_back({"env.max_delta_rotation", &e.max_delta_rotation});
    b.push_back({"env.gripper_rate", &e.gripper_rate});
    b.push_back({"env.episode_cap", &e.episode_cap});

    OptionTolerances& t = s.tolerances;
    b.push_back({"option.reach_position", &t.reach_position});
    b.push_back({"option.open_aperture", &t.open_aperture});
    b.push_back({"option.carry_xy", &t.carry_xy});
    b.push_back({"option.place_xy", &t.place_xy});
    b.push_back({"option.place_z", &t.place_z});

    for (auto [prefix, tr] : {std::pair<std::string, TrainConfig*>{"train.", &s.train}, {"finetune.", &s.finetune}}) {
        b.push_back({prefix + "population", &tr->population});
        b.push_back({prefix + "elite_fraction", &tr->elite_fraction});
        b.push_back({prefix + "max_env_steps", &tr->max_env_steps});
        b.push_back({prefix + "eval_episodes", &tr->eval_episodes});
        b.push_back({prefix + "success_rate_threshold", &tr->success_rate_threshold});
        b.push_back({prefix + "noise_init", &tr->noise_init});
        b.push_back({prefix + "weight_noise_scale", &tr->weight_noise_scale});
        b.push_back({prefix + "rotation_noise_scale", &tr->rotation_noise_scale});
        b.push_back({prefix + "noise_decay", &tr->noise_decay});
        b.push_back({prefix + "noise_min", &tr->noise_min});
        b.push_back({prefix + "episodes_per_candidate", &tr->episodes_per_candidate});
        b.push_back({prefix + "l2_penalty", &tr->l2_penalty});
    }

    b.push_back({"overlap.epsilon", &s.overlap.epsilon});
    b.push_back({"overlap.voxel", &s.overlap.voxel});
    b.push_back({"overlap.omega_r", &s.overlap.omega_r});
    b.push_back({"overlap.containment_threshold", &s.overlap.containment_threshold});

    b.push_back({"adapt.goal_tolerance", &s.adapt.goal_tolerance});
    b.push_back({"adapt.density_radius", &s.adapt.density_radius});
    b.push_back({"adapt.origin_samples", &s.adapt.origin_samples});
    b.push_back({"adapt.result_rollouts", &s.adapt.result_rollouts});
    b.push_back({"adapt.min_predecessor_success", &s.adapt.min_predecessor_success});
    b.push_back({"adapt.predecessor_check_episodes", &s.adapt.predecessor_check_episodes});

    b.push_back({"eval.sets", &s.protocol.sets});
    b.push_back({"eval.episodes_per_set", &s.protocol.episodes_per_set});
    b.push_back({"eval.max_steps_per_option", &s.protocol.max_steps_per_option});
    b.push_back({"eval.master_seed", &s.protocol.master_seed});

    for (auto& [name, region] : s.regions) bind_region(b, "region." + name + ".", region);
    return b;
}

void assign(const Field& field, const nlohmann::json& v, const std::string& key) {
    try {
        std::visit(
            [&](auto* p) {
                using T = std::remove_pointer_t<decltype(p)>;
                if constexpr (std::is_same_v<T, bool>) {
                    if (!v.is_boolean()) throw ConfigError("key '" + key + "' expects a boolean");
                    *p = v.get<bool>();
                } else if constexpr (std::is_floating_point_v<T>) {
                    if (!v.is_number()) throw ConfigError("key '" + key + "' expects a number");
                    *p = v.get<double>();
                } else {
                    if (!v.is_number_integer()) throw ConfigError("key '" + key + "' expects an integer");
                    *p = v.get<T>();
                }
            },
            field);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

// Region keys may introduce a new option name; make sure it exists before binding.
void ensure_region(Scenario& s, const std::string& key) {
    if (key.rfind("region.", 0) != 0) return;
    const auto dot = key.find('.', 7);
    if (dot == std::string::npos) throw ConfigError("malformed region key '" + key + "'");
    s.regions.try_emplace(key.substr(7, dot - 7));
}

void apply_json(Scenario& s, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a flat JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) ensure_region(s, it.key());
    auto table = bindings(s);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto b = std::find_if(table.begin(), table.end(), [&](const Binding& x) { return x.key == it.key(); });
        if (b == table.end()) throw ConfigError("unknown configuration key '" + it.key() + "'");
        assign(b->field, it.value(), it.key());
    }
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    Scenario s = Scenario::offset_default();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("cannot parse configuration: ") + e.what());
    }
    apply_json(s, j);
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str());
}

std::string scenario_to_json_text(const Scenario& s) {
    Scenario copy = s;
    nlohmann::ordered_json j;
    for (const auto& b : bindings(copy))
        std::visit([&](auto* p) { j[b.key] = *p; }, b.field);
    return j.dump(2) + "\n";
}

void apply_override(Scenario& s, const std::string& key, const std::string& value) {
    nlohmann::json v;
    try {
        v = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("cannot parse value '" + value + "' for key '" + key + "'");
    }
    nlohmann::json j;
    j[key] = v;
    apply_json(s, j);
}

}  // namespace optseq
