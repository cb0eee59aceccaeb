#include "optseq/config.hpp"

#include "optseq/errors.hpp"

namespace optseq {

void EvalProtocol::validate() const {
    if (sets < 1) throw ConfigError("eval.sets must be >= 1");
    if (episodes_per_set < 1) throw ConfigError("eval.episodes_per_set must be >= 1");
    if (max_steps_per_option < 1) throw ConfigError("eval.max_steps_per_option must be >= 1");
}

Scenario Scenario::offset_default() {
    Scenario s;
    const Vec3 cup_lo(-0.05, -0.05, 0.0), cup_hi(0.05, 0.05, 0.0);
    const Eigen::Vector2d target_lo(0.2, 0.15), target_hi(0.3, 0.25);

    InitRegion reach;
    reach.ee_min = Vec3(-0.2, -0.2, 0.15);
    reach.ee_max = Vec3(0.2, 0.2, 0.35);
    reach.yaw_min_deg = 90.0;
    reach.yaw_max_deg = 120.0;
    reach.gripper_min = 0.9;
    reach.gripper_max = 1.0;
    reach.cup_min = cup_lo;
    reach.cup_max = cup_hi;
    reach.target_min = target_lo;
    reach.target_max = target_hi;
    reach.context_min = -1;
    reach.context_max = 1;

    InitRegion grasp = reach;
    grasp.ee_relative_to_grasp = true;
    grasp.ee_min = Vec3::Constant(-0.008);
    grasp.ee_max = Vec3::Constant(0.008);
    grasp.yaw_min_deg = -10.0;
    grasp.yaw_max_deg = 10.0;

    InitRegion lift = grasp;
    lift.attached = true;
    lift.ee_min = Vec3::Constant(-0.005);
    lift.ee_max = Vec3::Constant(0.005);
    lift.gripper_min = 0.0;
    lift.gripper_max = 0.25;

    InitRegion carry = lift;
    carry.cup_min.z() = 0.25;
    carry.cup_max.z() = 0.35;

    InitRegion place = lift;
    place.cup_relative_to_target = true;
    place.cup_min = Vec3(-0.025, -0.025, 0.15);
    place.cup_max = Vec3(0.025, 0.025, 0.25);

    s.train.max_env_steps = 20'000'000;
    s.train.eval_episodes = 100;
    s.train.success_rate_threshold = 1.0;
    s.train.noise_min = 0.1;
    s.train.episodes_per_candidate = 8;
    s.train.l2_penalty = 0.1;
    s.train.rotation_noise_scale = 0.15;

    s.finetune = s.train;
    s.finetune.weight_noise_scale = 0.6;
    s.finetune.rotation_noise_scale = 0.5;
    s.finetune.elite_fraction = 0.2;
    s.finetune.episodes_per_candidate = 4;
    s.finetune.max_env_steps = 30'000'000;

    s.regions = {{"reach", reach}, {"grasp", grasp}, {"lift", lift}, {"carry", carry}, {"place", place}};
    return s;
}

const InitRegion& Scenario::region(const std::string& option) const {
    auto it = regions.find(option);
    if (it == regions.end()) throw ConfigError("no start region configured for option '" + option + "'");
    return it->second;
}

void Scenario::validate() const {
    env.validate();
    train.validate();
    finetune.validate();
    protocol.validate();
    for (const auto& [name, r] : regions) r.validate(env);
    if (!(overlap.epsilon > 0.0) || !(overlap.voxel > 0.0) || !(overlap.omega_r > 0.0))
        throw ConfigError("overlap parameters must be positive");
    if (!(adapt.goal_tolerance > 0.0) || !(adapt.density_radius > 0.0) || adapt.origin_samples < 1 ||
        adapt.result_rollouts < 1)
        throw ConfigError("adapt parameters must be positive");
}

}  // namespace optseq
