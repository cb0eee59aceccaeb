#include "optseq/options.hpp"

#include <cmath>

#include "optseq/errors.hpp"
#include "optseq/geometry.hpp"

namespace optseq {

std::string to_string(ShapingTarget t) {
    switch (t) {
        case ShapingTarget::EeToCupGrasp: return "ee_to_cup_grasp";
        case ShapingTarget::EeToGraspPose: return "ee_to_grasp_pose";
        case ShapingTarget::CupToAboveCup: return "cup_to_above_cup";
        case ShapingTarget::CupToAboveTarget: return "cup_to_above_target";
        case ShapingTarget::CupToTarget: return "cup_to_target";
    }
    return "unknown";
}

ShapingTarget shaping_target_from_string(const std::string& s) {
    for (auto t : {ShapingTarget::EeToCupGrasp, ShapingTarget::EeToGraspPose, ShapingTarget::CupToAboveCup, ShapingTarget::CupToAboveTarget,
                   ShapingTarget::CupToTarget})
        if (to_string(t) == s) return t;
    throw ConfigError("unknown shaping target '" + s + "'");
}

double OptionSpec::shaping_distance(const Environment& env, const WorldState& s) const {
    const double lift_z = s.table_z + env.config().h_lift;
    const Vec3& cup = s.cup.position;
    switch (shaping) {
        case ShapingTarget::EeToCupGrasp: return (s.ee.position - env.cup_grasp_point(s)).norm();
        case ShapingTarget::EeToGraspPose:
            return pose_distance(s.ee, Pose(env.cup_grasp_point(s), s.cup.orientation), kDefaultOmegaR);
        case ShapingTarget::CupToAboveCup: return std::abs(lift_z - cup.z());
        case ShapingTarget::CupToAboveTarget:
            return (cup - Vec3(s.target_position.x(), s.target_position.y(), lift_z)).norm();
        case ShapingTarget::CupToTarget: return (cup - s.target_position).norm();
    }
    return 0.0;
}

std::vector<OptionSpec> canonical_sequence(const Environment& env, const OptionTolerances& tol) {
    auto make = [](std::string name, std::function<bool(const WorldState&)> f) {
        return std::make_shared<const Condition>(Condition{std::move(name), std::move(f)});
    };
    const EnvConfig cfg = env.config();

    auto reach_init = make("reach.init", [env, tol](const WorldState& s) {
        return s.gripper_aperture > tol.open_aperture && !s.attached && env.in_workspace(s.ee.position);
    });
    auto reached = make("reach.term", [env, tol](const WorldState& s) {
        return (s.ee.position - env.cup_grasp_point(s)).norm() <= tol.reach_position &&
               s.gripper_aperture > tol.open_aperture;
    });
    auto grasped = make("grasp.term", [](const WorldState& s) { return s.attached; });
    auto lifted = make("lift.term", [cfg](const WorldState& s) {
        return s.attached && s.cup.position.z() >= s.table_z + cfg.h_lift;
    });
    auto carried = make("carry.term", [cfg, tol](const WorldState& s) {
        return s.attached && (s.ee.position.head<2>() - s.target_position.head<2>()).norm() <= tol.carry_xy &&
               s.cup.position.z() >= s.table_z + cfg.h_lift;
    });
    auto placed = make("place.term", [env, tol](const WorldState& s) {
        return !s.attached && (s.cup.position.head<2>() - s.target_position.head<2>()).norm() <= tol.place_xy &&
               env.cup_upright(s) && std::abs(s.cup.position.z() - s.table_z) <= tol.place_z;
    });

    return {
        OptionSpec{"reach", reach_init, reached, ShapingTarget::EeToCupGrasp},
        OptionSpec{"grasp", reached, grasped, ShapingTarget::EeToGraspPose},
        OptionSpec{"lift", grasped, lifted, ShapingTarget::CupToAboveCup},
        OptionSpec{"carry", lifted, carried, ShapingTarget::CupToAboveTarget},
        OptionSpec{"place", carried, placed, ShapingTarget::CupToTarget},
    };
}

const OptionSpec& find_option(const std::vector<OptionSpec>& seq, const std::string& name) {
    for (const auto& o : seq)
        if (o.name == name) return o;
    throw ConfigError("unknown option '" + name + "'");
}

bool connected(const OptionSpec& pred, const OptionSpec& succ) {
    return pred.term && pred.term == succ.init;
}

double shaped_reward(double dist) {
    if (!std::isfinite(dist) || dist < 0.0) throw ContractError("shaping distance must be finite and >= 0");
    const double t = std::tanh(dist);
    return -t * t;
}

double adaptation_reward(const Pose& current, const Pose& goal, double omega_r) {
    const double t = std::tanh(pose_distance(current, goal, omega_r));
    return -10.0 * t * t;
}

RewardOutcome option_step_reward(const Environment& env, const OptionSpec& option, const WorldState&,
                                 const Action&, const WorldState& next) {
    RewardOutcome r;
    r.shaped = shaped_reward(option.shaping_distance(env, next));
    r.bonus = (*option.term)(next) ? kTerminalBonus : 0.0;
    r.violated = !env.check_violations(next).empty();
    return r;
}

}  // namespace optseq
