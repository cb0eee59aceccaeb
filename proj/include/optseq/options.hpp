#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optseq/env.hpp"

namespace optseq {

// Named predicate over world states. Adjacent options share one Condition
// object, so TERM of the predecessor and INIT of the successor are the same
// predicate rather than two copies that happen to agree.
struct Condition {
    std::string name;
    std::function<bool(const WorldState&)> test;

    bool operator()(const WorldState& s) const { return test(s); }
};
using ConditionPtr = std::shared_ptr<const Condition>;

// EeToGraspPose adds the orientation difference between ee and cup to the
// ee-to-grasp-point distance.
enum class ShapingTarget { EeToCupGrasp, EeToGraspPose, CupToAboveCup, CupToAboveTarget, CupToTarget };

std::string to_string(ShapingTarget t);
ShapingTarget shaping_target_from_string(const std::string& s);

// Tolerances of the five option conditions. Overridable under "option.".
struct OptionTolerances {
    double reach_position = 0.02;
    double open_aperture = 0.7;
    double carry_xy = 0.05;
    double place_xy = 0.05;
    double place_z = 0.02;
};

inline constexpr double kTerminalBonus = 1000.0;

struct OptionSpec {
    std::string name;
    ConditionPtr init;
    ConditionPtr term;
    ShapingTarget shaping = ShapingTarget::EeToCupGrasp;

    // Distance used by the dense shaping term, evaluated on a state.
    double shaping_distance(const Environment& env, const WorldState& s) const;
};

struct RewardOutcome {
    double shaped = 0.0;
    double bonus = 0.0;
    bool violated = false;

    double total() const { return shaped + bonus; }
};

// [reach, grasp, lift, carry, place] with shared conditions between
// neighbours.
std::vector<OptionSpec> canonical_sequence(const Environment& env, const OptionTolerances& tol = {});

const OptionSpec& find_option(const std::vector<OptionSpec>& seq, const std::string& name);

bool connected(const OptionSpec& pred, const OptionSpec& succ);

// -tanh(dist)^2. Throws ContractError for negative or non-finite dist.
double shaped_reward(double dist);

// -10 tanh(d)^2 with d the pose distance between current and goal.
double adaptation_reward(const Pose& current, const Pose& goal, double omega_r);

RewardOutcome option_step_reward(const Environment& env, const OptionSpec& option, const WorldState& s,
                                 const Action& a, const WorldState& next);

}  // namespace optseq
