#pragma once

#include <memory>
#include <string>
#include <vector>

#include "optseq/learner.hpp"
#include "optseq/options.hpp"
#include "optseq/rng.hpp"

namespace fixtures {

using namespace optseq;

// ee resting exactly at the grasp point of an upright cup at the origin.
inline WorldState at_grasp_point(const EnvConfig& cfg = {}) {
    WorldState s;
    s.cup = Pose(Vec3(0, 0, cfg.table_z), Quat::Identity());
    s.ee = Pose(Vec3(0, 0, cfg.table_z + cfg.grasp_point_height), Quat::Identity());
    s.target_position = Vec3(0.25, 0.2, cfg.table_z);
    s.table_z = cfg.table_z;
    return s;
}

inline WorldState above_cup(double height, const EnvConfig& cfg = {}) {
    WorldState s = at_grasp_point(cfg);
    s.ee.position.z() += height;
    return s;
}

// Moves the ee halfway to the cup grasp point each step, gripper open.
inline Policy homing_policy() {
    Policy p;
    for (int i = 0; i < 3; ++i) p.weights(i, i) = -1.0;
    p.bias[6] = 1.0;
    return p;
}

inline ConditionPtr condition(std::string name, bool value) {
    return std::make_shared<const Condition>(Condition{std::move(name), [value](const WorldState&) { return value; }});
}

// A connected chain of options with fixed predicate outcomes: every INIT is
// true, TERM_i comes from `terms`.
inline std::vector<TrainedOption> scripted_chain(const std::vector<bool>& terms, const WorldState& start) {
    std::vector<TrainedOption> chain;
    ConditionPtr init = condition("start", true);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        TrainedOption o;
        o.spec.name = "opt" + std::to_string(i);
        o.spec.init = init;
        o.spec.term = condition(o.spec.name + ".term", terms[i]);
        o.converged = true;
        o.origin_log = {start};
        o.steps_used = static_cast<std::int64_t>(100 * (i + 1));
        init = o.spec.term;
        chain.push_back(o);
    }
    return chain;
}

}  // namespace fixtures
