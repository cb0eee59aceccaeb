#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "optseq/env.hpp"
#include "optseq/learner.hpp"
#include "optseq/options.hpp"
#include "optseq/sets.hpp"

namespace optseq {

struct EvalProtocol {
    int sets = 100;
    int episodes_per_set = 10;
    int max_steps_per_option = 100;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct AdaptConfig {
    double goal_tolerance = 0.01;
    double density_radius = 0.05;
    int origin_samples = 1000;
    int result_rollouts = 1000;
    double min_predecessor_success = 0.5;
    int predecessor_check_episodes = 20;
};

// Everything one experiment needs. Loaded from a flat JSON object whose keys
// are dotted paths ("env.h_lift", "region.reach.yaw_min_deg", ...); keys
// not present keep the defaults below, unknown keys are rejected.
struct Scenario {
    EnvConfig env;
    OptionTolerances tolerances;
    TrainConfig train;
    TrainConfig finetune;  // warm-started retraining of the result methods
    std::map<std::string, InitRegion> regions;  // independent training region per option
    OverlapParams overlap;
    AdaptConfig adapt;
    EvalProtocol protocol;

    // The offset-region configuration: every option trains from its own
    // start region, and reach's approach yaw differs from the yaw grasp was
    // trained at.
    static Scenario offset_default();

    const InitRegion& region(const std::string& option) const;
    void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);

// Applies one dotted-key override ("train.population=32").
void apply_override(Scenario& s, const std::string& key, const std::string& value);

}  // namespace optseq
