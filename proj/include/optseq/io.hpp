#pragma once

#include <string>
#include <vector>

#include "optseq/learner.hpp"
#include "optseq/sets.hpp"

namespace optseq {

// Sample sets: CSV with header px,py,pz,qw,qx,qy,qz,gripper,attached,episode
// plus a JSON sidecar (<path>.json) carrying the kind and option name.
void write_sample_set(const std::string& path, const SampleSet& set);
SampleSet read_sample_set(const std::string& path);

// Full world states, one per row; used for origin logs.
void write_states(const std::string& path, const std::vector<WorldState>& states);
std::vector<WorldState> read_states(const std::string& path);

// Policy text file: "key value" header lines, then weights and bias as
// hexadecimal floats, so the round trip is bit-exact.
struct PolicyFile {
    std::string option;
    Policy policy;
    std::int64_t steps_used = 0;
    std::int64_t seeding_steps = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    std::optional<GoalCondition> goal;

    bool operator==(const PolicyFile&) const;
};

std::string format_policy_file(const PolicyFile& f);
PolicyFile parse_policy_file(const std::string& text);

// A trained option is stored as <dir>/<name>.policy and <dir>/<name>.starts.csv.
void save_trained_option(const std::string& dir, const TrainedOption& option);
// spec supplies the conditions; the stored option name must match it.
TrainedOption load_trained_option(const std::string& dir, const OptionSpec& spec);

}  // namespace optseq
