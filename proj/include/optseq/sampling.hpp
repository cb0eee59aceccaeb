#pragma once

#include <cstdint>

#include "optseq/learner.hpp"
#include "optseq/sets.hpp"

namespace optseq {

// Subsamples n recorded training starts: without replacement when the log
// holds at least n entries, with replacement otherwise. Throws
// ProvenanceError on an empty log.
SampleSet sample_origin_set(const TrainedOption& trained, std::size_t n = 1000, std::uint64_t seed = 0);

struct ResultSampling {
    SampleSet set;
    std::size_t attempts = 0;
    std::size_t successes = 0;
    std::vector<WorldState> terminal_states;  // full states behind set.samples
};

// Runs n rollouts from origin-log starts and keeps the terminal pose of each
// successful one. Throws PreconditionError if the option never converged and
// ProvenanceError if no rollout succeeds.
ResultSampling sample_result_set(const Environment& env, const TrainedOption& trained, std::size_t n = 1000,
                                 std::uint64_t seed = 0);

}  // namespace optseq
