#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optseq/config.hpp"
#include "optseq/learner.hpp"
#include "optseq/sampling.hpp"
#include "optseq/sets.hpp"

namespace optseq {

enum class AdaptationMethod { Origin, RMCentroid, RMDensity };

std::string to_string(AdaptationMethod m);
AdaptationMethod adaptation_method_from_string(const std::string& s);

struct AdaptationSettings {
    TrainConfig train;     // fresh successor training (origin method)
    TrainConfig finetune;  // warm-started predecessor training (result methods)
    OverlapParams overlap;
    AdaptConfig adapt;

    static AdaptationSettings from(const Scenario& s) { return {s.train, s.finetune, s.overlap, s.adapt}; }
};

struct AdaptationOutcome {
    AdaptationMethod method = AdaptationMethod::Origin;
    std::string predecessor;
    std::string successor;
    TrainedOption adapted;
    std::optional<Pose> goal_pose;  // result methods only
    std::int64_t steps_used = 0;    // trainer accounting of the retrained option
    std::int64_t seeding_steps = 0; // predecessor rollouts spent producing handoff states
    double discard_rate = 0.0;      // failed predecessor rollouts / all draws
    bool skipped = false;           // pair already composable, nothing retrained
    bool warm_started = false;
    OverlapReport pre_overlap;
    OverlapReport post_overlap;
};

// Start states produced by running pred's frozen policy from its origin log;
// unsuccessful rollouts come back as discarded draws.
StartStateSource handoff_source(const Environment& env, const TrainedOption& pred);

// Retrains the successor from the predecessor's actual result states. The new
// policy starts from zero; `succ` supplies the conditions and the original
// origin set for the overlap reports.
AdaptationOutcome adapt_origin(const Environment& env, const TrainedOption& pred, const TrainedOption& succ,
                               const AdaptationSettings& settings, std::uint64_t seed);

// Retrains pred (warm-started) towards one sample of succ_origin: the sample
// nearest the centroid, or the densest sample. Non-convergence is reported
// through adapted.converged, never thrown.
AdaptationOutcome adapt_result(const Environment& env, const TrainedOption& pred, const SampleSet& succ_origin,
                               AdaptationMethod method, const AdaptationSettings& settings, std::uint64_t seed);

struct SequenceAdaptation {
    std::vector<TrainedOption> chain;
    std::vector<AdaptationOutcome> outcomes;  // one per adjacent pair, in processing order
};

// Origin: front to back, every successor retrained. Result methods: back to
// front, skipping pairs whose overlap verdict is already composable.
SequenceAdaptation adapt_sequence(const Environment& env, const std::vector<TrainedOption>& chain,
                                  AdaptationMethod method, const AdaptationSettings& settings, std::uint64_t seed);

void require_connected(const std::vector<TrainedOption>& chain);

}  // namespace optseq
