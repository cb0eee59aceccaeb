#include "optseq/adaptation.hpp"

#include "optseq/errors.hpp"
#include "optseq/rng.hpp"

namespace optseq {

namespace {

enum Stream : std::uint64_t { kCheck = 1, kPredResults, kSuccOrigin, kTrain, kPostResults, kPostOrigin };

OverlapReport empty_overlap(const OverlapParams& p) {
    OverlapReport r;
    r.epsilon = p.epsilon;
    r.voxel_size = p.voxel;
    r.containment_threshold = p.containment_threshold;
    return r;
}

// Result set of an option regardless of its convergence flag; empty when no
// rollout succeeds.
SampleSet try_result_set(const Environment& env, TrainedOption option, std::size_t n, std::uint64_t seed) {
    if (option.origin_log.empty()) return {};
    option.converged = true;
    try {
        return sample_result_set(env, option, n, seed).set;
    } catch (const ProvenanceError&) {
        return {};
    }
}

OverlapReport overlap_or_empty(const SampleSet& result, const SampleSet& origin, const OverlapParams& p) {
    if (result.empty() || origin.empty()) return empty_overlap(p);
    return overlap(result, origin, p);
}

}  // namespace

std::string to_string(AdaptationMethod m) {
    switch (m) {
        case AdaptationMethod::Origin: return "origin";
        case AdaptationMethod::RMCentroid: return "rm-centroid";
        case AdaptationMethod::RMDensity: return "rm-density";
    }
    return "unknown";
}

AdaptationMethod adaptation_method_from_string(const std::string& s) {
    for (auto m : {AdaptationMethod::Origin, AdaptationMethod::RMCentroid, AdaptationMethod::RMDensity})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown adaptation method '" + s + "'");
}

StartStateSource handoff_source(const Environment& env, const TrainedOption& pred) {
    if (pred.origin_log.empty())
        throw ProvenanceError("option '" + pred.spec.name + "' has no recorded training starts");
    return [env, pred](std::uint64_t seed) {
        Rng rng(seed);
        const WorldState& start = pred.origin_log[uniform_index(rng, pred.origin_log.size())];
        const Trajectory t = rollout(env, pred, start, env.config().episode_cap);
        StartDraw d;
        d.env_steps = static_cast<std::int64_t>(t.length());
        if (t.terminal) d.state = t.final_state();
        return d;
    };
}

void require_connected(const std::vector<TrainedOption>& chain) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (!connected(chain[i].spec, chain[i + 1].spec))
            throw ConfigError("options '" + chain[i].spec.name + "' and '" + chain[i + 1].spec.name +
                              "' are not connected");
}

AdaptationOutcome adapt_origin(const Environment& env, const TrainedOption& pred, const TrainedOption& succ,
                               const AdaptationSettings& settings, std::uint64_t seed) {
    if (!pred.converged)
        throw PreconditionError("predecessor '" + pred.spec.name + "' has not converged", "converged");
    if (!connected(pred.spec, succ.spec))
        throw ConfigError("options '" + pred.spec.name + "' and '" + succ.spec.name + "' are not connected");

    const EvalResult check = evaluate_policy(env, pred, settings.adapt.predecessor_check_episodes,
                                             derive_seed(seed, kCheck));
    if (check.success_rate < settings.adapt.min_predecessor_success)
        throw PreconditionError("predecessor '" + pred.spec.name + "' succeeds in only " +
                                    std::to_string(check.success_rate) + " of seeding rollouts",
                                "predecessor_quality");

    AdaptationOutcome out;
    out.method = AdaptationMethod::Origin;
    out.predecessor = pred.spec.name;
    out.successor = succ.spec.name;

    const auto n_results = static_cast<std::size_t>(settings.adapt.result_rollouts);
    const auto n_origin = static_cast<std::size_t>(settings.adapt.origin_samples);
    const SampleSet pred_results = sample_result_set(env, pred, n_results, derive_seed(seed, kPredResults)).set;
    out.pre_overlap = overlap(pred_results, sample_origin_set(succ, n_origin, derive_seed(seed, kSuccOrigin)),
                              settings.overlap);

    out.adapted = train_option(env, succ.spec, handoff_source(env, pred), settings.train, derive_seed(seed, kTrain));
    out.steps_used = out.adapted.steps_used;
    out.seeding_steps = out.adapted.seeding_steps;
    const auto draws = static_cast<double>(out.adapted.origin_log.size() + out.adapted.discarded_starts);
    out.discard_rate = draws > 0 ? static_cast<double>(out.adapted.discarded_starts) / draws : 0.0;

    out.post_overlap = out.adapted.origin_log.empty()
                           ? out.pre_overlap
                           : overlap(pred_results,
                                     sample_origin_set(out.adapted, n_origin, derive_seed(seed, kPostOrigin)),
                                     settings.overlap);
    return out;
}

AdaptationOutcome adapt_result(const Environment& env, const TrainedOption& pred, const SampleSet& succ_origin,
                               AdaptationMethod method, const AdaptationSettings& settings, std::uint64_t seed) {
    if (method == AdaptationMethod::Origin) throw ConfigError("adapt_result needs rm-centroid or rm-density");
    if (!pred.converged)
        throw PreconditionError("predecessor '" + pred.spec.name + "' has not converged", "converged");
    if (succ_origin.empty()) throw ProvenanceError("successor origin set is empty");

    AdaptationOutcome out;
    out.method = method;
    out.predecessor = pred.spec.name;
    out.successor = succ_origin.option_name;
    out.warm_started = true;

    const PoseSample& selected = method == AdaptationMethod::RMCentroid
                                     ? closest_to_centroid(succ_origin)
                                     : densest_sample(succ_origin, settings.overlap.omega_r,
                                                      settings.adapt.density_radius);
    out.goal_pose = selected.pose;
    const GoalCondition goal{selected.pose, settings.adapt.goal_tolerance, settings.overlap.omega_r};

    const auto n_results = static_cast<std::size_t>(settings.adapt.result_rollouts);
    const SampleSet pred_results = sample_result_set(env, pred, n_results, derive_seed(seed, kPredResults)).set;
    out.pre_overlap = overlap(pred_results, succ_origin, settings.overlap);

    out.adapted = train_option(env, pred.spec, log_source(pred.origin_log), settings.finetune,
                               derive_seed(seed, kTrain), goal, &pred.policy);
    out.steps_used = out.adapted.steps_used;

    out.post_overlap = overlap_or_empty(try_result_set(env, out.adapted, n_results, derive_seed(seed, kPostResults)),
                                        succ_origin, settings.overlap);
    return out;
}

SequenceAdaptation adapt_sequence(const Environment& env, const std::vector<TrainedOption>& chain,
                                  AdaptationMethod method, const AdaptationSettings& settings, std::uint64_t seed) {
    require_connected(chain);
    SequenceAdaptation out{chain, {}};
    if (chain.size() < 2) return out;

    if (method == AdaptationMethod::Origin) {
        for (std::size_t i = 1; i < chain.size(); ++i) {
            out.outcomes.push_back(adapt_origin(env, out.chain[i - 1], chain[i], settings, derive_seed(seed, i)));
            out.chain[i] = out.outcomes.back().adapted;
        }
        return out;
    }

    const auto n_results = static_cast<std::size_t>(settings.adapt.result_rollouts);
    const auto n_origin = static_cast<std::size_t>(settings.adapt.origin_samples);
    for (std::size_t k = chain.size() - 1; k-- > 0;) {
        const std::uint64_t pair_seed = derive_seed(seed, k + 1);
        const SampleSet succ_origin = sample_origin_set(out.chain[k + 1], n_origin, derive_seed(pair_seed, kSuccOrigin));
        const SampleSet pred_results =
            sample_result_set(env, out.chain[k], n_results, derive_seed(pair_seed, kPredResults)).set;
        const OverlapReport verdict = overlap(pred_results, succ_origin, settings.overlap);
        if (verdict.verdict_composable) {
            AdaptationOutcome skip;
            skip.method = method;
            skip.predecessor = out.chain[k].spec.name;
            skip.successor = out.chain[k + 1].spec.name;
            skip.adapted = out.chain[k];
            skip.skipped = true;
            skip.pre_overlap = verdict;
            skip.post_overlap = verdict;
            out.outcomes.push_back(std::move(skip));
            continue;
        }
        out.outcomes.push_back(adapt_result(env, out.chain[k], succ_origin, method, settings, pair_seed));
        out.chain[k] = out.outcomes.back().adapted;
    }
    return out;
}

}  // namespace optseq
