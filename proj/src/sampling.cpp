#include "optseq/sampling.hpp"

#include <numeric>

#include "optseq/errors.hpp"
#include "optseq/parallel.hpp"
#include "optseq/rng.hpp"

namespace optseq {

SampleSet sample_origin_set(const TrainedOption& trained, std::size_t n, std::uint64_t seed) {
    if (trained.origin_log.empty())
        throw ProvenanceError("option '" + trained.spec.name + "' has no recorded training starts");
    const SampleSet log = trained.origin_samples();
    SampleSet out{SetKind::Origin, trained.spec.name, {}};
    out.samples.reserve(n);
    Rng rng(derive_seed(seed, 0x4f524947ULL));
    const std::size_t m = log.size();
    if (m >= n) {
        // Partial Fisher-Yates.
        std::vector<std::size_t> idx(m);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + uniform_index(rng, m - i);
            std::swap(idx[i], idx[j]);
            out.samples.push_back(log.samples[idx[i]]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out.samples.push_back(log.samples[uniform_index(rng, m)]);
    }
    return out;
}

ResultSampling sample_result_set(const Environment& env, const TrainedOption& trained, std::size_t n,
                                 std::uint64_t seed) {
    if (!trained.converged)
        throw PreconditionError("option '" + trained.spec.name + "' has not converged", "converged");
    if (trained.origin_log.empty())
        throw ProvenanceError("option '" + trained.spec.name + "' has no recorded training starts");

    std::vector<std::optional<WorldState>> finals(n);
    parallel_for(n, [&](std::size_t i) {
        Rng rng(derive_seed(seed, 0x52455355ULL, i));
        const WorldState& start = trained.origin_log[uniform_index(rng, trained.origin_log.size())];
        const Trajectory t = rollout(env, trained, start, env.config().episode_cap);
        if (t.terminal) finals[i] = t.final_state();
    });

    ResultSampling r;
    r.set = SampleSet{SetKind::Result, trained.spec.name, {}};
    r.attempts = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!finals[i]) continue;
        r.set.samples.push_back(to_sample(*finals[i], static_cast<std::int64_t>(i)));
        r.terminal_states.push_back(*finals[i]);
    }
    r.successes = r.set.size();
    if (r.set.empty())
        throw ProvenanceError("no rollout of option '" + trained.spec.name + "' terminated successfully");
    return r;
}

}  // namespace optseq
