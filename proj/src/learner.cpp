#include "optseq/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optseq/errors.hpp"
#include "optseq/parallel.hpp"
#include "optseq/rng.hpp"

namespace optseq {

namespace {

constexpr int kMaxStartAttempts = 100;

}  // namespace

bool Task::succeeded(const WorldState& s) const {
    if (!(*option->term)(s)) return false;
    if (!goal) return true;
    return pose_distance(s.ee, goal->pose, goal->omega_r) <= goal->tolerance;
}

RewardOutcome Task::reward(const Environment& env, const WorldState& s, const Action& a,
                           const WorldState& next) const {
    if (!goal) return option_step_reward(env, *option, s, a, next);
    RewardOutcome r;
    r.shaped = adaptation_reward(next.ee, goal->pose, goal->omega_r);
    r.bonus = succeeded(next) ? kTerminalBonus : 0.0;
    r.violated = !env.check_violations(next).empty();
    return r;
}

void TrainConfig::validate() const {
    if (population < 2) throw ConfigError("train.population must be >= 2");
    if (!(elite_fraction > 0.0 && elite_fraction <= 0.5)) throw ConfigError("train.elite_fraction must be in (0, 0.5]");
    if (!(success_rate_threshold > 0.0 && success_rate_threshold <= 1.0))
        throw ConfigError("train.success_rate_threshold must be in (0, 1]");
    if (max_env_steps < 0) throw ConfigError("train.max_env_steps must be >= 0");
    if (!(weight_noise_scale > 0.0)) throw ConfigError("train.weight_noise_scale must be positive");
    if (!(rotation_noise_scale > 0.0)) throw ConfigError("train.rotation_noise_scale must be positive");
    if (!(l2_penalty >= 0.0)) throw ConfigError("train.l2_penalty must be >= 0");
    if (eval_episodes < 1 || episodes_per_candidate < 1) throw ConfigError("train episode counts must be >= 1");
    if (!(noise_init >= 0.0) || !(noise_min >= 0.0) || !(noise_decay > 0.0 && noise_decay <= 1.0))
        throw ConfigError("train noise settings out of range");
}

StartStateSource region_source(const Environment& env, const InitRegion& region) {
    region.validate(env.config());
    return [env, region](std::uint64_t seed) { return StartDraw{env.reset(region, seed), 0}; };
}

StartStateSource log_source(std::vector<WorldState> states) {
    if (states.empty()) throw ProvenanceError("cannot draw start states from an empty log");
    return [states = std::move(states)](std::uint64_t seed) {
        Rng rng(seed);
        return StartDraw{states[uniform_index(rng, states.size())], 0};
    };
}

SampleSet TrainedOption::origin_samples() const {
    SampleSet set{SetKind::Origin, spec.name, {}};
    set.samples.reserve(origin_log.size());
    for (std::size_t i = 0; i < origin_log.size(); ++i)
        set.samples.push_back(to_sample(origin_log[i], static_cast<std::int64_t>(i)));
    return set;
}

Trajectory rollout(const Environment& env, const Task& task, const Policy& policy, const WorldState& start,
                   int max_steps) {
    const Condition& init = *task.option->init;
    if (!init(start)) throw PreconditionError("start state fails " + init.name, init.name);
    Trajectory t;
    t.states.push_back(start);
    if (task.succeeded(start)) {
        t.terminal = true;
        return t;
    }
    for (int i = 0; i < max_steps; ++i) {
        const WorldState& s = t.states.back();
        const Action a = policy.act(s, env.config());
        auto r = env.step(s, a);
        t.rewards.push_back(task.reward(env, s, a, r.state).total());
        t.actions.push_back(a);
        t.states.push_back(std::move(r.state));
        if (r.violation) {
            t.violation = r.violation;
            break;
        }
        if (task.succeeded(t.states.back())) {
            t.terminal = true;
            break;
        }
    }
    return t;
}

Trajectory rollout(const Environment& env, const TrainedOption& option, const WorldState& start, int max_steps) {
    return rollout(env, option.task(), option.policy, start, max_steps);
}

double episode_return(const Trajectory& t, int max_steps) {
    double sum = std::accumulate(t.rewards.begin(), t.rewards.end(), 0.0);
    if (t.violation) sum -= static_cast<double>(std::max<std::int64_t>(0, max_steps - static_cast<int>(t.length())));
    return sum;
}

namespace {

// Draws a usable start state, retrying discarded draws with derived seeds.
WorldState draw_start(const StartStateSource& starts, const OptionSpec& option, std::uint64_t seed,
                      std::int64_t& seeding_steps, std::int64_t& discarded) {
    for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
        StartDraw d = starts(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        seeding_steps += d.env_steps;
        if (!d.state) {
            ++discarded;
            continue;
        }
        if (!(*option.init)(*d.state))
            throw ConfigError("start source produced a state outside " + option.init->name);
        return *d.state;
    }
    throw PreconditionError("start source discarded " + std::to_string(kMaxStartAttempts) + " draws in a row");
}

struct Batch {
    double mean_return = 0.0;
    double success_rate = 0.0;
    std::int64_t steps = 0;
};

Batch run_batch(const Environment& env, const Task& task, const Policy& policy, const std::vector<WorldState>& starts) {
    Batch b;
    const int cap = env.config().episode_cap;
    for (const auto& s : starts) {
        const Trajectory t = rollout(env, task, policy, s, cap);
        b.mean_return += episode_return(t, cap);
        b.success_rate += t.terminal ? 1.0 : 0.0;
        b.steps += static_cast<std::int64_t>(t.length());
    }
    b.mean_return /= static_cast<double>(starts.size());
    b.success_rate /= static_cast<double>(starts.size());
    return b;
}

}  // namespace

EvalResult evaluate_policy(const Environment& env, const Task& task, const Policy& policy,
                           const StartStateSource& starts, int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ContractError("evaluate_policy needs at least one episode");
    std::vector<WorldState> states;
    std::int64_t seeding = 0, discarded = 0;
    for (int e = 0; e < episodes; ++e)
        states.push_back(draw_start(starts, *task.option, derive_seed(seed, static_cast<std::uint64_t>(e)), seeding,
                                    discarded));
    const Batch b = run_batch(env, task, policy, states);
    return EvalResult{b.success_rate, b.mean_return, b.steps};
}

EvalResult evaluate_policy(const Environment& env, const TrainedOption& option, int episodes, std::uint64_t seed) {
    return evaluate_policy(env, option.task(), option.policy, log_source(option.origin_log), episodes, seed);
}

TrainedOption train_option(const Environment& env, const OptionSpec& option, const StartStateSource& starts,
                           const TrainConfig& cfg, std::uint64_t seed, const std::optional<GoalCondition>& goal,
                           const Policy* warm_start) {
    cfg.validate();
    TrainedOption out;
    out.spec = option;
    out.goal = goal;
    out.seed = seed;
    out.policy = warm_start ? *warm_start : Policy{};
    const Task task{&out.spec, goal};

    const int dim = Policy::parameter_count();
    Eigen::VectorXd mean = out.policy.parameters();
    // Per-parameter scale: weights explore less than biases.
    Eigen::VectorXd scale = Eigen::VectorXd::Constant(dim, cfg.weight_noise_scale);
    scale.tail(kActionSize).setOnes();
    for (int r = 3; r < 6; ++r) {
        scale.segment(r * kFeatureSize, kFeatureSize) *= cfg.rotation_noise_scale;
        scale[kActionSize * kFeatureSize + r] *= cfg.rotation_noise_scale;
    }
    Eigen::VectorXd sigma = cfg.noise_init * scale;
    const int n_elite = std::max(1, static_cast<int>(std::lround(cfg.elite_fraction * cfg.population)));
    double floor_noise = cfg.noise_init;

    double best_success = -1.0;
    double best_return = -std::numeric_limits<double>::infinity();

    for (std::uint64_t iter = 0; out.steps_used < cfg.max_env_steps; ++iter) {
        const std::int64_t steps_before = out.steps_used;
        std::vector<WorldState> batch;
        for (int k = 0; k < cfg.episodes_per_candidate; ++k) {
            batch.push_back(draw_start(starts, option, derive_seed(seed, iter, static_cast<std::uint64_t>(k)),
                                       out.seeding_steps, out.discarded_starts));
            out.origin_log.push_back(batch.back());
        }

        // Candidate 0 is the current mean.
        Rng rng(derive_seed(seed, iter, 0x706f70ULL));
        std::normal_distribution<double> normal;
        std::vector<Eigen::VectorXd> candidates(static_cast<std::size_t>(cfg.population), mean);
        for (std::size_t i = 1; i < candidates.size(); ++i)
            for (int d = 0; d < dim; ++d) candidates[i][d] += sigma[d] * normal(rng);

        std::vector<Batch> results(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t i) {
            results[i] = run_batch(env, task, Policy::from_parameters(candidates[i]), batch);
        });
        for (const auto& r : results) out.steps_used += r.steps;

        std::vector<double> fitness(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i)
            fitness[i] = results[i].mean_return - cfg.l2_penalty * candidates[i].squaredNorm();
        std::vector<std::size_t> order(candidates.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

        Eigen::VectorXd elite_mean = Eigen::VectorXd::Zero(dim);
        double elite_return = 0.0;
        for (int e = 0; e < n_elite; ++e) {
            elite_mean += candidates[order[e]];
            elite_return += results[order[e]].mean_return;
        }
        elite_mean /= n_elite;
        elite_return /= n_elite;
        Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
        for (int e = 0; e < n_elite; ++e) var += (candidates[order[e]] - elite_mean).cwiseAbs2();
        var /= n_elite;
        floor_noise = std::max(floor_noise * cfg.noise_decay, cfg.noise_min);
        mean = elite_mean;
        sigma = var.cwiseSqrt().cwiseMax(floor_noise * scale);

        std::vector<WorldState> eval_batch;
        for (int e = 0; e < cfg.eval_episodes; ++e) {
            eval_batch.push_back(draw_start(starts, option,
                                            derive_seed(seed, iter, 0x10000ULL + static_cast<std::uint64_t>(e)),
                                            out.seeding_steps, out.discarded_starts));
            out.origin_log.push_back(eval_batch.back());
        }
        const Policy mean_policy = Policy::from_parameters(mean);
        const Batch eval = run_batch(env, task, mean_policy, eval_batch);
        out.steps_used += eval.steps;

        if (eval.success_rate > best_success || (eval.success_rate == best_success && eval.mean_return > best_return)) {
            best_success = eval.success_rate;
            best_return = eval.mean_return;
            out.policy = mean_policy;
        }
        out.history.push_back(IterationRecord{out.steps_used - steps_before, out.steps_used, elite_return,
                                              eval.success_rate, eval.mean_return, best_success, best_return});
        if (eval.success_rate >= cfg.success_rate_threshold) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace optseq
