#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "optseq/options.hpp"
#include "optseq/policy.hpp"
#include "optseq/sets.hpp"

namespace optseq {

// Extra termination requirement added by the result methods: the ee must be
// within `tolerance` of `pose` (pose_distance) in addition to TERM.
struct GoalCondition {
    Pose pose;
    double tolerance = 0.01;
    double omega_r = kDefaultOmegaR;

    bool operator==(const GoalCondition&) const = default;
};

// What a policy is trained or executed against: an option's conditions, plus
// the optional goal pose that switches the reward to the adaptation form.
struct Task {
    const OptionSpec* option = nullptr;
    std::optional<GoalCondition> goal;

    bool succeeded(const WorldState& s) const;
    RewardOutcome reward(const Environment& env, const WorldState& s, const Action& a, const WorldState& next) const;
};

struct TrainConfig {
    int population = 64;
    double elite_fraction = 0.1;
    std::int64_t max_env_steps = 2'000'000;
    int eval_episodes = 20;
    double success_rate_threshold = 0.9;
    double noise_init = 0.5;         // exploration std of the bias terms
    double weight_noise_scale = 0.3; // weights explore with noise_init * this
    double rotation_noise_scale = 1.0; // extra factor on the rotation outputs' parameters
    double noise_decay = 0.95;
    double noise_min = 0.0;  // lower bound of the decaying exploration floor
    int episodes_per_candidate = 4;
    double l2_penalty = 0.0;  // fitness = mean return - l2_penalty * |theta|^2

    void validate() const;
};

// A start-state draw. `state` is empty when the draw was discarded; env_steps
// counts any environment steps spent producing it.
struct StartDraw {
    std::optional<WorldState> state;
    std::int64_t env_steps = 0;
};
using StartStateSource = std::function<StartDraw(std::uint64_t seed)>;

StartStateSource region_source(const Environment& env, const InitRegion& region);
StartStateSource log_source(std::vector<WorldState> states);

struct IterationRecord {
    std::int64_t env_steps = 0;   // spent in this iteration
    std::int64_t steps_used = 0;  // cumulative
    double elite_mean_return = 0.0;
    double eval_success = 0.0;
    double eval_return = 0.0;
    double best_success = 0.0;
    double best_return = 0.0;
};

struct TrainedOption {
    OptionSpec spec;
    Policy policy;
    std::vector<WorldState> origin_log;  // every training start state, in order
    std::int64_t steps_used = 0;
    bool converged = false;
    std::optional<GoalCondition> goal;
    std::int64_t seeding_steps = 0;  // steps spent producing start states
    std::int64_t discarded_starts = 0;
    std::uint64_t seed = 0;
    std::vector<IterationRecord> history;

    Task task() const { return Task{&spec, goal}; }
    bool terminated(const WorldState& s) const { return task().succeeded(s); }
    SampleSet origin_samples() const;
};

struct Trajectory {
    std::vector<WorldState> states;  // states.size() == actions.size() + 1
    std::vector<Action> actions;
    std::vector<double> rewards;
    bool terminal = false;
    std::optional<ViolationKind> violation;

    std::size_t length() const { return actions.size(); }
    const WorldState& final_state() const { return states.back(); }
};

// Runs the policy until the task succeeds, a violation occurs, or max_steps.
// Throws PreconditionError naming the INIT predicate when start fails it.
Trajectory rollout(const Environment& env, const Task& task, const Policy& policy, const WorldState& start,
                   int max_steps);
Trajectory rollout(const Environment& env, const TrainedOption& option, const WorldState& start, int max_steps);

// Undiscounted return. A violation truncates the episode and charges -1 for
// every remaining step up to the cap.
double episode_return(const Trajectory& t, int max_steps);

struct EvalResult {
    double success_rate = 0.0;
    double mean_return = 0.0;
    std::int64_t env_steps = 0;
};

EvalResult evaluate_policy(const Environment& env, const Task& task, const Policy& policy,
                           const StartStateSource& starts, int episodes, std::uint64_t seed);

// Evaluates against starts drawn from the option's own origin log.
EvalResult evaluate_policy(const Environment& env, const TrainedOption& option, int episodes, std::uint64_t seed);

// Cross-entropy population search over linear policy parameters.
// `warm_start` seeds the search mean. The returned option carries goal from
// `task` and the best policy seen, converged or not.
TrainedOption train_option(const Environment& env, const OptionSpec& option, const StartStateSource& starts,
                           const TrainConfig& cfg, std::uint64_t seed,
                           const std::optional<GoalCondition>& goal = std::nullopt,
                           const Policy* warm_start = nullptr);

}  // namespace optseq
