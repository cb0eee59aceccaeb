#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "optseq/config.hpp"
#include "optseq/errors.hpp"
#include "optseq/learner.hpp"

using namespace optseq;

namespace {

InitRegion hover_region(double dz_min, double dz_max) {
    InitRegion r;
    r.ee_relative_to_grasp = true;
    r.ee_min = Vec3(-0.05, -0.05, dz_min);
    r.ee_max = Vec3(0.05, 0.05, dz_max);
    r.target_min = r.target_max = Eigen::Vector2d(0.25, 0.2);
    return r;
}

TrainConfig small_config() {
    TrainConfig c;
    c.population = 8;
    c.eval_episodes = 4;
    c.episodes_per_candidate = 2;
    c.max_env_steps = 20'000;
    return c;
}

}  // namespace

TEST_CASE("policy parameters round trip") {
    Policy p = fixtures::homing_policy();
    p.weights(4, 9) = -0.25;
    p.bias[2] = 0.125;
    CHECK(Policy::from_parameters(p.parameters()) == p);
    CHECK(p.parameters().size() == Policy::parameter_count());
    CHECK_THROWS_AS(Policy::from_parameters(Eigen::VectorXd::Zero(3)), ContractError);
}

TEST_CASE("features ignore the quaternion sign") {
    WorldState s = fixtures::above_cup(0.1);
    s.ee.orientation = Quat(Eigen::AngleAxisd(0.7, Vec3(0.3, 0.1, 1.0).normalized()));
    WorldState t = s;
    t.ee.orientation.coeffs() *= -1.0;
    CHECK(policy_features(observe(s)) == policy_features(observe(t)));
    const Features f = policy_features(observe(fixtures::at_grasp_point()));
    CHECK(f.head<3>().isZero());
    CHECK(f[12] == 0.0);
}

TEST_CASE("rollout contracts") {
    const Environment env;
    const auto seq = canonical_sequence(env);
    const Task reach{&seq[0], std::nullopt};

    const Trajectory done = rollout(env, reach, Policy{}, fixtures::at_grasp_point(), 100);
    CHECK(done.length() == 0);
    CHECK(done.terminal);

    const Trajectory homing = rollout(env, reach, fixtures::homing_policy(), fixtures::above_cup(0.2), 100);
    CHECK(homing.terminal);
    CHECK(homing.states.size() == homing.actions.size() + 1);
    CHECK(homing.rewards.size() == homing.actions.size());
    CHECK(homing.rewards.back() > 900.0);

    WorldState closed = fixtures::above_cup(0.2);
    closed.gripper_aperture = 0.1;
    try {
        rollout(env, reach, Policy{}, closed, 10);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.predicate() == "reach.init");
    }

    // Drive straight down into the table.
    Policy down;
    down.bias[2] = -1.0;
    down.bias[6] = 1.0;
    WorldState start = fixtures::above_cup(0.2);
    start.ee.position.x() = 0.2;
    const Trajectory crash = rollout(env, reach, down, start, 100);
    REQUIRE(crash.violation);
    CHECK(*crash.violation == ViolationKind::Collision);
    CHECK_FALSE(crash.terminal);
    CHECK(crash.length() == 6);
    CHECK(episode_return(crash, 100) ==
          doctest::Approx(std::accumulate(crash.rewards.begin(), crash.rewards.end(), 0.0) - 94.0));
}

TEST_CASE("evaluate_policy on scripted policies") {
    const Environment env;
    const auto seq = canonical_sequence(env);
    const Task reach{&seq[0], std::nullopt};
    InitRegion point = hover_region(0.1, 0.1);
    point.ee_min.head<2>().setZero();
    point.ee_max.head<2>().setZero();
    const auto ok = evaluate_policy(env, reach, fixtures::homing_policy(), region_source(env, point), 10, 1);
    CHECK(ok.success_rate == 1.0);
    const auto idle = evaluate_policy(env, reach, Policy{}, region_source(env, point), 10, 1);
    CHECK(idle.success_rate == 0.0);
    CHECK(idle.env_steps == 10 * env.config().episode_cap);
}

TEST_CASE("zero budget trains nothing") {
    const Environment env;
    const auto seq = canonical_sequence(env);
    TrainConfig c = small_config();
    c.max_env_steps = 0;
    const TrainedOption t = train_option(env, seq[0], region_source(env, hover_region(0.05, 0.2)), c, 3);
    CHECK_FALSE(t.converged);
    CHECK(t.steps_used == 0);
    CHECK(t.history.empty());
    CHECK(t.origin_log.empty());
}

TEST_CASE("training is deterministic and its step log adds up") {
    const Environment env;
    const auto seq = canonical_sequence(env);
    const auto src = region_source(env, hover_region(0.05, 0.2));
    const TrainedOption a = train_option(env, seq[0], src, small_config(), 42);
    const TrainedOption b = train_option(env, seq[0], src, small_config(), 42);
    CHECK(a.policy == b.policy);
    CHECK(a.steps_used == b.steps_used);
    CHECK(a.origin_log == b.origin_log);
    REQUIRE(a.history.size() == b.history.size());
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].eval_return == b.history[i].eval_return);
        sum += a.history[i].env_steps;
        CHECK(a.history[i].steps_used == sum);
    }
    CHECK(sum == a.steps_used);
    CHECK(a.seed == 42);
    for (const auto& s : a.origin_log) CHECK((*seq[0].init)(s));

    const TrainedOption c = train_option(env, seq[0], src, small_config(), 43);
    CHECK_FALSE(c.origin_log == a.origin_log);
}

TEST_CASE("start sources must satisfy INIT") {
    const Environment env;
    const auto seq = canonical_sequence(env);
    // Grasp needs the ee at the grasp point; a hover region does not satisfy it.
    CHECK_THROWS_AS(train_option(env, seq[1], region_source(env, hover_region(0.1, 0.2)), small_config(), 1),
                    ConfigError);
    CHECK_THROWS_AS(log_source({}), ProvenanceError);
}

TEST_CASE("train config validation") {
    TrainConfig c;
    CHECK_NOTHROW(c.validate());
    c.population = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = TrainConfig{};
    c.elite_fraction = 0.9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = TrainConfig{};
    c.rotation_noise_scale = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("reach converges from a broad region within two million steps") {
    const Scenario s = Scenario::offset_default();
    const Environment env(s.env);
    const auto seq = canonical_sequence(env, s.tolerances);
    TrainConfig c;
    c.max_env_steps = 2'000'000;
    c.eval_episodes = 100;
    const TrainedOption t = train_option(env, seq[0], region_source(env, s.region("reach")), c, 1);
    CHECK(t.converged);
    CHECK(t.steps_used <= 2'000'000 + 100'000);
    CHECK(evaluate_policy(env, t, 100, 5).success_rate >= 0.9);
}
