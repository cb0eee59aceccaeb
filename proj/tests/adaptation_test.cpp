#include <doctest.h>

#include "fixtures.hpp"
#include "optseq/adaptation.hpp"
#include "optseq/errors.hpp"

using namespace optseq;

namespace {

// One shared sequence so that reach.term and grasp.init are the same object.
const std::vector<OptionSpec>& sequence() {
    static const std::vector<OptionSpec> seq = canonical_sequence(Environment{});
    return seq;
}

TrainedOption homing_reach() {
    TrainedOption t;
    t.spec = sequence()[0];
    t.policy = fixtures::homing_policy();
    t.converged = true;
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        WorldState s = fixtures::above_cup(uniform(rng, 0.05, 0.25));
        s.ee.position.x() += uniform(rng, -0.1, 0.1);
        s.ee.position.y() += uniform(rng, -0.1, 0.1);
        t.origin_log.push_back(s);
    }
    return t;
}

// A grasp option trained somewhere else: its origin log sits at a different yaw.
TrainedOption offset_grasp() {
    TrainedOption t;
    t.spec = sequence()[1];
    t.converged = true;
    t.steps_used = 1234;
    for (int i = 0; i < 50; ++i) {
        WorldState s = fixtures::at_grasp_point();
        s.ee.orientation = Quat(Eigen::AngleAxisd(1.5 + 0.01 * i, Vec3::UnitZ()));
        t.origin_log.push_back(s);
    }
    return t;
}

AdaptationSettings small_settings() {
    AdaptationSettings s;
    s.train.population = 8;
    s.train.eval_episodes = 4;
    s.train.episodes_per_candidate = 2;
    s.train.max_env_steps = 4000;
    s.finetune = s.train;
    s.adapt.origin_samples = 100;
    s.adapt.result_rollouts = 100;
    return s;
}

SampleSet set_of(const std::vector<Pose>& poses, const std::string& option) {
    SampleSet s{SetKind::Origin, option, {}};
    for (const auto& p : poses) s.samples.push_back(PoseSample{p});
    return s;
}

}  // namespace

TEST_CASE("method names") {
    for (auto m : {AdaptationMethod::Origin, AdaptationMethod::RMCentroid, AdaptationMethod::RMDensity})
        CHECK(adaptation_method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(adaptation_method_from_string("rm"), ConfigError);
}

TEST_CASE("unconnected chains are rejected by name") {
    const WorldState start = fixtures::at_grasp_point();
    auto chain = fixtures::scripted_chain({true, true, true}, start);
    chain[2].spec.init = fixtures::condition("other", true);
    try {
        adapt_sequence(Environment{}, chain, AdaptationMethod::Origin, small_settings(), 1);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'opt1' and 'opt2'") != std::string::npos);
    }
}

TEST_CASE("length-1 chain is returned unchanged") {
    const auto chain = fixtures::scripted_chain({true}, fixtures::at_grasp_point());
    const auto r = adapt_sequence(Environment{}, chain, AdaptationMethod::RMCentroid, small_settings(), 1);
    CHECK(r.outcomes.empty());
    REQUIRE(r.chain.size() == 1);
    CHECK(r.chain[0].policy == chain[0].policy);
}

TEST_CASE("result methods skip pairs that already compose") {
    const auto chain = fixtures::scripted_chain({true, true, true}, fixtures::at_grasp_point());
    for (auto m : {AdaptationMethod::RMCentroid, AdaptationMethod::RMDensity}) {
        const auto r = adapt_sequence(Environment{}, chain, m, small_settings(), 2);
        REQUIRE(r.outcomes.size() == 2);
        CHECK(r.outcomes[0].predecessor == "opt1");  // back to front
        CHECK(r.outcomes[1].predecessor == "opt0");
        for (const auto& o : r.outcomes) {
            CHECK(o.skipped);
            CHECK(o.pre_overlap.verdict_composable);
            CHECK(o.steps_used == 0);
        }
    }
}

TEST_CASE("origin method retrains every successor") {
    const auto chain = fixtures::scripted_chain({true, true, true}, fixtures::at_grasp_point());
    const auto r = adapt_sequence(Environment{}, chain, AdaptationMethod::Origin, small_settings(), 3);
    REQUIRE(r.outcomes.size() == 2);
    CHECK(r.outcomes[0].successor == "opt1");
    CHECK(r.outcomes[1].successor == "opt2");
    CHECK(r.chain[0].policy == chain[0].policy);
    CHECK(r.chain[0].steps_used == chain[0].steps_used);
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(r.chain[i].converged);
        CHECK(r.chain[i].steps_used == r.outcomes[i - 1].steps_used);
        CHECK(r.chain[i].spec.term == chain[i].spec.term);
    }
}

TEST_CASE("origin method seeds from predecessor results") {
    const Environment env;
    const TrainedOption reach = homing_reach();
    const TrainedOption grasp = offset_grasp();
    const AdaptationOutcome o = adapt_origin(env, reach, grasp, small_settings(), 4);
    CHECK(o.method == AdaptationMethod::Origin);
    CHECK(o.predecessor == "reach");
    CHECK(o.successor == "grasp");
    REQUIRE_FALSE(o.adapted.origin_log.empty());
    for (const auto& s : o.adapted.origin_log) CHECK((*reach.spec.term)(s));
    CHECK(o.seeding_steps == o.adapted.seeding_steps);
    CHECK(o.seeding_steps > 0);
    CHECK(o.discard_rate == 0.0);
    // Identity-yaw results never come near an origin set at ~90 degrees.
    CHECK(o.pre_overlap.containment_fraction == 0.0);
    CHECK(o.post_overlap.containment_fraction > o.pre_overlap.containment_fraction);
    CHECK(o.adapted.spec.init == grasp.spec.init);
}

TEST_CASE("origin method with zero budget keeps the overlap report") {
    const Environment env;
    AdaptationSettings s = small_settings();
    s.train.max_env_steps = 0;
    const AdaptationOutcome o = adapt_origin(env, homing_reach(), offset_grasp(), s, 5);
    CHECK_FALSE(o.adapted.converged);
    CHECK(o.steps_used == 0);
    CHECK(o.pre_overlap.epsilon == s.overlap.epsilon);
    CHECK(o.post_overlap.containment_fraction == o.pre_overlap.containment_fraction);
}

TEST_CASE("origin method preconditions") {
    const Environment env;
    TrainedOption reach = homing_reach();
    reach.converged = false;
    try {
        adapt_origin(env, reach, offset_grasp(), small_settings(), 1);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.predicate() == "converged");
    }
    reach.converged = true;
    reach.policy = Policy{};
    try {
        adapt_origin(env, reach, offset_grasp(), small_settings(), 1);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.predicate() == "predecessor_quality");
    }
    reach.policy = fixtures::homing_policy();
    TrainedOption lift = offset_grasp();
    lift.spec = sequence()[2];
    CHECK_THROWS_AS(adapt_origin(env, reach, lift, small_settings(), 1), ConfigError);
}

TEST_CASE("result method goals come from the selectors") {
    const Environment env;
    // Bimodal: a tight cluster away from the middle, a loose spread around it.
    std::vector<Pose> poses;
    for (int i = 0; i < 10; ++i) poses.emplace_back(Vec3(0.3 + 0.001 * i, 0.0, 0.1), Quat::Identity());
    for (int i = 0; i < 12; ++i) poses.emplace_back(Vec3(-0.2 + 0.04 * i, 0.2, 0.1), Quat::Identity());
    const SampleSet origin = set_of(poses, "grasp");
    const TrainedOption reach = homing_reach();
    const AdaptationSettings s = small_settings();

    const AdaptationOutcome c = adapt_result(env, reach, origin, AdaptationMethod::RMCentroid, s, 6);
    const AdaptationOutcome d = adapt_result(env, reach, origin, AdaptationMethod::RMDensity, s, 6);
    REQUIRE(c.goal_pose);
    REQUIRE(d.goal_pose);
    CHECK(*c.goal_pose == closest_to_centroid(origin).pose);
    CHECK(*d.goal_pose == densest_sample(origin, s.overlap.omega_r, s.adapt.density_radius).pose);
    CHECK_FALSE(*c.goal_pose == *d.goal_pose);
    CHECK(c.warm_started);
    CHECK(c.adapted.goal);
    CHECK(c.adapted.spec.term == reach.spec.term);
    CHECK(c.adapted.seed == d.adapted.seed);
}

TEST_CASE("result method toward a goal it already reaches converges at once") {
    const Environment env;
    const TrainedOption reach = homing_reach();
    AdaptationSettings s = small_settings();
    s.adapt.goal_tolerance = 0.03;
    s.finetune.max_env_steps = 1'000'000;
    const SampleSet origin = set_of({Pose(Vec3(0, 0, 0.06), Quat::Identity())}, "grasp");
    const AdaptationOutcome o = adapt_result(env, reach, origin, AdaptationMethod::RMCentroid, s, 7);
    CHECK(o.adapted.converged);
    CHECK(o.adapted.history.size() == 1);
    CHECK(o.post_overlap.containment_fraction >= o.pre_overlap.containment_fraction);
}

TEST_CASE("result method preconditions") {
    const Environment env;
    TrainedOption reach = homing_reach();
    const SampleSet origin = set_of({Pose(Vec3(0, 0, 0.06), Quat::Identity())}, "grasp");
    CHECK_THROWS_AS(adapt_result(env, reach, origin, AdaptationMethod::Origin, small_settings(), 1), ConfigError);
    CHECK_THROWS_AS(adapt_result(env, reach, SampleSet{}, AdaptationMethod::RMDensity, small_settings(), 1),
                    ProvenanceError);
    reach.converged = false;
    CHECK_THROWS_AS(adapt_result(env, reach, origin, AdaptationMethod::RMCentroid, small_settings(), 1),
                    PreconditionError);
}

TEST_CASE("non-converging result adaptation is reported, not thrown") {
    const Environment env;
    AdaptationSettings s = small_settings();
    s.finetune.max_env_steps = 2000;
    // A goal far outside anything reach can terminate at.
    const SampleSet origin = set_of({Pose(Vec3(0.5, 0.5, 0.5), Quat::Identity())}, "grasp");
    AdaptationOutcome o;
    CHECK_NOTHROW(o = adapt_result(env, homing_reach(), origin, AdaptationMethod::RMCentroid, s, 8));
    CHECK_FALSE(o.adapted.converged);
    CHECK(o.post_overlap.containment_fraction == 0.0);
}
