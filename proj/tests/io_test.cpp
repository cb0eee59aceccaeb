#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "optseq/errors.hpp"
#include "optseq/harness.hpp"
#include "optseq/io.hpp"

using namespace optseq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Policy random_policy(Rng& rng) {
    Eigen::VectorXd theta(Policy::parameter_count());
    for (int i = 0; i < theta.size(); ++i) theta[i] = uniform(rng, -3, 3) / 7.0;
    return Policy::from_parameters(theta);
}

}  // namespace

TEST_CASE("sample sets round trip bit-exactly") {
    TempDir dir("optseq_io_sets");
    Rng rng(12);
    SampleSet s = oracle::random_set(rng, 150, SetKind::Result);
    s.option_name = "lift";
    s.samples[3].attached = true;
    s.samples[4].gripper_aperture = 0.1 / 3.0;
    write_sample_set(dir.file("r.csv"), s);
    const SampleSet back = read_sample_set(dir.file("r.csv"));
    CHECK(back.kind == SetKind::Result);
    CHECK(back.option_name == "lift");
    CHECK(back.samples == s.samples);
    CHECK(fs::exists(dir.file("r.csv.json")));
}

TEST_CASE("world states round trip bit-exactly") {
    TempDir dir("optseq_io_states");
    Rng rng(13);
    std::vector<WorldState> states;
    for (int i = 0; i < 40; ++i) {
        WorldState s = fixtures::above_cup(uniform(rng, 0, 0.3));
        s.ee.orientation = oracle::random_quat(rng);
        s.cup.orientation = oracle::random_quat(rng);
        s.cup.position.x() = uniform(rng, -0.1, 0.1);
        s.gripper_aperture = uniform(rng, 0, 1);
        s.attached = i % 3 == 0;
        s.context = i % 3 - 1;
        states.push_back(s);
    }
    write_states(dir.file("s.csv"), states);
    CHECK(read_states(dir.file("s.csv")) == states);
    write_states(dir.file("empty.csv"), {});
    CHECK(read_states(dir.file("empty.csv")).empty());
}

TEST_CASE("policy files round trip bit-exactly") {
    Rng rng(14);
    PolicyFile f{"carry", random_policy(rng), 123456789, 42, 0xfedcba9876543210ULL, true, std::nullopt};
    CHECK(parse_policy_file(format_policy_file(f)) == f);
    f.goal = GoalCondition{Pose(Vec3(0.1, 0.2, 1.0 / 3.0), oracle::random_quat(rng)), 0.01, 1.0};
    f.converged = false;
    const PolicyFile back = parse_policy_file(format_policy_file(f));
    CHECK(back == f);
    CHECK(format_policy_file(back) == format_policy_file(f));
}

TEST_CASE("malformed policy files are configuration errors") {
    Rng rng(15);
    const PolicyFile f{"reach", random_policy(rng), 1, 0, 1, true, std::nullopt};
    const std::string text = format_policy_file(f);
    CHECK_THROWS_AS(parse_policy_file(""), ConfigError);
    CHECK_THROWS_AS(parse_policy_file(text.substr(0, text.size() / 2)), ConfigError);
    std::string bad = text;
    bad.replace(bad.find("steps_used 1"), 12, "steps_used x");
    CHECK_THROWS_AS(parse_policy_file(bad), ConfigError);
    std::string version = text;
    version.replace(0, 15, "optseq-policy 9");
    CHECK_THROWS_AS(parse_policy_file(version), ConfigError);
}

TEST_CASE("trained options round trip through a directory") {
    TempDir dir("optseq_io_options");
    const Environment env;
    const auto seq = canonical_sequence(env);
    Rng rng(16);
    TrainedOption t;
    t.spec = seq[2];
    t.policy = random_policy(rng);
    t.steps_used = 99;
    t.seeding_steps = 7;
    t.seed = 5;
    t.converged = true;
    for (int i = 0; i < 10; ++i) {
        WorldState s = fixtures::at_grasp_point();
        s.ee.orientation = oracle::random_quat(rng);
        t.origin_log.push_back(s);
    }
    save_trained_option(dir.path.string(), t);
    const TrainedOption back = load_trained_option(dir.path.string(), seq[2]);
    CHECK(back.policy == t.policy);
    CHECK(back.origin_log == t.origin_log);
    CHECK(back.steps_used == 99);
    CHECK(back.seeding_steps == 7);
    CHECK(back.seed == 5);
    CHECK(back.converged);
    CHECK(back.spec.term == seq[2].term);

    // Loading under another option's name is a provenance error.
    fs::copy_file(dir.file("lift.policy"), dir.file("carry.policy"));
    fs::copy_file(dir.file("lift.starts.csv"), dir.file("carry.starts.csv"));
    CHECK_THROWS_AS(load_trained_option(dir.path.string(), seq[3]), ProvenanceError);
    CHECK_THROWS_AS(load_trained_option(dir.path.string(), seq[4]), IoError);
}

TEST_CASE("bad sample files") {
    TempDir dir("optseq_io_bad");
    write_text(dir.file("x.csv"), "a,b\n1,2\n");
    write_text(dir.file("x.csv.json"), "{\"kind\": \"origin\", \"option\": \"reach\"}");
    CHECK_THROWS_AS(read_sample_set(dir.file("x.csv")), ConfigError);
    write_text(dir.file("y.csv"), "px,py,pz,qw,qx,qy,qz,gripper,attached,episode\n0,0,0,0,0,0,0,1,0,0\n");
    write_text(dir.file("y.csv.json"), "{\"kind\": \"origin\", \"option\": \"reach\"}");
    CHECK_THROWS_AS(read_sample_set(dir.file("y.csv")), ConfigError);
    write_text(dir.file("z.csv"), "px,py,pz,qw,qx,qy,qz,gripper,attached,episode\n");
    write_text(dir.file("z.csv.json"), "{\"kind\": \"sideways\", \"option\": \"reach\"}");
    CHECK_THROWS_AS(read_sample_set(dir.file("z.csv")), ConfigError);
    CHECK_THROWS_AS(read_sample_set(dir.file("none.csv")), IoError);
}
