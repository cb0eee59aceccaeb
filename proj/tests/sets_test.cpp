#include <doctest.h>

#include "oracles.hpp"
#include "optseq/errors.hpp"
#include "optseq/sets.hpp"

using namespace optseq;

namespace {

SampleSet at_points(const std::vector<Vec3>& pts) {
    SampleSet s{SetKind::Origin, "t", {}};
    for (const auto& p : pts) s.samples.push_back(PoseSample{Pose(p, Quat::Identity())});
    return s;
}

}  // namespace

TEST_CASE("centroid and closest_to_centroid examples") {
    const SampleSet two = at_points({{0, 0, 0}, {2, 0, 0}});
    CHECK(centroid(two) == Vec3(1, 0, 0));
    CHECK(closest_to_centroid_index(two) == 0);
    CHECK(centroid(at_points({{0.3, 0.1, 0.2}})) == Vec3(0.3, 0.1, 0.2));
    const SampleSet with_center = at_points({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    CHECK(closest_to_centroid_index(with_center) == 1);
    CHECK_THROWS_AS(centroid(SampleSet{}), ContractError);
    CHECK_THROWS_AS(closest_to_centroid(SampleSet{}), ContractError);
}

TEST_CASE("densest_sample examples") {
    const SampleSet s = at_points({{1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {2, 2, 2}});
    CHECK(densest_sample_index(s, 1.0, 0.05) == 1);
    const SampleSet sparse = at_points({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    CHECK(densest_sample_index(sparse, 1.0, 0.05) == 0);
    CHECK_THROWS_AS(densest_sample(SampleSet{}), ContractError);
    CHECK_THROWS_AS(densest_sample(sparse, 1.0, 0.0), ContractError);
}

TEST_CASE("containment_fraction examples") {
    Rng rng(3);
    const SampleSet origin = oracle::random_set(rng, 50);
    CHECK(containment_fraction(origin, origin, 1e-9) == 1.0);

    SampleSet far = origin;
    for (auto& p : far.samples) p.pose.position.x() += 10.0;
    CHECK(containment_fraction(far, origin, 0.02) == 0.0);

    SampleSet half = origin;
    for (std::size_t i = 0; i < half.size(); i += 2) half.samples[i].pose.position.z() += 5.0;
    CHECK(containment_fraction(half, origin, 0.01) == 0.5);

    CHECK_THROWS_AS(containment_fraction(SampleSet{}, origin, 0.02), ContractError);
    CHECK_THROWS_AS(containment_fraction(origin, SampleSet{}, 0.02), ContractError);
    CHECK_THROWS_AS(containment_fraction(origin, origin, 0.0), ContractError);
}

TEST_CASE("jaccard_distance examples") {
    const SampleSet a = at_points({{0.01, 0.01, 0.01}, {0.02, 0.03, 0.04}});
    CHECK(jaccard_distance(a, a, 0.05) == 0.0);
    CHECK(jaccard_distance(a, at_points({{1, 1, 1}}), 0.05) == 1.0);
    // Voxels: a holds v1..v4, b holds v3..v4 plus v5, v6: 2 shared of 6.
    const SampleSet va = at_points({{0.01, 0, 0}, {0.11, 0, 0}, {0.21, 0, 0}, {0.31, 0, 0}});
    const SampleSet vb = at_points({{0.21, 0, 0}, {0.31, 0, 0}, {0.41, 0, 0}, {0.51, 0, 0}});
    CHECK(std::abs(jaccard_distance(va, vb, 0.1) - (1.0 - 2.0 / 6.0)) < 1e-9);
    CHECK_THROWS_AS(jaccard_distance(va, SampleSet{}, 0.1), ContractError);
    CHECK_THROWS_AS(jaccard_distance(va, vb, 0.0), ContractError);
}

TEST_CASE("selectors match brute-force oracles") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 200);
        const SampleSet a = oracle::random_set(rng, n);
        const SampleSet b = oracle::random_set(rng, 1 + uniform_index(rng, 200));
        const double omega = uniform(rng, 0.1, 2.0);
        const double eps = uniform(rng, 0.005, 0.1);
        CHECK((centroid(a) - oracle::centroid(a)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(closest_to_centroid_index(a) == oracle::closest(a));
        CHECK(densest_sample_index(a, omega, 0.05) == oracle::densest(a, omega, 0.05));
        CHECK(containment_fraction(a, b, eps, omega) == oracle::containment(a, b, eps, omega));
        CHECK(jaccard_distance(a, b, 0.05) == oracle::jaccard(a, b, 0.05));
    }
}

TEST_CASE("overlap verdict follows the threshold") {
    Rng rng(9);
    const SampleSet o = oracle::random_set(rng, 30);
    OverlapParams p;
    const OverlapReport same = overlap(o, o, p);
    CHECK(same.containment_fraction == 1.0);
    CHECK(same.jaccard_distance == 0.0);
    CHECK(same.verdict_composable);
    SampleSet shifted = o;
    for (auto& s : shifted.samples) s.pose.position.x() += 1.0;
    const OverlapReport apart = overlap(shifted, o, p);
    CHECK_FALSE(apart.verdict_composable);
    CHECK(apart.epsilon == p.epsilon);
    CHECK(apart.voxel_size == p.voxel);
}

TEST_CASE("set kind names") {
    CHECK(set_kind_from_string(to_string(SetKind::Origin)) == SetKind::Origin);
    CHECK(set_kind_from_string(to_string(SetKind::Result)) == SetKind::Result);
    CHECK_THROWS_AS(set_kind_from_string("both"), ConfigError);
}
