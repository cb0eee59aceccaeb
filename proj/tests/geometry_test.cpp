#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optseq/errors.hpp"
#include "optseq/geometry.hpp"
#include "optseq/options.hpp"

using namespace optseq;

namespace {
Quat about_z(double deg) { return Quat(Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Vec3::UnitZ())); }
}  // namespace

TEST_CASE("orientation_difference examples") {
    const Quat q = about_z(30.0);
    CHECK(orientation_difference(q, q) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(orientation_difference(Quat::Identity(), about_z(180.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(orientation_difference(q, about_z(120.0)) - 0.292893) < 1e-6);
    CHECK(std::abs(orientation_difference(q, about_z(120.0), 2.5) - 2.5 * 0.2928932188) < 1e-9);
}

TEST_CASE("orientation_difference is invariant to quaternion sign") {
    const Quat a = about_z(40.0) * Quat(Eigen::AngleAxisd(0.3, Vec3::UnitX()));
    const Quat b = about_z(-75.0);
    const Quat neg(-b.w(), -b.x(), -b.y(), -b.z());
    CHECK(orientation_difference(a, b) == orientation_difference(a, neg));
}

TEST_CASE("orientation_difference rejects bad input") {
    CHECK_THROWS_AS(orientation_difference(Quat(2, 0, 0, 0), Quat::Identity()), ContractError);
    CHECK_THROWS_AS(orientation_difference(Quat::Identity(), Quat::Identity(), 0.0), ContractError);
    CHECK_NOTHROW(orientation_difference(Quat(1.0 + 5e-7, 0, 0, 0), Quat::Identity()));
}

TEST_CASE("pose_distance examples") {
    const Pose a(Vec3(0.1, 0.2, 0.3), Quat::Identity());
    CHECK(pose_distance(a, a) == 0.0);
    CHECK(pose_distance(a, Pose(Vec3(0.4, 0.2, 0.3), Quat::Identity())) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(pose_distance(a, Pose(Vec3(0.2, 0.2, 0.3), about_z(90.0))) - 0.392893) < 1e-6);
}

TEST_CASE("Pose renormalizes and validates") {
    const Pose p(Vec3::Zero(), Quat(2, 0, 0, 0));
    CHECK(p.is_valid());
    CHECK(std::abs(p.orientation.norm() - 1.0) < 1e-12);
    const Pose y = Pose::from_yaw(Vec3::Zero(), std::numbers::pi / 2);
    CHECK(orientation_difference(y.orientation, about_z(90.0)) < 1e-12);
    CHECK(tilt_angle(Quat(Eigen::AngleAxisd(0.4, Vec3::UnitY()))) == doctest::Approx(0.4));
}

TEST_CASE("shaped_reward examples") {
    CHECK(shaped_reward(0.0) == 0.0);
    CHECK(std::abs(shaped_reward(10.0) + 1.0) < 1e-8);
    CHECK(std::abs(shaped_reward(0.5) + 0.213553) < 1e-6);
    CHECK_THROWS_AS(shaped_reward(-0.1), ContractError);
    CHECK_THROWS_AS(shaped_reward(std::nan("")), ContractError);
    CHECK_THROWS_AS(shaped_reward(INFINITY), ContractError);
}

TEST_CASE("adaptation_reward examples") {
    const Pose goal(Vec3(0.1, 0.0, 0.2), about_z(20.0));
    CHECK(adaptation_reward(goal, goal, 1.0) == 0.0);
    CHECK(std::abs(adaptation_reward(Pose(Vec3(0.2, 0.0, 0.2), about_z(20.0)), goal, 1.0) + 0.099336) < 1e-5);
    CHECK(std::abs(adaptation_reward(Pose(goal.position, about_z(200.0)), goal, 1.0) + 5.80026) < 1e-4);
    Pose bad = goal;
    bad.orientation = Quat(0.5, 0, 0, 0);
    CHECK_THROWS_AS(adaptation_reward(bad, goal, 1.0), ContractError);
}
