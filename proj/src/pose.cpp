#include "optseq/pose.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optseq/errors.hpp"
#include "optseq/geometry.hpp"

namespace optseq {

Pose::Pose(const Vec3& p, const Quat& q) : position(p), orientation(q) {
    if (!position.allFinite()) throw ContractError("pose position is not finite");
    const double n = orientation.norm();
    if (!std::isfinite(n) || n < 1e-12) throw ContractError("pose orientation is degenerate");
    orientation.coeffs() /= n;
}

Pose Pose::from_yaw(const Vec3& p, double yaw_rad) {
    return Pose(p, Quat(Eigen::AngleAxisd(yaw_rad, Vec3::UnitZ())));
}

bool Pose::is_valid() const {
    return position.allFinite() && std::abs(orientation.norm() - 1.0) <= 1e-9;
}

Quat axis_angle(const Vec3& rotation_vector) {
    const double angle = rotation_vector.norm();
    if (angle < 1e-15) return Quat::Identity();
    return Quat(Eigen::AngleAxisd(angle, rotation_vector / angle));
}

double tilt_angle(const Quat& q) {
    const Vec3 up = q * Vec3::UnitZ();
    return std::acos(std::clamp(up.z(), -1.0, 1.0));
}

namespace {

void require_unit(const Quat& q, const char* which) {
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitQuatTolerance)
        throw ContractError(std::string(which) + " is not a unit quaternion");
}

}  // namespace

double orientation_difference(const Quat& q1, const Quat& q2, double omega_r) {
    if (!(omega_r > 0.0) || !std::isfinite(omega_r)) throw ContractError("omega_r must be positive");
    require_unit(q1, "q1");
    require_unit(q2, "q2");
    const double dot = q1.w() * q2.w() + q1.x() * q2.x() + q1.y() * q2.y() + q1.z() * q2.z();
    const double a = std::min(std::abs(dot), 1.0);
    return omega_r * (1.0 - a);
}

double pose_distance(const Pose& a, const Pose& b, double omega_r) {
    return (b.position - a.position).norm() + orientation_difference(a.orientation, b.orientation, omega_r);
}

}  // namespace optseq
