#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace optseq {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// Tolerance on |q| - 1 for a quaternion to count as a unit quaternion.
inline constexpr double kUnitQuatTolerance = 1e-6;

// Position in meters plus unit quaternion (w, x, y, z). The constructor
// renormalizes, so every Pose holds |q| within 1e-9 of one.
struct Pose {
    Vec3 position = Vec3::Zero();
    Quat orientation = Quat::Identity();

    Pose() = default;
    Pose(const Vec3& p, const Quat& q);

    static Pose from_yaw(const Vec3& p, double yaw_rad);

    bool is_valid() const;

    bool operator==(const Pose& o) const {
        return position == o.position && orientation.coeffs() == o.orientation.coeffs();
    }
};

Quat axis_angle(const Vec3& rotation_vector);

// Angle in radians between the body z axis and world z.
double tilt_angle(const Quat& q);

}  // namespace optseq
