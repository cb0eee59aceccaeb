#pragma once

#include "optseq/pose.hpp"

namespace optseq {

inline constexpr double kDefaultOmegaR = 1.0;

// rho = omega_r * (1 - |q1 . q2|). Lies in [0, omega_r]; zero for identical
// orientations (either quaternion sign), omega_r for a 180 degree difference.
// Throws ContractError for non-unit inputs or omega_r <= 0.
double orientation_difference(const Quat& q1, const Quat& q2, double omega_r = kDefaultOmegaR);

// Euclidean position distance plus orientation_difference.
double pose_distance(const Pose& a, const Pose& b, double omega_r = kDefaultOmegaR);

}  // namespace optseq
