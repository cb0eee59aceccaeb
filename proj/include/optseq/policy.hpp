#pragma once

#include <string>

#include "optseq/env.hpp"

namespace optseq {

inline constexpr int kActionSize = 7;
inline constexpr int kFeatureSize = 15;
inline constexpr const char* kAffineFeatures = "relative-affine-v1";

using PolicyWeights = Eigen::Matrix<double, kActionSize, kFeatureSize>;
using PolicyBias = Eigen::Matrix<double, kActionSize, 1>;
using Features = Eigen::Matrix<double, kFeatureSize, 1>;

// Linear policy over a fixed affine map of the observation
// ("relative-affine-v1", see policy_features). The output u = W f + b is
// clipped to [-1, 1] per channel and scaled to the environment's limits:
//   delta_position = u[0:3] * max_delta_position
//   delta_orientation = u[3:6] * max_delta_rotation
//   gripper_command = (1 + u[6]) / 2
struct Policy {
    PolicyWeights weights = PolicyWeights::Zero();
    PolicyBias bias = PolicyBias::Zero();
    std::string feature_spec = kAffineFeatures;

    static constexpr int parameter_count() { return kActionSize * kFeatureSize + kActionSize; }

    Eigen::VectorXd parameters() const;
    static Policy from_parameters(const Eigen::VectorXd& theta);

    Action act(const WorldState& s, const EnvConfig& cfg) const;

    bool operator==(const Policy& o) const {
        return weights == o.weights && bias == o.bias && feature_spec == o.feature_spec;
    }
};

// Fixed affine map of the observation; quaternion sign is canonicalized to
// w >= 0 first. Layout:
//   0-2   (ee - cup - (0, 0, grasp_height)) / 0.1
//   3-4   (cup - target).xy / 0.3
//   5     (cup - target).z / 0.1
//   6-8   (ee - (0, 0, 0.2)) / 0.15
//   9-10  quaternion x, y / 0.1
//   11    quaternion z / 0.5
//   12    (quaternion w - 1) / 0.5
//   13    (gripper - 0.5) / 0.5
//   14    context
Features policy_features(const Observation& obs, double grasp_height = 0.06);

}  // namespace optseq
