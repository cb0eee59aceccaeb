#include "optseq/policy.hpp"

#include <algorithm>

#include "optseq/errors.hpp"

namespace optseq {

Features policy_features(const Observation& obs, double grasp_height) {
    const Vec3 ee = obs.segment<3>(0);
    const Vec3 cup = obs.segment<3>(8);
    const Vec3 target = obs.segment<3>(11);
    const double sign = obs[3] < 0.0 ? -1.0 : 1.0;
    Features f;
    f.segment<3>(0) = (ee - cup - Vec3(0, 0, grasp_height)) / 0.1;
    f.segment<2>(3) = (cup - target).head<2>() / 0.3;
    f[5] = (cup.z() - target.z()) / 0.1;
    f.segment<3>(6) = (ee - Vec3(0, 0, 0.2)) / 0.15;
    f.segment<2>(9) = sign * obs.segment<2>(4) / 0.1;
    f[11] = sign * obs[6] / 0.5;
    f[12] = (sign * obs[3] - 1.0) / 0.5;
    f[13] = (obs[7] - 0.5) / 0.5;
    f[14] = obs[15];
    return f;
}

Eigen::VectorXd Policy::parameters() const {
    Eigen::VectorXd theta(parameter_count());
    int k = 0;
    for (int r = 0; r < kActionSize; ++r)
        for (int c = 0; c < kFeatureSize; ++c) theta[k++] = weights(r, c);
    for (int r = 0; r < kActionSize; ++r) theta[k++] = bias[r];
    return theta;
}

Policy Policy::from_parameters(const Eigen::VectorXd& theta) {
    if (theta.size() != parameter_count()) throw ContractError("policy parameter vector has the wrong length");
    Policy p;
    int k = 0;
    for (int r = 0; r < kActionSize; ++r)
        for (int c = 0; c < kFeatureSize; ++c) p.weights(r, c) = theta[k++];
    for (int r = 0; r < kActionSize; ++r) p.bias[r] = theta[k++];
    return p;
}

Action Policy::act(const WorldState& s, const EnvConfig& cfg) const {
    if (feature_spec != kAffineFeatures) throw ConfigError("unsupported feature spec '" + feature_spec + "'");
    PolicyBias u = weights * policy_features(observe(s), cfg.grasp_point_height) + bias;
    u = u.cwiseMax(-1.0).cwiseMin(1.0);
    Action a;
    a.delta_position = u.head<3>() * cfg.max_delta_position;
    a.delta_orientation = u.segment<3>(3) * cfg.max_delta_rotation;
    a.gripper_command = 0.5 * (1.0 + u[6]);
    return a.clamped(cfg);
}

}  // namespace optseq
