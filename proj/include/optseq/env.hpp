#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optseq/pose.hpp"

namespace optseq {

// Geometry and dynamics constants of the table-top surrogate. Every field is
// overridable from the configuration file under the "env." prefix.
struct EnvConfig {
    double table_z = 0.0;
    double table_half_extent = 0.4;   // table spans x, y in [-e, e]
    Vec3 workspace_min{-1.0, -1.0, 0.0};
    Vec3 workspace_max{1.0, 1.0, 0.8};
    double edge_margin = 0.4;         // cup may not leave the table by more than this
    double grasp_radius = 0.03;
    double grasp_point_height = 0.06; // grasp point = cup + R_cup * (0, 0, h)
    double grasp_threshold = 0.3;     // aperture below which the gripper holds
    double grasp_align_deg = 20.0;    // max ee/cup orientation angle for a grasp
    double tilt_threshold_deg = 60.0; // "horizontal" cup
    double upright_deg = 15.0;        // "upright" cup for placing
    double h_lift = 0.15;
    double cup_radius = 0.04;
    double cup_height = 0.05;
    double drop_tip_height = 0.05;    // releasing from higher tips the cup
    double max_delta_position = 0.05;
    double max_delta_rotation = 0.2;
    double gripper_rate = 0.25;
    int episode_cap = 100;

    void validate() const;
};

struct WorldState {
    Pose ee;
    double gripper_aperture = 1.0;  // 1 = fully open
    bool attached = false;
    Pose cup;
    Vec3 target_position = Vec3::Zero();
    double table_z = 0.0;
    int context = 0;  // cup contents: -1 empty, 0 none, 1 full

    bool operator==(const WorldState&) const = default;
};

struct Action {
    Vec3 delta_position = Vec3::Zero();
    Vec3 delta_orientation = Vec3::Zero();  // axis-angle, world frame
    double gripper_command = 1.0;

    Action clamped(const EnvConfig& cfg) const;
};

enum class ViolationKind { Collision, CupHorizontal, CupOffTable };

inline constexpr std::array<ViolationKind, 3> kAllViolations{ViolationKind::Collision, ViolationKind::CupHorizontal,
                                                             ViolationKind::CupOffTable};

std::string to_string(ViolationKind v);

// Box of start states. Each scalar is drawn uniformly from [min, max]; a
// region with min == max everywhere is a single point.
struct InitRegion {
    // ee position; relative to the cup grasp point when ee_relative_to_grasp.
    Vec3 ee_min = Vec3::Zero();
    Vec3 ee_max = Vec3::Zero();
    bool ee_relative_to_grasp = false;
    double yaw_min_deg = 0.0;
    double yaw_max_deg = 0.0;
    double gripper_min = 1.0;
    double gripper_max = 1.0;
    bool attached = false;
    // Cup base position; x, y are offsets from the target when
    // cup_relative_to_target.
    Vec3 cup_min = Vec3::Zero();
    Vec3 cup_max = Vec3::Zero();
    bool cup_relative_to_target = false;
    Eigen::Vector2d target_min = Eigen::Vector2d::Zero();
    Eigen::Vector2d target_max = Eigen::Vector2d::Zero();
    int context_min = 0;
    int context_max = 0;

    void validate(const EnvConfig& cfg) const;
};

class Environment {
public:
    explicit Environment(EnvConfig cfg = {});

    const EnvConfig& config() const noexcept { return cfg_; }

    WorldState reset(const InitRegion& region, std::uint64_t seed) const;

    struct StepResult {
        WorldState state;
        std::optional<ViolationKind> violation;  // first of violations
        std::vector<ViolationKind> violations;
    };
    StepResult step(const WorldState& state, const Action& action) const;

    std::vector<ViolationKind> check_violations(const WorldState& state) const;

    Vec3 cup_grasp_point(const WorldState& s) const;
    bool cup_upright(const WorldState& s) const;
    bool in_workspace(const Vec3& p) const;
    // Horizontal distance of the cup from the table rectangle (0 on the table).
    double cup_distance_beyond_table(const WorldState& s) const;

private:
    bool inside_cup_volume(const WorldState& s, const Vec3& p) const;

    EnvConfig cfg_;
};

inline constexpr std::size_t kObservationSize = 16;
using Observation = Eigen::Matrix<double, kObservationSize, 1>;

// ee position (3), ee quaternion w,x,y,z (4), gripper (1), cup position (3),
// target position (3), table z (1), context (1).
Observation observe(const WorldState& s);

}  // namespace optseq
