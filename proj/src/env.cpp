#include "optseq/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optseq/errors.hpp"
#include "optseq/rng.hpp"

namespace optseq {

namespace {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

void require_ordered(double lo, double hi, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw ConfigError(std::string("region bound '") + what + "' is empty or not finite");
}

}  // namespace

void EnvConfig::validate() const {
    if (!(table_half_extent > 0.0)) throw ConfigError("env.table_half_extent must be positive");
    for (int i = 0; i < 3; ++i)
        if (!(workspace_min[i] < workspace_max[i])) throw ConfigError("env.workspace box is empty");
    if (table_z < workspace_min.z() || table_z > workspace_max.z())
        throw ConfigError("env.table_z lies outside the workspace");
    if (!(grasp_radius > 0.0) || !(cup_radius > 0.0) || !(cup_height > 0.0))
        throw ConfigError("env cup/grasp dimensions must be positive");
    if (!(grasp_threshold > 0.0 && grasp_threshold < 1.0)) throw ConfigError("env.grasp_threshold must be in (0,1)");
    if (!(max_delta_position > 0.0) || !(max_delta_rotation > 0.0) || !(gripper_rate > 0.0))
        throw ConfigError("env action limits must be positive");
    if (episode_cap < 1) throw ConfigError("env.episode_cap must be >= 1");
}

Action Action::clamped(const EnvConfig& cfg) const {
    Action a;
    for (int i = 0; i < 3; ++i) {
        a.delta_position[i] =
            std::clamp(finite_or_zero(delta_position[i]), -cfg.max_delta_position, cfg.max_delta_position);
        a.delta_orientation[i] = finite_or_zero(delta_orientation[i]);
    }
    const double n = a.delta_orientation.norm();
    // The small slack keeps clamping idempotent after rescaling.
    if (n > cfg.max_delta_rotation + 1e-12) a.delta_orientation *= cfg.max_delta_rotation / n;
    a.gripper_command = std::clamp(finite_or_zero(gripper_command), 0.0, 1.0);
    return a;
}

std::string to_string(ViolationKind v) {
    switch (v) {
        case ViolationKind::Collision: return "collision";
        case ViolationKind::CupHorizontal: return "cup_horizontal";
        case ViolationKind::CupOffTable: return "cup_off_table";
    }
    return "unknown";
}

void InitRegion::validate(const EnvConfig& cfg) const {
    static const char* axis[] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i) {
        require_ordered(ee_min[i], ee_max[i], (std::string("ee_") + axis[i]).c_str());
        require_ordered(cup_min[i], cup_max[i], (std::string("cup_") + axis[i]).c_str());
    }
    for (int i = 0; i < 2; ++i) require_ordered(target_min[i], target_max[i], i == 0 ? "target_x" : "target_y");
    require_ordered(yaw_min_deg, yaw_max_deg, "yaw");
    require_ordered(gripper_min, gripper_max, "gripper");
    if (gripper_min < 0.0 || gripper_max > 1.0) throw ConfigError("region gripper bounds must lie in [0,1]");
    if (context_min > context_max || context_min < -1 || context_max > 1)
        throw ConfigError("region context bounds must lie in {-1,0,1}");

    auto inside = [&](const Vec3& p) {
        return (p.array() >= cfg.workspace_min.array()).all() && (p.array() <= cfg.workspace_max.array()).all();
    };
    Vec3 cup_lo = cup_min, cup_hi = cup_max;
    if (cup_relative_to_target) {
        cup_lo.head<2>() += target_min;
        cup_hi.head<2>() += target_max;
    }
    if (!inside(cup_lo) || !inside(cup_hi)) throw ConfigError("region cup bounds leave the workspace");
    if (!ee_relative_to_grasp) {
        if (!inside(ee_min) || !inside(ee_max)) throw ConfigError("region ee bounds leave the workspace");
    } else {
        const Vec3 lo = cup_lo + Vec3(0, 0, cfg.grasp_point_height) + ee_min;
        const Vec3 hi = cup_hi + Vec3(0, 0, cfg.grasp_point_height) + ee_max;
        if (!inside(lo) || !inside(hi)) throw ConfigError("region ee bounds leave the workspace");
    }
    if (attached) {
        if (!ee_relative_to_grasp) throw ConfigError("an attached region must place the ee relative to the grasp point");
        const double reach = std::max(ee_min.cwiseAbs().maxCoeff(), ee_max.cwiseAbs().maxCoeff());
        if (std::sqrt(3.0) * reach > cfg.grasp_radius)
            throw ConfigError("attached region places the ee outside the grasp radius");
        if (gripper_max >= cfg.grasp_threshold) throw ConfigError("attached region needs a closed gripper");
    }
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Vec3 Environment::cup_grasp_point(const WorldState& s) const {
    return s.cup.position + s.cup.orientation * Vec3(0, 0, cfg_.grasp_point_height);
}

bool Environment::cup_upright(const WorldState& s) const {
    return tilt_angle(s.cup.orientation) <= deg2rad(cfg_.upright_deg);
}

bool Environment::in_workspace(const Vec3& p) const {
    return (p.array() >= cfg_.workspace_min.array()).all() && (p.array() <= cfg_.workspace_max.array()).all();
}

double Environment::cup_distance_beyond_table(const WorldState& s) const {
    const double e = cfg_.table_half_extent;
    const double dx = std::max(std::abs(s.cup.position.x()) - e, 0.0);
    const double dy = std::max(std::abs(s.cup.position.y()) - e, 0.0);
    return std::hypot(dx, dy);
}

bool Environment::inside_cup_volume(const WorldState& s, const Vec3& p) const {
    const Vec3 rel = p - s.cup.position;
    return rel.head<2>().norm() < cfg_.cup_radius && rel.z() >= 0.0 && rel.z() <= cfg_.cup_height;
}

WorldState Environment::reset(const InitRegion& region, std::uint64_t seed) const {
    region.validate(cfg_);
    Rng rng(derive_seed(seed, 0x5245534554ULL));

    WorldState s;
    s.table_z = cfg_.table_z;
    Vec3 cup;
    for (int i = 0; i < 3; ++i) cup[i] = uniform(rng, region.cup_min[i], region.cup_max[i]);
    s.target_position = Vec3(uniform(rng, region.target_min.x(), region.target_max.x()),
                             uniform(rng, region.target_min.y(), region.target_max.y()), cfg_.table_z);
    if (region.cup_relative_to_target) cup.head<2>() += s.target_position.head<2>();
    s.cup = Pose(cup, Quat::Identity());
    const double yaw = deg2rad(uniform(rng, region.yaw_min_deg, region.yaw_max_deg));
    Vec3 ee;
    for (int i = 0; i < 3; ++i) ee[i] = uniform(rng, region.ee_min[i], region.ee_max[i]);
    if (region.ee_relative_to_grasp) ee += cup_grasp_point(s);
    s.ee = Pose::from_yaw(ee, yaw);
    s.gripper_aperture = uniform(rng, region.gripper_min, region.gripper_max);
    s.attached = region.attached;
    s.context = region.context_min == region.context_max
                    ? region.context_min
                    : std::uniform_int_distribution<int>(region.context_min, region.context_max)(rng);
    return s;
}

Environment::StepResult Environment::step(const WorldState& state, const Action& action) const {
    const Action a = action.clamped(cfg_);
    WorldState next = state;

    const Quat old_q = state.ee.orientation;
    const bool rotating = a.delta_orientation.squaredNorm() > 0.0;
    next.ee.position = state.ee.position + a.delta_position;
    if (rotating) next.ee = Pose(next.ee.position, axis_angle(a.delta_orientation) * old_q);

    const double gap = a.gripper_command - state.gripper_aperture;
    next.gripper_aperture =
        std::clamp(state.gripper_aperture + std::clamp(gap, -cfg_.gripper_rate, cfg_.gripper_rate), 0.0, 1.0);

    if (state.attached) {
        if (next.gripper_aperture >= cfg_.grasp_threshold) {
            next.attached = false;
            const double drop = next.cup.position.z() - next.table_z;
            next.cup.position.z() = next.table_z;
            if (drop > cfg_.drop_tip_height)
                next.cup = Pose(next.cup.position,
                                Quat(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitX())) * next.cup.orientation);
        } else {
            // Rigid follow: apply the ee's motion to the cup.
            if (rotating) {
                const Quat delta = next.ee.orientation * old_q.conjugate();
                next.cup = Pose(next.ee.position + delta * (state.cup.position - state.ee.position),
                                delta * state.cup.orientation);
            } else {
                next.cup.position = state.cup.position + a.delta_position;
            }
        }
    } else {
        const bool translating = a.delta_position.squaredNorm() > 0.0;
        const bool open = next.gripper_aperture >= cfg_.grasp_threshold;
        if (translating && open && tilt_angle(state.cup.orientation) <= deg2rad(cfg_.tilt_threshold_deg) &&
            !inside_cup_volume(state, state.ee.position) && inside_cup_volume(state, next.ee.position)) {
            Vec3 axis = Vec3::UnitZ().cross(Vec3(a.delta_position.x(), a.delta_position.y(), 0.0));
            axis = axis.norm() > 1e-12 ? Vec3(axis.normalized()) : Vec3(Vec3::UnitX());
            next.cup = Pose(next.cup.position, Quat(Eigen::AngleAxisd(std::numbers::pi / 2, axis)) * next.cup.orientation);
        }
        const double angle = 2.0 * std::acos(std::min(1.0, std::abs(next.ee.orientation.dot(next.cup.orientation))));
        if (next.gripper_aperture < cfg_.grasp_threshold && state.gripper_aperture >= cfg_.grasp_threshold &&
            (next.ee.position - cup_grasp_point(next)).norm() <= cfg_.grasp_radius &&
            angle <= deg2rad(cfg_.grasp_align_deg) && cup_upright(next)) {
            next.attached = true;
        }
    }

    StepResult r{next, std::nullopt, check_violations(next)};
    if (!r.violations.empty()) r.violation = r.violations.front();
    return r;
}

std::vector<ViolationKind> Environment::check_violations(const WorldState& s) const {
    std::vector<ViolationKind> out;
    const bool ee_hits = !in_workspace(s.ee.position) || s.ee.position.z() < s.table_z;
    const bool cup_in_table = s.attached && s.cup.position.z() < s.table_z;
    if (ee_hits || cup_in_table) out.push_back(ViolationKind::Collision);
    if (tilt_angle(s.cup.orientation) > deg2rad(cfg_.tilt_threshold_deg)) out.push_back(ViolationKind::CupHorizontal);
    if (cup_distance_beyond_table(s) > cfg_.edge_margin) out.push_back(ViolationKind::CupOffTable);
    return out;
}

Observation observe(const WorldState& s) {
    Observation o;
    o << s.ee.position, s.ee.orientation.w(), s.ee.orientation.x(), s.ee.orientation.y(), s.ee.orientation.z(),
        s.gripper_aperture, s.cup.position, s.target_position, s.table_z, static_cast<double>(s.context);
    return o;
}

}  // namespace optseq
