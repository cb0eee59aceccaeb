#include "optseq/sets.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "optseq/errors.hpp"
#include "optseq/parallel.hpp"

namespace optseq {

namespace {

void require_non_empty(const SampleSet& s, const char* op) {
    if (s.empty()) throw ContractError(std::string(op) + " needs a non-empty sample set");
}

using VoxelKey = std::array<std::int64_t, 3>;

struct VoxelHash {
    std::size_t operator()(const VoxelKey& k) const noexcept {
        return static_cast<std::size_t>(k[0] * 73856093LL ^ k[1] * 19349663LL ^ k[2] * 83492791LL);
    }
};

std::unordered_set<VoxelKey, VoxelHash> occupied(const SampleSet& s, double voxel) {
    std::unordered_set<VoxelKey, VoxelHash> out;
    for (const auto& p : s.samples) {
        const Vec3& x = p.pose.position;
        out.insert({static_cast<std::int64_t>(std::floor(x.x() / voxel)),
                    static_cast<std::int64_t>(std::floor(x.y() / voxel)),
                    static_cast<std::int64_t>(std::floor(x.z() / voxel))});
    }
    return out;
}

}  // namespace

PoseSample to_sample(const WorldState& s, std::int64_t episode) {
    return PoseSample{s.ee, s.gripper_aperture, s.attached, episode};
}

std::string to_string(SetKind k) { return k == SetKind::Origin ? "origin" : "result"; }

SetKind set_kind_from_string(const std::string& s) {
    if (s == "origin") return SetKind::Origin;
    if (s == "result") return SetKind::Result;
    throw ConfigError("unknown set kind '" + s + "'");
}

Vec3 centroid(const SampleSet& set) {
    require_non_empty(set, "centroid");
    Vec3 sum = Vec3::Zero();
    for (const auto& s : set.samples) sum += s.pose.position;
    return sum / static_cast<double>(set.size());
}

std::size_t closest_to_centroid_index(const SampleSet& set) {
    const Vec3 c = centroid(set);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double d = (set.samples[i].pose.position - c).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

const PoseSample& closest_to_centroid(const SampleSet& set) { return set.samples[closest_to_centroid_index(set)]; }

std::size_t densest_sample_index(const SampleSet& set, double omega_r, double radius) {
    require_non_empty(set, "densest_sample");
    if (!(radius > 0.0)) throw ContractError("density radius must be positive");
    const std::size_t n = set.size();
    std::vector<std::size_t> counts(n, 0);
    parallel_for(n, [&](std::size_t i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && pose_distance(set.samples[i].pose, set.samples[j].pose, omega_r) <= radius) ++c;
        counts[i] = c;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (counts[i] > counts[best]) best = i;
    return best;
}

const PoseSample& densest_sample(const SampleSet& set, double omega_r, double radius) {
    return set.samples[densest_sample_index(set, omega_r, radius)];
}

double containment_fraction(const SampleSet& result, const SampleSet& origin, double epsilon, double omega_r) {
    require_non_empty(result, "containment_fraction");
    require_non_empty(origin, "containment_fraction");
    if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");
    std::vector<char> hit(result.size(), 0);
    parallel_for(result.size(), [&](std::size_t i) {
        const Pose& r = result.samples[i].pose;
        for (const auto& o : origin.samples) {
            // Position distance alone already exceeds epsilon: skip the quaternion work.
            if ((o.pose.position - r.position).norm() > epsilon) continue;
            if (pose_distance(r, o.pose, omega_r) <= epsilon) {
                hit[i] = 1;
                break;
            }
        }
    });
    std::size_t count = 0;
    for (char h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(result.size());
}

double jaccard_distance(const SampleSet& a, const SampleSet& b, double voxel) {
    require_non_empty(a, "jaccard_distance");
    require_non_empty(b, "jaccard_distance");
    if (!(voxel > 0.0)) throw ContractError("voxel size must be positive");
    const auto va = occupied(a, voxel);
    const auto vb = occupied(b, voxel);
    std::size_t shared = 0;
    for (const auto& k : va) shared += vb.count(k);
    const std::size_t uni = va.size() + vb.size() - shared;
    return 1.0 - static_cast<double>(shared) / static_cast<double>(uni);
}

OverlapReport overlap(const SampleSet& result, const SampleSet& origin, const OverlapParams& params) {
    OverlapReport r;
    r.epsilon = params.epsilon;
    r.voxel_size = params.voxel;
    r.containment_threshold = params.containment_threshold;
    r.containment_fraction = containment_fraction(result, origin, params.epsilon, params.omega_r);
    r.jaccard_distance = jaccard_distance(result, origin, params.voxel);
    r.verdict_composable = r.containment_fraction >= params.containment_threshold;
    return r;
}

}  // namespace optseq
