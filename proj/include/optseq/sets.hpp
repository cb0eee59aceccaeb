#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optseq/env.hpp"
#include "optseq/geometry.hpp"

namespace optseq {

struct PoseSample {
    Pose pose;
    double gripper_aperture = 1.0;
    bool attached = false;
    std::int64_t source_episode = 0;

    bool operator==(const PoseSample&) const = default;
};

PoseSample to_sample(const WorldState& s, std::int64_t episode);

enum class SetKind { Origin, Result };

std::string to_string(SetKind k);
SetKind set_kind_from_string(const std::string& s);

struct SampleSet {
    SetKind kind = SetKind::Origin;
    std::string option_name;
    std::vector<PoseSample> samples;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
};

// Defaults for turning containment into a composability verdict.
struct OverlapParams {
    double epsilon = 0.02;
    double voxel = 0.05;
    double omega_r = kDefaultOmegaR;
    double containment_threshold = 0.9;
};

struct OverlapReport {
    double containment_fraction = 0.0;
    double jaccard_distance = 1.0;
    double epsilon = 0.02;
    double voxel_size = 0.05;
    double containment_threshold = 0.9;
    bool verdict_composable = false;
};

Vec3 centroid(const SampleSet& set);

// Nearest sample to the positional centroid; lowest index wins ties.
std::size_t closest_to_centroid_index(const SampleSet& set);
const PoseSample& closest_to_centroid(const SampleSet& set);

// Sample with the most neighbours within `radius` under pose_distance.
std::size_t densest_sample_index(const SampleSet& set, double omega_r = kDefaultOmegaR, double radius = 0.05);
const PoseSample& densest_sample(const SampleSet& set, double omega_r = kDefaultOmegaR, double radius = 0.05);

// Fraction of result samples within epsilon of at least one origin sample.
double containment_fraction(const SampleSet& result, const SampleSet& origin, double epsilon,
                            double omega_r = kDefaultOmegaR);

// 1 - |A ∩ B| / |A ∪ B| over occupied voxels of the sample positions.
double jaccard_distance(const SampleSet& a, const SampleSet& b, double voxel);

OverlapReport overlap(const SampleSet& result, const SampleSet& origin, const OverlapParams& params = {});

}  // namespace optseq
