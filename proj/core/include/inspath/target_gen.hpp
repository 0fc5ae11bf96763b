#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "inspath/geom.hpp"
#include "inspath/profile.hpp"

namespace inspath {

/// A camera pose in front of one profile point. Lists of targets keep each
/// row contiguous.
struct TargetPose {
    RigidTransform pose;  // world frame, or robot base frame after finalize_plan
    std::size_t source_index = 0;  // into the profile
    std::size_t row_index = 0;
    std::size_t id = 0;  // generation order across the whole plan
    std::size_t seq = 0;  // position within its row, set by finalize_plan
    Vec3 surface_point = Vec3::Zero();
    Vec3 surface_normal = Vec3::UnitZ();
};

struct PlanParams {
    double standoff = 0.3;
    double voxel = 0.02;
    double min_clearance = 0.05;
    double ground_z = 0.0;
    std::size_t decimation_n = 0;
    bool reverse = true;
    RigidTransform hand_eye;
    RigidTransform base_in_world;
};

/// Target ids removed by each filter.
struct Provenance {
    std::vector<std::size_t> anomaly;
    std::vector<std::size_t> threshold;
    std::vector<std::size_t> proximity;
    std::vector<std::size_t> decimation;
};

struct PathPlan {
    std::vector<TargetPose> targets;  // end-effector poses in the robot base frame
    std::vector<RigidTransform> world_poses;  // camera poses, parallel to targets
    Provenance dropped;
    PlanParams params;
    std::size_t generated = 0;
};

/// position = p + standoff * n, rotation = align_z_to_normal(-n). Ids count up
/// from `first_id`.
std::vector<TargetPose> poses_from_profile(const Profile& profile, double standoff, std::size_t first_id = 0);

/// Reverses every second row (in order of appearance) so rows join end to end.
std::vector<TargetPose> serpentine(std::vector<TargetPose> targets);

/// Per row of at least 3 targets: with m the middle target and s the sign of
/// (last - first) on an axis, a target before m should not exceed m's
/// coordinate in the direction of s and a target after m should not fall
/// short of it. Axes with s = 0 impose nothing. Targets inconsistent on 2 or
/// more axes are dropped.
std::vector<TargetPose> filter_anomalies(const std::vector<TargetPose>& targets,
                                         std::vector<std::size_t>* dropped = nullptr);

/// Drops targets with z < ground_z + min_clearance.
std::vector<TargetPose> filter_threshold(const std::vector<TargetPose>& targets, double min_clearance, double ground_z,
                                         std::vector<std::size_t>* dropped = nullptr);

/// Greedy per-row scan keeping a target only when it is at least 2 * voxel
/// from the last kept one.
std::vector<TargetPose> filter_close(const std::vector<TargetPose>& targets, double voxel,
                                     std::vector<std::size_t>* dropped = nullptr);

/// Per row keeps indices 0, n+1, 2(n+1), ... and the last target.
std::vector<TargetPose> decimate(const std::vector<TargetPose>& targets, std::size_t n,
                                 std::vector<std::size_t>* dropped = nullptr);

/// Optionally reverses each row in place (row order unchanged), numbers seq
/// within rows and maps every pose to base_in_world^-1 * T * hand_eye^-1.
PathPlan finalize_plan(const std::vector<TargetPose>& targets, bool reverse, const RigidTransform& hand_eye,
                       const RigidTransform& base_in_world);

/// The whole chain: poses, serpentine, anomaly, threshold, proximity,
/// decimation, finalize, with provenance.
PathPlan generate_plan(const std::vector<Profile>& profiles, const PlanParams& params);

/// Fixed field order, reals with 9 significant digits.
std::string plan_to_json(const PathPlan& plan);

}  // namespace inspath
