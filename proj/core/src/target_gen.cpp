#include "inspath/target_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "inspath/error.hpp"

namespace inspath {

namespace {

/// [begin, end) ranges of contiguous equal row_index.
std::vector<std::pair<std::size_t, std::size_t>> row_ranges(const std::vector<TargetPose>& targets) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= targets.size(); ++i) {
        if (i == targets.size() || targets[i].row_index != targets[begin].row_index) {
            if (i > begin) ranges.emplace_back(begin, i);
            begin = i;
        }
    }
    return ranges;
}

std::vector<TargetPose> apply_mask(const std::vector<TargetPose>& targets, const std::vector<char>& keep,
                                   std::vector<std::size_t>* dropped) {
    std::vector<TargetPose> out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (keep[i]) {
            out.push_back(targets[i]);
        } else if (dropped) {
            dropped->push_back(targets[i].id);
        }
    }
    return out;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

std::vector<TargetPose> poses_from_profile(const Profile& profile, double standoff, std::size_t first_id) {
    if (!(standoff >= 0.0) || !std::isfinite(standoff)) fail(ErrorCode::kInvalidArgument, "standoff must be non-negative");
    if (profile.normals.size() != profile.points.size()) {
        fail(ErrorCode::kInvalidArgument, "every profile point needs a normal");
    }
    std::vector<TargetPose> out;
    out.reserve(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const Vec3 n = profile.normals[i].normalized();
        TargetPose t;
        t.pose = RigidTransform(align_z_to_normal(-n), profile.points[i] + standoff * n);
        t.source_index = i;
        t.row_index = profile.row_index;
        t.id = first_id + i;
        t.surface_point = profile.points[i];
        t.surface_normal = n;
        out.push_back(t);
    }
    return out;
}

std::vector<TargetPose> serpentine(std::vector<TargetPose> targets) {
    const auto ranges = row_ranges(targets);
    for (std::size_t r = 1; r < ranges.size(); r += 2) {
        std::reverse(targets.begin() + static_cast<std::ptrdiff_t>(ranges[r].first),
                     targets.begin() + static_cast<std::ptrdiff_t>(ranges[r].second));
    }
    return targets;
}

std::vector<TargetPose> filter_anomalies(const std::vector<TargetPose>& targets, std::vector<std::size_t>* dropped) {
    std::vector<char> keep(targets.size(), 1);
    for (const auto& [begin, end] : row_ranges(targets)) {
        const std::size_t len = end - begin;
        if (len < 3) continue;
        const std::size_t m = begin + len / 2;
        const Vec3& first = targets[begin].pose.translation();
        const Vec3& last = targets[end - 1].pose.translation();
        const Vec3& mid = targets[m].pose.translation();
        for (std::size_t i = begin; i < end; ++i) {
            if (i == m) continue;
            const Vec3& p = targets[i].pose.translation();
            int inconsistent = 0;
            for (int k = 0; k < 3; ++k) {
                const int s = sign_of(last[k] - first[k]);
                if (s == 0) continue;
                const double delta = s * (p[k] - mid[k]);
                if ((i < m && delta > 0) || (i > m && delta < 0)) ++inconsistent;
            }
            if (inconsistent >= 2) keep[i] = 0;
        }
    }
    return apply_mask(targets, keep, dropped);
}

std::vector<TargetPose> filter_threshold(const std::vector<TargetPose>& targets, double min_clearance, double ground_z,
                                         std::vector<std::size_t>* dropped) {
    if (!(min_clearance >= 0.0)) fail(ErrorCode::kInvalidArgument, "min_clearance must be non-negative");
    std::vector<char> keep(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        keep[i] = !(targets[i].pose.translation().z() < ground_z + min_clearance);
    }
    return apply_mask(targets, keep, dropped);
}

std::vector<TargetPose> filter_close(const std::vector<TargetPose>& targets, double voxel,
                                     std::vector<std::size_t>* dropped) {
    if (!(voxel > 0.0)) fail(ErrorCode::kInvalidArgument, "voxel must be positive");
    std::vector<char> keep(targets.size(), 0);
    for (const auto& [begin, end] : row_ranges(targets)) {
        std::size_t last = begin;
        keep[begin] = 1;
        for (std::size_t i = begin + 1; i < end; ++i) {
            if ((targets[i].pose.translation() - targets[last].pose.translation()).norm() >= 2.0 * voxel) {
                keep[i] = 1;
                last = i;
            }
        }
    }
    return apply_mask(targets, keep, dropped);
}

std::vector<TargetPose> decimate(const std::vector<TargetPose>& targets, std::size_t n, std::vector<std::size_t>* dropped) {
    std::vector<char> keep(targets.size(), 0);
    for (const auto& [begin, end] : row_ranges(targets)) {
        for (std::size_t i = begin; i < end; ++i) keep[i] = (i - begin) % (n + 1) == 0;
        keep[end - 1] = 1;
    }
    return apply_mask(targets, keep, dropped);
}

PathPlan finalize_plan(const std::vector<TargetPose>& targets, bool reverse, const RigidTransform& hand_eye,
                       const RigidTransform& base_in_world) {
    PathPlan plan;
    plan.targets = targets;
    const auto ranges = row_ranges(plan.targets);
    const RigidTransform base_inv = base_in_world.inverse();
    const RigidTransform eye_inv = hand_eye.inverse();
    for (const auto& [begin, end] : ranges) {
        if (reverse) {
            std::reverse(plan.targets.begin() + static_cast<std::ptrdiff_t>(begin),
                         plan.targets.begin() + static_cast<std::ptrdiff_t>(end));
        }
        for (std::size_t i = begin; i < end; ++i) plan.targets[i].seq = i - begin;
    }
    for (TargetPose& t : plan.targets) {
        plan.world_poses.push_back(t.pose);
        t.pose = base_inv * t.pose * eye_inv;
    }
    plan.params.reverse = reverse;
    plan.params.hand_eye = hand_eye;
    plan.params.base_in_world = base_in_world;
    return plan;
}

PathPlan generate_plan(const std::vector<Profile>& profiles, const PlanParams& params) {
    std::vector<TargetPose> targets;
    for (const Profile& p : profiles) {
        const auto row = poses_from_profile(p, params.standoff, targets.size());
        targets.insert(targets.end(), row.begin(), row.end());
    }
    const std::size_t generated = targets.size();
    targets = serpentine(std::move(targets));
    Provenance dropped;
    targets = filter_anomalies(targets, &dropped.anomaly);
    targets = filter_threshold(targets, params.min_clearance, params.ground_z, &dropped.threshold);
    targets = filter_close(targets, params.voxel, &dropped.proximity);
    targets = decimate(targets, params.decimation_n, &dropped.decimation);
    PathPlan plan = finalize_plan(targets, params.reverse, params.hand_eye, params.base_in_world);
    plan.params = params;
    plan.dropped = std::move(dropped);
    plan.generated = generated;
    return plan;
}

namespace {

std::string real(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string vec(std::initializer_list<double> vals) {
    std::string s = "[";
    bool first = true;
    for (double v : vals) {
        if (!first) s += ",";
        s += real(v);
        first = false;
    }
    return s + "]";
}

std::string ids(const std::vector<std::size_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::string transform(const RigidTransform& t) {
    const Rotation& r = t.rotation();
    const Vec3& p = t.translation();
    return "{\"quaternion\":" + vec({r.w(), r.x(), r.y(), r.z()}) + ",\"translation\":" + vec({p.x(), p.y(), p.z()}) + "}";
}

}  // namespace

std::string plan_to_json(const PathPlan& plan) {
    std::string s = "{\n  \"targets\": [";
    for (std::size_t i = 0; i < plan.targets.size(); ++i) {
        const TargetPose& t = plan.targets[i];
        const Vec3& p = t.pose.translation();
        const Rotation& r = t.pose.rotation();
        s += i ? ",\n    " : "\n    ";
        s += "{\"row\":" + std::to_string(t.row_index) + ",\"seq\":" + std::to_string(t.seq) +
             ",\"position\":" + vec({p.x(), p.y(), p.z()}) + ",\"quaternion\":" + vec({r.w(), r.x(), r.y(), r.z()}) +
             ",\"id\":" + std::to_string(t.id) + "}";
    }
    s += plan.targets.empty() ? "],\n" : "\n  ],\n";
    s += "  \"dropped\": {\"anomaly\":" + ids(plan.dropped.anomaly) + ",\"threshold\":" + ids(plan.dropped.threshold) +
         ",\"proximity\":" + ids(plan.dropped.proximity) + ",\"decimation\":" + ids(plan.dropped.decimation) + "},\n";
    const PlanParams& q = plan.params;
    s += "  \"params\": {\"standoff\":" + real(q.standoff) + ",\"voxel\":" + real(q.voxel) +
         ",\"min_clearance\":" + real(q.min_clearance) + ",\"ground_z\":" + real(q.ground_z) +
         ",\"decimation_n\":" + std::to_string(q.decimation_n) + ",\"reverse\":" + (q.reverse ? "true" : "false") +
         ",\"generated\":" + std::to_string(plan.generated) + ",\"hand_eye\":" + transform(q.hand_eye) +
         ",\"base_in_world\":" + transform(q.base_in_world) + "}\n}\n";
    return s;
}

}  // namespace inspath
