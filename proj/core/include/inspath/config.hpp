#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inspath/geom.hpp"
#include "inspath/point_cloud.hpp"
#include "inspath/profile.hpp"
#include "inspath/target_gen.hpp"

namespace inspath {

struct HprConfig {
    bool enabled = true;
    std::optional<Vec3> camera;  // defaults to the first frame's camera position
    double radius_scale = 100.0;
};

struct NormalsConfig {
    std::size_t k = 10;
    std::optional<Vec3> viewpoint;  // defaults to the first frame's camera position
};

struct DbscanConfig {
    double eps = 0.04;
    std::size_t min_pts = 10;
};

enum class SelectionPolicy { kIds, kLargest, kInteractive };

struct ClusterSelection {
    SelectionPolicy policy = SelectionPolicy::kLargest;
    std::vector<int> ids;  // policy == kIds
};

struct PipelineConfig {
    std::size_t s = 5;
    CropBox crop;
    double ground_z = 0.0;
    double vote_tolerance = 0.05;
    HprConfig hpr;
    double voxel = 0.02;
    NormalsConfig normals;
    DbscanConfig dbscan;
    ClusterSelection cluster_selection;
    std::vector<SliceSpec> slices{SliceSpec{}};
    double standoff = 0.3;
    double min_clearance = 0.05;
    std::size_t decimation_n = 0;
    bool reverse = true;
    RigidTransform hand_eye;
    RigidTransform base_in_world;

    /// Throws config-error naming the offending field.
    void validate() const;
    PlanParams plan_params() const;
};

/// Parses and validates a config document. Missing fields take defaults;
/// dbscan.eps defaults to 2 * voxel and slice band_width to 1.5 * voxel.
/// `slice` may be one slice object or an array of them. Unknown keys, type
/// mismatches and constraint violations raise config-error naming the JSON
/// path.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Every field written explicitly, so parse_config(config_to_json(c)) == c.
std::string config_to_json(const PipelineConfig& config);

}  // namespace inspath
