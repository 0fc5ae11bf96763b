#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "inspath/point_cloud.hpp"

namespace inspath {

struct ClusterSummary {
    int id = 0;
    std::size_t count = 0;
    Vec3 centroid = Vec3::Zero();
    CropBox aabb;
};

struct ClusterSet {
    static constexpr int kNoise = -1;

    std::vector<int> labels;  // per point: kNoise or 0..C-1
    std::vector<ClusterSummary> summaries;  // indexed by id

    std::size_t cluster_count() const { return summaries.size(); }
    std::size_t noise_count() const;
    /// Id with the most points; ties go to the lower id. Throws
    /// invalid-argument when there are no clusters.
    int largest() const;
};

/// Density-based clustering. A point is core when at least `min_pts` points
/// (itself included) lie within `eps`. Clusters are seeded in index order and
/// expanded breadth-first, so ids follow each cluster's lowest core index and a
/// border point joins the first cluster that reaches it.
ClusterSet dbscan(const PointCloud& cloud, double eps, std::size_t min_pts);

/// Points whose label is in `ids`, in cloud order with their attributes.
/// Throws invalid-argument on an id outside the set.
PointCloud select_clusters(const ClusterSet& set, const PointCloud& cloud, const std::vector<int>& ids);

/// `{"clusters":[{"id","count","centroid","aabb":{"min","max"}}],"noise":n}`
std::string cluster_summaries_to_json(const ClusterSet& set);

}  // namespace inspath
