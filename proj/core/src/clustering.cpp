#include "inspath/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "inspath/error.hpp"
#include "inspath/spatial_grid.hpp"
#include "json_util.hpp"

namespace inspath {

namespace {
constexpr int kUnvisited = -2;
}  // namespace

std::size_t ClusterSet::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

int ClusterSet::largest() const {
    if (summaries.empty()) fail(ErrorCode::kInvalidArgument, "no clusters to choose from");
    int best = 0;
    for (const ClusterSummary& s : summaries) {
        if (s.count > summaries[best].count) best = s.id;
    }
    return best;
}

ClusterSet dbscan(const PointCloud& cloud, double eps, std::size_t min_pts) {
    if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::kInvalidArgument, "dbscan eps must be positive");
    if (min_pts < 1) fail(ErrorCode::kInvalidArgument, "dbscan min_pts must be at least 1");

    ClusterSet set;
    const std::size_t n = cloud.size();
    set.labels.assign(n, kUnvisited);
    if (n == 0) return set;

    const SpatialGrid grid(cloud.points, eps);
    int next_id = 0;
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (set.labels[i] != kUnvisited) continue;
        const std::vector<std::size_t> seeds = grid.radius_search(cloud.points[i], eps);
        if (seeds.size() < min_pts) {
            set.labels[i] = ClusterSet::kNoise;
            continue;
        }
        const int id = next_id++;
        set.labels[i] = id;
        queue.assign(seeds.begin(), seeds.end());
        while (!queue.empty()) {
            const std::size_t j = queue.front();
            queue.pop_front();
            if (set.labels[j] == ClusterSet::kNoise) set.labels[j] = id;
            if (set.labels[j] != kUnvisited) continue;
            set.labels[j] = id;
            const std::vector<std::size_t> nb = grid.radius_search(cloud.points[j], eps);
            if (nb.size() >= min_pts) queue.insert(queue.end(), nb.begin(), nb.end());
        }
    }

    set.summaries.resize(static_cast<std::size_t>(next_id));
    for (int id = 0; id < next_id; ++id) {
        set.summaries[id].id = id;
        set.summaries[id].aabb = CropBox{Vec3::Constant(std::numeric_limits<double>::infinity()),
                                         Vec3::Constant(-std::numeric_limits<double>::infinity())};
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int id = set.labels[i];
        if (id < 0) continue;
        ClusterSummary& s = set.summaries[id];
        ++s.count;
        s.centroid += cloud.points[i];
        s.aabb.min = s.aabb.min.cwiseMin(cloud.points[i]);
        s.aabb.max = s.aabb.max.cwiseMax(cloud.points[i]);
    }
    for (ClusterSummary& s : set.summaries) s.centroid /= static_cast<double>(s.count);
    return set;
}

PointCloud select_clusters(const ClusterSet& set, const PointCloud& cloud, const std::vector<int>& ids) {
    if (set.labels.size() != cloud.size()) fail(ErrorCode::kInvalidArgument, "cluster labels do not match the cloud");
    std::vector<char> wanted(set.cluster_count(), 0);
    for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= set.cluster_count()) {
            fail(ErrorCode::kInvalidArgument, "unknown cluster id " + std::to_string(id));
        }
        wanted[id] = 1;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (set.labels[i] >= 0 && wanted[set.labels[i]]) keep.push_back(i);
    }
    return cloud.select(keep);
}

std::string cluster_summaries_to_json(const ClusterSet& set) {
    detail::ojson j;
    j["clusters"] = detail::ojson::array();
    for (const ClusterSummary& s : set.summaries) {
        detail::ojson c;
        c["id"] = s.id;
        c["count"] = s.count;
        c["centroid"] = detail::vec3_to_json(s.centroid);
        c["aabb"]["min"] = detail::vec3_to_json(s.aabb.min);
        c["aabb"]["max"] = detail::vec3_to_json(s.aabb.max);
        j["clusters"].push_back(c);
    }
    j["noise"] = set.noise_count();
    return j.dump(2) + "\n";
}

}  // namespace inspath
