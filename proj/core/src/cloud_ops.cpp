#include "inspath/cloud_ops.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "inspath/convex_hull.hpp"
#include "inspath/error.hpp"
#include "inspath/spatial_grid.hpp"

namespace inspath {

namespace {

struct VoxelKey {
    std::int64_t x, y, z;
    bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
    std::size_t operator()(const VoxelKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int64_t v : {k.x, k.y, k.z}) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct BitsKey {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const BitsKey&) const = default;
};

struct BitsKeyHash {
    std::size_t operator()(const BitsKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint64_t v : k.bits) {
            h ^= v;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

BitsKey bits_of(const Vec3& p) {
    BitsKey k{};
    for (int d = 0; d < 3; ++d) {
        // +0.0 and -0.0 must land on the same key.
        const double v = p[d] == 0.0 ? 0.0 : p[d];
        std::memcpy(&k.bits[static_cast<std::size_t>(d)], &v, sizeof v);
    }
    return k;
}

}  // namespace

PointCloud filter_passthrough(const PointCloud& cloud, const CropBox& keep, double ground_z) {
    std::vector<std::size_t> kept;
    kept.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.points[i];
        if (keep.contains(p) && p.z() > ground_z) kept.push_back(i);
    }
    return cloud.select(kept);
}

PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
    if (!(voxel > 0.0) || !std::isfinite(voxel)) fail(ErrorCode::kInvalidArgument, "voxel size must be positive");
    PointCloud out;
    out.frame = cloud.frame;
    if (cloud.empty()) return out;

    const Vec3 origin = cloud.bounds().min;
    struct Accum {
        Vec3 point = Vec3::Zero();
        Vec3 color = Vec3::Zero();
        Vec3 normal = Vec3::Zero();
        std::size_t first = 0;
        std::size_t count = 0;
    };
    std::vector<Accum> voxels;
    std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> index;
    index.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 rel = (cloud.points[i] - origin) / voxel;
        const VoxelKey key{static_cast<std::int64_t>(std::floor(rel.x())), static_cast<std::int64_t>(std::floor(rel.y())),
                           static_cast<std::int64_t>(std::floor(rel.z()))};
        auto [it, inserted] = index.try_emplace(key, voxels.size());
        if (inserted) {
            voxels.emplace_back();
            voxels.back().first = i;
        }
        Accum& acc = voxels[it->second];
        acc.point += cloud.points[i];
        if (cloud.has_colors()) acc.color += cloud.colors[i];
        if (cloud.has_normals()) acc.normal += cloud.normals[i];
        ++acc.count;
    }

    out.points.reserve(voxels.size());
    for (const Accum& acc : voxels) {
        const double n = static_cast<double>(acc.count);
        out.points.push_back(acc.point / n);
        if (cloud.has_colors()) out.colors.push_back(acc.color / n);
        if (cloud.has_normals()) {
            const double len = acc.normal.norm();
            out.normals.push_back(len > 1e-12 ? Vec3(acc.normal / len) : cloud.normals[acc.first]);
        }
    }
    return out;
}

std::vector<std::size_t> hidden_point_removal(const PointCloud& cloud, const Vec3& camera, double radius_scale) {
    if (cloud.empty()) fail(ErrorCode::kInvalidArgument, "hidden point removal needs a non-empty cloud");
    if (!(radius_scale > 1.0)) fail(ErrorCode::kInvalidArgument, "hidden point removal radius scale must exceed 1");

    std::vector<std::size_t> representative(cloud.size());
    std::vector<Vec3> unique;
    std::unordered_map<BitsKey, std::size_t, BitsKeyHash> seen;
    seen.reserve(cloud.size());
    double max_range = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 rel = cloud.points[i] - camera;
        const double range = rel.norm();
        if (range < 1e-12) fail(ErrorCode::kInvalidArgument, "camera coincides with point " + std::to_string(i));
        auto [it, inserted] = seen.try_emplace(bits_of(cloud.points[i]), unique.size());
        if (inserted) unique.push_back(rel);
        representative[i] = it->second;
        max_range = std::max(max_range, range);
    }

    const double radius = radius_scale * max_range;
    std::vector<Vec3> flipped;
    flipped.reserve(unique.size() + 1);
    for (const Vec3& p : unique) {
        const double range = p.norm();
        flipped.push_back(p + 2.0 * (radius - range) * (p / range));
    }
    flipped.push_back(Vec3::Zero());

    std::vector<char> visible(unique.size(), 0);
    for (std::size_t v : convex_hull_vertices(flipped)) {
        if (v < unique.size()) visible[v] = 1;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (visible[representative[i]]) out.push_back(i);
    }
    return out;
}

SymmetricEigen eigen_symmetric(const Mat3& m) {
    Eigen::SelfAdjointEigenSolver<Mat3> solver;
    solver.computeDirect(m);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat3 covariance(std::span<const Vec3> points, std::span<const std::size_t> indices) {
    Vec3 mean = Vec3::Zero();
    for (std::size_t i : indices) mean += points[i];
    mean /= static_cast<double>(std::max<std::size_t>(indices.size(), 1));
    Mat3 cov = Mat3::Zero();
    for (std::size_t i : indices) {
        const Vec3 d = points[i] - mean;
        cov.noalias() += d * d.transpose();
    }
    return cov / static_cast<double>(std::max<std::size_t>(indices.size(), 1));
}

Mat3 covariance(std::span<const Vec3> points) {
    std::vector<std::size_t> all(points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return covariance(points, all);
}

Vec3 smallest_eigenvector(const Mat3& cov) {
    const SymmetricEigen eig = eigen_symmetric(cov);
    const double scale = std::max(std::abs(eig.values[2]), 1e-300);
    const double tie = 1e-12 * scale;
    Vec3 best = eig.vectors.col(0).normalized();
    auto abs_key = [](const Vec3& v) { return std::array<double, 3>{std::abs(v.x()), std::abs(v.y()), std::abs(v.z())}; };
    for (int i = 1; i < 3; ++i) {
        if (eig.values[i] - eig.values[0] > tie) break;
        const Vec3 cand = eig.vectors.col(i).normalized();
        if (abs_key(cand) > abs_key(best)) best = cand;
    }
    return best;
}

PointCloud estimate_normals(const PointCloud& cloud, std::size_t k, const Vec3& viewpoint) {
    if (k < 3) fail(ErrorCode::kInvalidArgument, "normal estimation needs k >= 3");
    if (k > cloud.size()) {
        fail(ErrorCode::kInvalidArgument,
             "normal estimation k=" + std::to_string(k) + " exceeds point count " + std::to_string(cloud.size()));
    }
    const SpatialGrid grid(cloud.points, SpatialGrid::suggest_cell(cloud.points, k));
    PointCloud out = cloud;
    out.normals.assign(cloud.size(), kUnitZ);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::vector<std::size_t> nbrs = grid.knn(cloud.points[i], k);
        Vec3 n = smallest_eigenvector(covariance(cloud.points, nbrs));
        if (n.dot(viewpoint - cloud.points[i]) < 0.0) n = -n;
        out.normals[i] = n;
    }
    return out;
}

}  // namespace inspath
