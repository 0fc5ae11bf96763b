#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "inspath/point_cloud.hpp"

namespace inspath {

/// Points inside `keep` (inclusive) and strictly above `ground_z`. Colors and
/// normals follow their points.
PointCloud filter_passthrough(const PointCloud& cloud, const CropBox& keep, double ground_z);

/// One centroid per occupied voxel. Voxels are cubes of edge `voxel` anchored
/// at the cloud's minimum corner; output order follows the first member of
/// each voxel in input order. Colors are averaged; normals are averaged and
/// renormalized, falling back to the first member's normal when they cancel.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel);

/// Visibility by spherical flip and convex hull. Points are expressed relative
/// to `camera`, flipped about a sphere of radius radius_scale * max range, and
/// those whose flipped image is a vertex of hull(flipped ∪ {camera}) are
/// visible. Returns the visible indices in ascending order. Exact duplicate
/// points share one visibility verdict.
std::vector<std::size_t> hidden_point_removal(const PointCloud& cloud, const Vec3& camera, double radius_scale);

/// Per-point normal from the covariance of the k nearest neighbours (the point
/// itself included): the eigenvector of the smallest eigenvalue, flipped so
/// that n . (viewpoint - p) >= 0.
PointCloud estimate_normals(const PointCloud& cloud, std::size_t k, const Vec3& viewpoint);

struct SymmetricEigen {
    Vec3 values;   // ascending
    Mat3 vectors;  // column i pairs with values[i]
};

/// Closed-form decomposition of a symmetric 3x3 matrix.
SymmetricEigen eigen_symmetric(const Mat3& m);

/// Sample covariance (divided by n) of the selected points.
Mat3 covariance(std::span<const Vec3> points, std::span<const std::size_t> indices);
Mat3 covariance(std::span<const Vec3> points);

/// Unit eigenvector of the smallest eigenvalue. When several eigenvalues tie
/// for smallest, the candidate with the lexicographically largest absolute
/// components wins, so isotropic neighbourhoods give a reproducible answer.
Vec3 smallest_eigenvector(const Mat3& cov);

}  // namespace inspath
