#include "inspath/point_cloud.hpp"

#include <cmath>
#include <cstring>

#include "inspath/error.hpp"

namespace inspath {

void PointCloud::validate() const {
    if (has_colors() && colors.size() != points.size()) {
        fail(ErrorCode::kInvalidArgument, "color count does not match point count");
    }
    if (has_normals() && normals.size() != points.size()) {
        fail(ErrorCode::kInvalidArgument, "normal count does not match point count");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!is_finite(points[i])) fail(ErrorCode::kInvalidArgument, "non-finite coordinate at point " + std::to_string(i));
    }
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-6) {
            fail(ErrorCode::kInvalidArgument, "normal " + std::to_string(i) + " is not unit length");
        }
    }
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
    PointCloud out;
    out.frame = frame;
    out.points.reserve(indices.size());
    if (has_colors()) out.colors.reserve(indices.size());
    if (has_normals()) out.normals.reserve(indices.size());
    for (std::size_t i : indices) {
        out.points.push_back(points.at(i));
        if (has_colors()) out.colors.push_back(colors[i]);
        if (has_normals()) out.normals.push_back(normals[i]);
    }
    return out;
}

void PointCloud::append(const PointCloud& other) {
    if (empty()) {
        const std::string tag = frame;
        *this = other;
        if (other.empty()) frame = tag;
        return;
    }
    if (!(has_colors() && other.has_colors())) colors.clear();
    if (!(has_normals() && other.has_normals())) normals.clear();
    points.insert(points.end(), other.points.begin(), other.points.end());
    if (has_colors()) colors.insert(colors.end(), other.colors.begin(), other.colors.end());
    if (has_normals()) normals.insert(normals.end(), other.normals.begin(), other.normals.end());
}

Vec3 PointCloud::centroid() const {
    Vec3 sum = Vec3::Zero();
    for (const auto& p : points) sum += p;
    return points.empty() ? sum : Vec3(sum / static_cast<double>(points.size()));
}

CropBox PointCloud::bounds() const {
    CropBox box{Vec3::Zero(), Vec3::Zero()};
    if (points.empty()) return box;
    box.min = box.max = points.front();
    for (const auto& p : points) {
        box.min = box.min.cwiseMin(p);
        box.max = box.max.cwiseMax(p);
    }
    return box;
}

namespace {
void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
}
void fnv_vectors(std::uint64_t& h, const std::vector<Vec3>& vs) {
    const std::uint64_t n = vs.size();
    fnv_mix(h, &n, sizeof n);
    for (const auto& v : vs) fnv_mix(h, v.data(), 3 * sizeof(double));
}
}  // namespace

std::uint64_t content_hash(const PointCloud& cloud) {
    std::uint64_t h = 14695981039346656037ULL;
    fnv_vectors(h, cloud.points);
    fnv_vectors(h, cloud.colors);
    fnv_vectors(h, cloud.normals);
    return h;
}

}  // namespace inspath
