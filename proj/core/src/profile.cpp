#include "inspath/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "inspath/cloud_ops.hpp"
#include "inspath/error.hpp"

namespace inspath {

std::string to_string(SliceMode mode) {
    switch (mode) {
        case SliceMode::kAuto: return "auto";
        case SliceMode::kDirection: return "direction";
        case SliceMode::kSegment: return "segment";
    }
    return "unknown";
}

void SliceSpec::validate() const {
    if (direction.has_value() != (mode == SliceMode::kDirection)) {
        fail(ErrorCode::kInvalidArgument, "slice direction must be given exactly when mode is direction");
    }
    if (segment.has_value() != (mode == SliceMode::kSegment)) {
        fail(ErrorCode::kInvalidArgument, "slice segment must be given exactly when mode is segment");
    }
    if (direction && (!is_finite(*direction) || std::abs(direction->norm() - 1.0) > 1e-6)) {
        fail(ErrorCode::kInvalidArgument, "slice direction must be a unit vector");
    }
    if (segment && !segment->valid()) fail(ErrorCode::kInvalidArgument, "slice segment has min > max");
    if (!(band_width > 0.0) || !std::isfinite(band_width)) fail(ErrorCode::kInvalidArgument, "band_width must be positive");
    if (row_count < 1) fail(ErrorCode::kInvalidArgument, "row_count must be at least 1");
}

Vec3 auto_direction(const PointCloud& cloud) {
    if (cloud.size() < 3) fail(ErrorCode::kInvalidArgument, "auto direction needs at least 3 points");
    const Mat3 cov = covariance(cloud.points);
    const SymmetricEigen eig = eigen_symmetric(cov);
    const double scale = cloud.bounds().max.cwiseAbs().maxCoeff() + cloud.bounds().min.cwiseAbs().maxCoeff() + 1.0;
    if (!(eig.values[2] > 1e-24 * scale * scale)) {
        fail(ErrorCode::kDegenerateGeometry, "points coincide; no principal direction");
    }
    Vec3 a = eig.vectors.col(2).normalized();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(a[i]) > 1e-12) {
            if (a[i] < 0) a = -a;
            break;
        }
    }
    return a;
}

Vec3 transverse_axis(const Vec3& axis) {
    const Vec3 ref = std::abs(axis.dot(kUnitZ)) > 0.99 ? Vec3::UnitX() : kUnitZ;
    return (ref - ref.dot(axis) * axis).normalized();
}

namespace {

/// Keeps one surface line out of a band sorted along the axis. On sloped
/// surfaces a band spans several voxel layers. Members are visited nearest the
/// centre line first (ties by index) and kept unless a kept member lies within
/// `window` along the axis. Survivors stay sorted, at least `window` apart, and
/// every dropped member has a survivor within `window`.
std::vector<std::size_t> thin_band(const PointCloud& cloud, const std::vector<std::size_t>& sorted, const Vec3& axis,
                                   const Vec3& t_axis, double center, double window) {
    const std::size_t n = sorted.size();
    std::vector<double> a(n), off(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = cloud.points[sorted[i]].dot(axis);
        off[i] = std::abs(cloud.points[sorted[i]].dot(t_axis) - center);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return off[i] != off[j] ? off[i] < off[j] : sorted[i] < sorted[j];
    });
    std::set<double> kept_a;
    std::vector<char> keep(n, 0);
    for (std::size_t i : order) {
        auto it = kept_a.lower_bound(a[i]);
        if (it != kept_a.end() && *it - a[i] < window) continue;
        if (it != kept_a.begin() && a[i] - *std::prev(it) < window) continue;
        kept_a.insert(a[i]);
        keep[i] = 1;
    }
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) kept.push_back(sorted[i]);
    }
    return kept;
}

}  // namespace

std::vector<Profile> extract_profiles(const PointCloud& cloud, const SliceSpec& spec, std::vector<std::string>* warnings) {
    spec.validate();
    if (cloud.empty()) fail(ErrorCode::kEmptyProfile, "nothing to slice: the object cloud is empty");
    if (!cloud.has_normals()) fail(ErrorCode::kInvalidArgument, "profile extraction needs normals");

    std::vector<std::size_t> candidates(cloud.size());
    std::iota(candidates.begin(), candidates.end(), 0);
    if (spec.mode == SliceMode::kSegment) {
        std::erase_if(candidates, [&](std::size_t i) { return !spec.segment->contains(cloud.points[i]); });
        if (candidates.empty()) fail(ErrorCode::kEmptyProfile, "segment contains no points");
    }

    Vec3 axis;
    if (spec.mode == SliceMode::kDirection) {
        axis = *spec.direction;
    } else {
        axis = auto_direction(cloud.select(candidates));
    }
    const Vec3 t_axis = transverse_axis(axis);

    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = -t_lo;
    Vec3 centroid = Vec3::Zero();
    for (std::size_t i : candidates) {
        const double t = cloud.points[i].dot(t_axis);
        t_lo = std::min(t_lo, t);
        t_hi = std::max(t_hi, t);
        centroid += cloud.points[i];
    }
    centroid /= static_cast<double>(candidates.size());

    const std::size_t rows = spec.row_count;
    const double width = (t_hi - t_lo) / static_cast<double>(rows);
    std::vector<double> centers(rows);
    if (rows == 1) {
        centers[0] = centroid.dot(t_axis);
    } else {
        for (std::size_t k = 0; k < rows; ++k) centers[k] = t_lo + (static_cast<double>(k) + 0.5) * width;
    }

    std::vector<std::vector<std::size_t>> members(rows);
    for (std::size_t i : candidates) {
        const double t = cloud.points[i].dot(t_axis);
        std::size_t k = 0;
        if (rows > 1 && width > 0) {
            const double f = std::floor((t - t_lo) / width);
            k = static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(rows - 1)));
        }
        if (std::abs(t - centers[k]) <= spec.band_width / 2) members[k].push_back(i);
    }

    std::vector<Profile> profiles;
    for (std::size_t k = 0; k < rows; ++k) {
        std::vector<std::size_t>& m = members[k];
        std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
            return cloud.points[a].dot(axis) < cloud.points[b].dot(axis);
        });
        m = thin_band(cloud, m, axis, t_axis, centers[k], spec.band_width / 2);
        if (m.size() < 2) {
            if (warnings) {
                warnings->push_back("row " + std::to_string(k) + " has " + std::to_string(m.size()) +
                                    " point(s); omitted");
            }
            continue;
        }
        Profile p;
        p.row_index = k;
        p.axis = axis;
        p.source_indices = m;
        for (std::size_t i : m) {
            p.points.push_back(cloud.points[i]);
            p.normals.push_back(cloud.normals[i]);
        }
        profiles.push_back(std::move(p));
    }
    if (profiles.empty()) {
        fail(ErrorCode::kEmptyProfile, "every row has fewer than 2 points (band_width " + std::to_string(spec.band_width) +
                                           ", " + std::to_string(candidates.size()) + " candidate points)");
    }
    return profiles;
}

}  // namespace inspath
