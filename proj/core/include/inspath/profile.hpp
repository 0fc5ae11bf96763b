#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "inspath/point_cloud.hpp"

namespace inspath {

enum class SliceMode { kAuto, kDirection, kSegment };

std::string to_string(SliceMode mode);

struct SliceSpec {
    SliceMode mode = SliceMode::kAuto;
    std::optional<Vec3> direction;  // mode == kDirection
    std::optional<CropBox> segment;  // mode == kSegment
    double band_width = 0.03;
    std::size_t row_count = 1;

    /// Throws invalid-argument when the optional fields do not match the mode,
    /// the direction is not unit within 1e-6, or band_width/row_count are not
    /// positive.
    void validate() const;
};

/// One ordered row of surface points with their normals.
struct Profile {
    std::size_t row_index = 0;
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
    std::vector<std::size_t> source_indices;  // into the sliced cloud
    Vec3 axis = Vec3::UnitX();

    std::size_t size() const { return points.size(); }
};

/// Unit eigenvector of the largest covariance eigenvalue, signed so the first
/// non-zero of (x, y, z) is positive. Throws invalid-argument below 3 points
/// and degenerate-geometry when all points coincide.
Vec3 auto_direction(const PointCloud& cloud);

/// Transverse axis for slicing along `axis`: world z made orthogonal to the
/// axis, or world x when |axis . z| > 0.99.
Vec3 transverse_axis(const Vec3& axis);

/// Slices the cloud into rows along the slicing axis. With one row the band is
/// centred on the centroid; otherwise the transverse extent is split into
/// row_count equal bands. Each point belongs to its nearest band and is kept
/// when within band_width/2 of that band's centre line. Rows are sorted by the
/// axis coordinate with ties collapsed to the first point. Rows with fewer
/// than 2 points are omitted with a warning; if every row is omitted this
/// throws empty-profile.
std::vector<Profile> extract_profiles(const PointCloud& cloud, const SliceSpec& spec,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace inspath
