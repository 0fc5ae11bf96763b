#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath {

/// Axis-aligned box, bounds inclusive.
struct CropBox {
    Vec3 min = Vec3::Constant(-1e9);
    Vec3 max = Vec3::Constant(1e9);

    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }
    bool valid() const { return (min.array() <= max.array()).all(); }
};

/// Positions with optional per-point colors (RGB in [0,1]) and unit normals.
/// An optional attribute is absent when its vector is empty.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> colors;
    std::vector<Vec3> normals;
    std::string frame = "world";

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_colors() const { return !colors.empty(); }
    bool has_normals() const { return !normals.empty(); }

    /// Throws invalid-argument when attribute lengths disagree, a coordinate
    /// is not finite, or a normal is not unit within 1e-6.
    void validate() const;

    /// Sub-cloud of the given indices, in the given order.
    PointCloud select(std::span<const std::size_t> indices) const;

    /// Appends `other`; attributes survive only when both sides carry them
    /// (or this cloud is empty).
    void append(const PointCloud& other);

    Vec3 centroid() const;
    CropBox bounds() const;
};

/// Deterministic content hash (FNV-1a over the raw coordinates).
std::uint64_t content_hash(const PointCloud& cloud);

}  // namespace inspath
