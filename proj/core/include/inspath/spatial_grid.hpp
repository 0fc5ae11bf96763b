#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath {

/// Uniform-grid index over a fixed point set. Queries are exact; the cell size
/// only affects speed. The indexed points must outlive the grid.
class SpatialGrid {
public:
    SpatialGrid(std::span<const Vec3> points, double cell);

    /// Indices with |p - query| <= radius, ascending.
    std::vector<std::size_t> radius_search(const Vec3& query, double radius) const;

    /// The k nearest indices ordered by (distance, index). Returns fewer than k
    /// only when the grid holds fewer points.
    std::vector<std::size_t> knn(const Vec3& query, std::size_t k) const;

    double cell() const { return cell_; }
    std::size_t size() const { return points_.size(); }

    /// Cell edge that puts roughly `per_cell` points of a surface-like cloud
    /// in each occupied cell.
    static double suggest_cell(std::span<const Vec3> points, std::size_t per_cell);

private:
    using Key = std::array<std::int64_t, 3>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    struct Range {
        std::uint32_t begin;
        std::uint32_t end;
    };

    Key key_of(const Vec3& p) const;
    template <typename Fn>
    void for_cell(const Key& key, Fn&& fn) const;

    std::span<const Vec3> points_;
    double cell_;
    std::vector<std::uint32_t> order_;
    std::unordered_map<Key, Range, KeyHash> cells_;
    Key lo_{};
    Key hi_{};
};

}  // namespace inspath
