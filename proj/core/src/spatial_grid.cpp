#include "inspath/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "inspath/error.hpp"

namespace inspath {

std::size_t SpatialGrid::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k[0]) * 73856093ULL;
    h ^= static_cast<std::uint64_t>(k[1]) * 19349663ULL;
    h ^= static_cast<std::uint64_t>(k[2]) * 83492791ULL;
    return static_cast<std::size_t>(h);
}

SpatialGrid::SpatialGrid(std::span<const Vec3> points, double cell) : points_(points), cell_(cell) {
    if (!(cell > 0.0) || !std::isfinite(cell)) fail(ErrorCode::kInvalidArgument, "grid cell must be positive");
    std::vector<Key> keys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) keys[i] = key_of(points[i]);
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), 0U);
    std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
    if (!points.empty()) {
        lo_ = hi_ = keys[order_.front()];
    }
    std::size_t i = 0;
    while (i < order_.size()) {
        const Key& k = keys[order_[i]];
        std::size_t j = i + 1;
        while (j < order_.size() && keys[order_[j]] == k) ++j;
        cells_.emplace(k, Range{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        for (int d = 0; d < 3; ++d) {
            lo_[d] = std::min(lo_[d], k[d]);
            hi_[d] = std::max(hi_[d], k[d]);
        }
        i = j;
    }
}

SpatialGrid::Key SpatialGrid::key_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / cell_)), static_cast<std::int64_t>(std::floor(p.y() / cell_)),
            static_cast<std::int64_t>(std::floor(p.z() / cell_))};
}

template <typename Fn>
void SpatialGrid::for_cell(const Key& key, Fn&& fn) const {
    auto it = cells_.find(key);
    if (it == cells_.end()) return;
    for (std::uint32_t i = it->second.begin; i < it->second.end; ++i) fn(static_cast<std::size_t>(order_[i]));
}

std::vector<std::size_t> SpatialGrid::radius_search(const Vec3& query, double radius) const {
    std::vector<std::size_t> out;
    if (points_.empty() || radius < 0.0) return out;
    const double r2 = radius * radius;
    const Key a = key_of(query - Vec3::Constant(radius));
    const Key b = key_of(query + Vec3::Constant(radius));
    auto visit = [&](std::size_t idx) {
        if ((points_[idx] - query).squaredNorm() <= r2) out.push_back(idx);
    };
    const double span = static_cast<double>(b[0] - a[0] + 1) * static_cast<double>(b[1] - a[1] + 1) *
                        static_cast<double>(b[2] - a[2] + 1);
    if (span > static_cast<double>(cells_.size())) {
        for (const auto& [key, range] : cells_) {
            for (std::uint32_t i = range.begin; i < range.end; ++i) visit(order_[i]);
        }
    } else {
        for (std::int64_t x = a[0]; x <= b[0]; ++x)
            for (std::int64_t y = a[1]; y <= b[1]; ++y)
                for (std::int64_t z = a[2]; z <= b[2]; ++z) for_cell({x, y, z}, visit);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> SpatialGrid::knn(const Vec3& query, std::size_t k) const {
    std::vector<std::pair<double, std::size_t>> found;
    if (k == 0 || points_.empty()) return {};
    const Key c = key_of(query);
    // Chebyshev rings of cells around the query cell. A point outside ring R
    // is at least R * cell away.
    std::int64_t max_ring = 0;
    for (int d = 0; d < 3; ++d) {
        max_ring = std::max({max_ring, std::abs(c[d] - lo_[d]), std::abs(hi_[d] - c[d])});
    }
    auto visit = [&](std::size_t idx) { found.emplace_back((points_[idx] - query).squaredNorm(), idx); };
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        const double shell = std::pow(2.0 * static_cast<double>(ring) + 1.0, 3.0);
        if (shell > 4.0 * static_cast<double>(cells_.size()) + 27.0) {
            // Sparse grid: scanning every point is cheaper than walking more shells.
            found.clear();
            for (std::size_t i = 0; i < points_.size(); ++i) visit(i);
            break;
        }
        for (std::int64_t x = c[0] - ring; x <= c[0] + ring; ++x) {
            for (std::int64_t y = c[1] - ring; y <= c[1] + ring; ++y) {
                const bool edge_xy = std::abs(x - c[0]) == ring || std::abs(y - c[1]) == ring;
                if (edge_xy) {
                    for (std::int64_t z = c[2] - ring; z <= c[2] + ring; ++z) for_cell({x, y, z}, visit);
                } else {
                    for_cell({x, y, c[2] - ring}, visit);
                    if (ring > 0) for_cell({x, y, c[2] + ring}, visit);
                }
            }
        }
        if (found.size() >= k) {
            std::nth_element(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(k - 1), found.end());
            const double bound = static_cast<double>(ring) * cell_;
            if (found[k - 1].first < bound * bound) break;
        }
    }
    std::sort(found.begin(), found.end());
    if (found.size() > k) found.resize(k);
    std::vector<std::size_t> out;
    out.reserve(found.size());
    for (const auto& f : found) out.push_back(f.second);
    return out;
}

double SpatialGrid::suggest_cell(std::span<const Vec3> points, std::size_t per_cell) {
    if (points.size() < 2) return 1.0;
    Vec3 lo = points.front();
    Vec3 hi = points.front();
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    std::array<double, 3> ext{hi.x() - lo.x(), hi.y() - lo.y(), hi.z() - lo.z()};
    std::sort(ext.begin(), ext.end(), std::greater<>());
    const double area = std::max(ext[0] * std::max(ext[1], 1e-3 * ext[0]), 1e-12);
    const double spacing = std::sqrt(area / static_cast<double>(points.size()));
    const double cell = spacing * std::sqrt(static_cast<double>(std::max<std::size_t>(per_cell, 1)));
    return cell > 0.0 && std::isfinite(cell) ? cell : 1.0;
}

}  // namespace inspath
