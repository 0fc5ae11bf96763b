#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath {

/// Indices of the points that are vertices of the 3D convex hull, ascending.
/// Points lying on a facet or edge within the numerical tolerance are not
/// reported. Of a set of exact duplicates at most one index is reported.
/// Throws degenerate-hull when fewer than four non-coplanar points exist.
std::vector<std::size_t> convex_hull_vertices(std::span<const Vec3> points);

}  // namespace inspath
