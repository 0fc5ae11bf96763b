#pragma once

// Reference DBSCAN without spatial indexing: cores by exhaustive counting,
// components by union-find over core pairs, borders to the component with the
// lowest core index among their core neighbours.

#include <algorithm>
#include <numeric>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath::testing {

inline std::vector<int> brute_force_dbscan(const std::vector<Vec3>& pts, double eps, std::size_t min_pts) {
    const std::size_t n = pts.size();
    auto near = [&](std::size_t a, std::size_t b) { return (pts[a] - pts[b]).norm() <= eps; };
    std::vector<char> core(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j) c += near(i, j);
        core[i] = c >= min_pts;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (core[i] && core[j] && near(i, j)) {
                const std::size_t a = find(i), b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }
    // Roots are the lowest index of each component; number them in order.
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (core[i] && root_label[find(i)] < 0) root_label[find(i)] = next++;
    std::vector<int> labels(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            labels[i] = root_label[find(i)];
            continue;
        }
        int best = -1;
        for (std::size_t j = 0; j < n; ++j)
            if (core[j] && near(i, j)) {
                const int l = root_label[find(j)];
                if (best < 0 || l < best) best = l;
            }
        labels[i] = best;
    }
    return labels;
}

/// True when the partitions agree up to a relabelling of cluster ids.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::pair<int, int>> map;
    std::vector<int> fwd, back;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] < 0) != (b[i] < 0)) return false;
        if (a[i] < 0) continue;
        const auto ai = static_cast<std::size_t>(a[i]), bi = static_cast<std::size_t>(b[i]);
        if (fwd.size() <= ai) fwd.resize(ai + 1, -1);
        if (back.size() <= bi) back.resize(bi + 1, -1);
        if (fwd[ai] < 0 && back[bi] < 0) {
            fwd[ai] = b[i];
            back[bi] = a[i];
        } else if (fwd[ai] != b[i] || back[bi] != a[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace inspath::testing
