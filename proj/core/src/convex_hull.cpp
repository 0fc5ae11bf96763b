#include "inspath/convex_hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "inspath/error.hpp"

namespace inspath {

namespace {

// Quickhull with per-face outside sets.
class Quickhull {
public:
    explicit Quickhull(std::span<const Vec3> points) : pts_(points) {
        double scale = 0.0;
        for (const auto& p : pts_) scale = std::max(scale, p.cwiseAbs().maxCoeff());
        eps_ = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300) * 3.0;
    }

    std::vector<std::size_t> run() {
        build_simplex();
        std::vector<int> stack;
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f) stack.push_back(f);
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            if (!faces_[f].alive || faces_[f].outside.empty()) continue;
            const int apex = furthest_of(f);
            const std::vector<int> created = add_point(f, apex);
            for (int nf : created) {
                if (!faces_[nf].outside.empty()) stack.push_back(nf);
            }
        }
        std::vector<char> on_hull(pts_.size(), 0);
        for (const auto& face : faces_) {
            if (!face.alive) continue;
            for (int v : face.v) on_hull[v] = 1;
        }
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (on_hull[i]) out.push_back(i);
        }
        return out;
    }

private:
    struct Face {
        std::array<int, 3> v{};
        std::array<int, 3> adj{-1, -1, -1};
        Vec3 normal = Vec3::Zero();
        double offset = 0.0;
        std::vector<int> outside;
        bool alive = true;
        int mark = 0;
    };

    double distance(const Face& f, int p) const { return f.normal.dot(pts_[p]) - f.offset; }

    int make_face(int a, int b, int c) {
        Face f;
        f.v = {a, b, c};
        const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
        const double len = n.norm();
        if (len > 0.0) {
            f.normal = n / len;
            f.offset = f.normal.dot(pts_[a]);
        }
        faces_.push_back(std::move(f));
        return static_cast<int>(faces_.size()) - 1;
    }

    int furthest_of(int f) const {
        const Face& face = faces_[f];
        int best = face.outside.front();
        double best_d = distance(face, best);
        for (int p : face.outside) {
            const double d = distance(face, p);
            if (d > best_d) {
                best_d = d;
                best = p;
            }
        }
        return best;
    }

    void build_simplex() {
        const int n = static_cast<int>(pts_.size());
        if (n < 4) fail(ErrorCode::kDegenerateHull, "convex hull needs at least 4 points");
        // Most distant pair among the axis extremes.
        std::array<int, 6> ext{0, 0, 0, 0, 0, 0};
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < 3; ++d) {
                if (pts_[i][d] < pts_[ext[2 * d]][d]) ext[2 * d] = i;
                if (pts_[i][d] > pts_[ext[2 * d + 1]][d]) ext[2 * d + 1] = i;
            }
        }
        int a = ext[0], b = ext[1];
        double best = -1.0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                const double d = (pts_[ext[i]] - pts_[ext[j]]).squaredNorm();
                if (d > best) {
                    best = d;
                    a = ext[i];
                    b = ext[j];
                }
            }
        if (std::sqrt(best) <= eps_) fail(ErrorCode::kDegenerateHull, "all points coincide");
        const Vec3 ab = (pts_[b] - pts_[a]).normalized();
        int c = -1;
        best = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec3 ap = pts_[i] - pts_[a];
            const double d = (ap - ab * ab.dot(ap)).norm();
            if (d > best) {
                best = d;
                c = i;
            }
        }
        if (c < 0 || best <= eps_) fail(ErrorCode::kDegenerateHull, "all points are collinear");
        const Vec3 plane_n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]).normalized();
        int d = -1;
        best = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dist = std::abs(plane_n.dot(pts_[i] - pts_[a]));
            if (dist > best) {
                best = dist;
                d = i;
            }
        }
        if (d < 0 || best <= eps_) fail(ErrorCode::kDegenerateHull, "all points are coplanar");

        const Vec3 inside = (pts_[a] + pts_[b] + pts_[c] + pts_[d]) / 4.0;
        const std::array<std::array<int, 3>, 4> tris{{{a, b, c}, {a, d, b}, {b, d, c}, {c, d, a}}};
        for (auto t : tris) {
            const Vec3 n = (pts_[t[1]] - pts_[t[0]]).cross(pts_[t[2]] - pts_[t[0]]);
            if (n.dot(inside - pts_[t[0]]) > 0.0) std::swap(t[1], t[2]);
            make_face(t[0], t[1], t[2]);
        }
        link_all();

        for (int i = 0; i < n; ++i) {
            if (i == a || i == b || i == c || i == d) continue;
            assign(i, std::array<int, 4>{0, 1, 2, 3});
        }
    }

    void link_all() {
        std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
        auto key = [](int u, int v) { return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v); };
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
            for (int e = 0; e < 3; ++e) edges[key(faces_[f].v[e], faces_[f].v[(e + 1) % 3])] = {f, e};
        }
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
            for (int e = 0; e < 3; ++e) {
                auto it = edges.find(key(faces_[f].v[(e + 1) % 3], faces_[f].v[e]));
                if (it == edges.end()) fail(ErrorCode::kInternal, "convex hull simplex is not closed");
                faces_[f].adj[e] = it->second.first;
            }
        }
    }

    template <typename Range>
    void assign(int p, const Range& candidates) {
        int best_face = -1;
        double best_d = eps_;
        for (int f : candidates) {
            const double d = distance(faces_[f], p);
            if (d > best_d) {
                best_d = d;
                best_face = f;
            }
        }
        if (best_face >= 0) faces_[best_face].outside.push_back(p);
    }

    std::vector<int> add_point(int start, int apex) {
        ++mark_;
        std::vector<int> visible{start};
        faces_[start].mark = mark_;
        for (std::size_t i = 0; i < visible.size(); ++i) {
            for (int nb : faces_[visible[i]].adj) {
                if (faces_[nb].mark == mark_ || !faces_[nb].alive) continue;
                if (distance(faces_[nb], apex) > eps_) {
                    faces_[nb].mark = mark_;
                    visible.push_back(nb);
                }
            }
        }

        struct HorizonEdge {
            int from, to, neighbor;
        };
        std::vector<HorizonEdge> horizon;
        for (int f : visible) {
            for (int e = 0; e < 3; ++e) {
                const int nb = faces_[f].adj[e];
                if (faces_[nb].mark != mark_) horizon.push_back({faces_[f].v[e], faces_[f].v[(e + 1) % 3], nb});
            }
        }

        std::unordered_map<int, int> by_from;
        std::unordered_map<int, int> by_to;
        std::vector<int> created;
        created.reserve(horizon.size());
        for (const auto& h : horizon) {
            const int nf = make_face(h.from, h.to, apex);
            created.push_back(nf);
            faces_[nf].adj[0] = h.neighbor;
            Face& nb = faces_[h.neighbor];
            for (int e = 0; e < 3; ++e) {
                if (nb.v[e] == h.to && nb.v[(e + 1) % 3] == h.from) nb.adj[e] = nf;
            }
            if (!by_from.emplace(h.from, nf).second || !by_to.emplace(h.to, nf).second) {
                fail(ErrorCode::kInternal, "convex hull horizon is not a simple loop");
            }
        }
        for (int nf : created) {
            Face& f = faces_[nf];
            // Edge (to -> apex) borders the face whose horizon edge starts at `to`;
            // edge (apex -> from) borders the face whose horizon edge ends at `from`.
            auto next = by_from.find(f.v[1]);
            auto prev = by_to.find(f.v[0]);
            if (next == by_from.end() || prev == by_to.end()) {
                fail(ErrorCode::kInternal, "convex hull horizon is not a closed loop");
            }
            f.adj[1] = next->second;
            f.adj[2] = prev->second;
        }

        for (int f : visible) {
            faces_[f].alive = false;
            for (int p : faces_[f].outside) {
                if (p != apex) assign(p, created);
            }
            faces_[f].outside.clear();
            faces_[f].outside.shrink_to_fit();
        }
        return created;
    }

    std::span<const Vec3> pts_;
    std::vector<Face> faces_;
    double eps_ = 0.0;
    int mark_ = 0;
};

}  // namespace

std::vector<std::size_t> convex_hull_vertices(std::span<const Vec3> points) {
    for (const auto& p : points) {
        if (!is_finite(p)) fail(ErrorCode::kInvalidArgument, "convex hull input must be finite");
    }
    Quickhull hull(points);
    return hull.run();
}

}  // namespace inspath
