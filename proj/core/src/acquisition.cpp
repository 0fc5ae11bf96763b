#include "inspath/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "inspath/cloud_ops.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"

namespace inspath {

void Frame::validate() const {
    if (color.width != depth.width || color.height != depth.height) {
        fail(ErrorCode::kInvalidArgument, "color and depth dimensions differ");
    }
    if (color.data.size() != static_cast<std::size_t>(color.width) * color.height * 3 ||
        depth.meters.size() != static_cast<std::size_t>(depth.width) * depth.height) {
        fail(ErrorCode::kInvalidArgument, "image buffer size does not match its dimensions");
    }
    if (!(intrinsics.fx > 0.0) || !(intrinsics.fy > 0.0)) fail(ErrorCode::kInvalidArgument, "focal lengths must be positive");
    for (double d : depth.meters) {
        if (!std::isfinite(d) || d < 0.0) fail(ErrorCode::kInvalidArgument, "depth must be finite and non-negative");
    }
}

RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 z = (target - eye).normalized();
    Vec3 x = z.cross(up);
    if (x.norm() < 1e-9) x = z.cross(Vec3::UnitX());
    x.normalize();
    const Vec3 y = z.cross(x);
    Mat3 m;
    m.col(0) = x;
    m.col(1) = y;
    m.col(2) = z;
    return RigidTransform(Rotation::from_matrix(m), eye);
}

std::optional<Frame> VectorFrameSource::next() {
    if (cursor_ >= frames_.size()) return std::nullopt;
    return frames_[cursor_++];
}

namespace {
std::filesystem::path frame_file(const std::filesystem::path& dir, std::size_t i, const char* kind) {
    char name[64];
    std::snprintf(name, sizeof name, "%04zu.%s.png", i, kind);
    return dir / name;
}
}  // namespace

ReplayFrameSource::ReplayFrameSource(const std::filesystem::path& root) {
    dir_ = std::filesystem::exists(root / "frames") ? root / "frames" : root;
    if (!std::filesystem::is_directory(dir_)) fail(ErrorCode::kIo, "replay directory not found: " + dir_.string());
    intrinsics_ = read_intrinsics(dir_ / "intrinsics.json");
    pose_ = read_pose(dir_ / "pose.json");
    while (std::filesystem::exists(frame_file(dir_, count_, "depth"))) ++count_;
}

std::optional<Frame> ReplayFrameSource::next() {
    if (cursor_ >= count_) return std::nullopt;
    Frame f;
    f.intrinsics = intrinsics_;
    f.camera_pose = pose_;
    f.depth = read_depth_png_mm(frame_file(dir_, cursor_, "depth"));
    const auto color_path = frame_file(dir_, cursor_, "color");
    f.color = std::filesystem::exists(color_path) ? read_rgb_png(color_path) : RgbImage(f.depth.width, f.depth.height);
    if (f.depth.width != intrinsics_.width || f.depth.height != intrinsics_.height) {
        fail(ErrorCode::kParse, "frame " + std::to_string(cursor_) + " size differs from intrinsics.json");
    }
    ++cursor_;
    f.validate();
    return f;
}

PointCloud generate_point_cloud(const Frame& frame) {
    frame.validate();
    const Intrinsics& k = frame.intrinsics;
    PointCloud cloud;
    cloud.frame = "world";
    const int w = frame.depth.width;
    const int h = frame.depth.height;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const double d = frame.depth.at(u, v);
            if (d <= 0.0) continue;
            const Vec3 cam(d * (u - k.cx) / k.fx, d * (v - k.cy) / k.fy, d);
            cloud.points.push_back(frame.camera_pose.apply(cam));
            const auto rgb = frame.color.at(u, v);
            cloud.colors.emplace_back(rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0);
        }
    }
    return cloud;
}

std::vector<PointCloud> sample_clouds(FrameSource& source, std::size_t s, const CropBox& crop, double ground_z) {
    if (s < 1) fail(ErrorCode::kInvalidArgument, "sample count must be at least 1");
    std::vector<PointCloud> clouds;
    clouds.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        std::optional<Frame> frame = source.next();
        if (!frame) {
            fail(ErrorCode::kInsufficientFrames,
                 "source exhausted after " + std::to_string(i) + " of " + std::to_string(s) + " frames");
        }
        clouds.push_back(filter_passthrough(generate_point_cloud(*frame), crop, ground_z));
    }
    return clouds;
}

bool counts_agree(double a, double b, double tolerance) { return std::abs(a - b) <= tolerance * std::max(a, b); }

namespace {
double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

VoteResult majority_vote(const std::vector<PointCloud>& clouds, double tolerance) {
    if (clouds.empty()) fail(ErrorCode::kInvalidArgument, "majority vote needs at least one cloud");
    if (!(tolerance >= 0.0)) fail(ErrorCode::kInvalidArgument, "vote tolerance must be non-negative");

    std::vector<std::size_t> order(clouds.size());
    std::iota(order.begin(), order.end(), 0);
    auto count = [&](std::size_t i) { return static_cast<double>(clouds[i].size()); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return count(a) < count(b); });

    // Single-link chaining over the sorted counts.
    std::vector<std::vector<std::size_t>> groups{{order.front()}};
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (counts_agree(count(order[i - 1]), count(order[i]), tolerance)) {
            groups.back().push_back(order[i]);
        } else {
            groups.push_back({order[i]});
        }
    }

    auto group_median = [&](const std::vector<std::size_t>& g) {
        std::vector<double> c;
        for (std::size_t i : g) c.push_back(count(i));
        return median_of(c);
    };
    const std::vector<std::size_t>* best = &groups.front();
    for (const auto& g : groups) {
        if (g.size() > best->size() || (g.size() == best->size() && group_median(g) > group_median(*best))) best = &g;
    }

    // A long chain can drift; keep only members that agree with the median.
    std::vector<std::size_t> selected = *best;
    for (;;) {
        const double m = group_median(selected);
        std::vector<std::size_t> kept;
        for (std::size_t i : selected) {
            if (counts_agree(count(i), m, tolerance)) kept.push_back(i);
        }
        if (kept.size() == selected.size() || kept.empty()) break;
        selected = std::move(kept);
    }
    std::sort(selected.begin(), selected.end());

    VoteResult result;
    result.selected = selected;
    for (std::size_t i : selected) result.merged.append(clouds[i]);
    return result;
}

PointCloud majority_vote_merge(const std::vector<PointCloud>& clouds, double tolerance) {
    return majority_vote(clouds, tolerance).merged;
}

}  // namespace inspath
