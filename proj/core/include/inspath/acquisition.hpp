#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "inspath/frame.hpp"
#include "inspath/point_cloud.hpp"

namespace inspath {

/// Ordered supply of frames, consumed by a single reader.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    /// Next frame, or nullopt once exhausted.
    virtual std::optional<Frame> next() = 0;
};

class VectorFrameSource final : public FrameSource {
public:
    explicit VectorFrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
    std::optional<Frame> next() override;

private:
    std::vector<Frame> frames_;
    std::size_t cursor_ = 0;
};

/// Replays `frames/NNNN.color.png` + `frames/NNNN.depth.png` (16-bit
/// millimeters) with `frames/intrinsics.json` and `frames/pose.json`.
/// `root` may name the directory holding `frames/` or `frames/` itself.
class ReplayFrameSource final : public FrameSource {
public:
    explicit ReplayFrameSource(const std::filesystem::path& root);
    std::optional<Frame> next() override;
    std::size_t frame_count() const { return count_; }

private:
    std::filesystem::path dir_;
    Intrinsics intrinsics_;
    RigidTransform pose_;
    std::size_t count_ = 0;
    std::size_t cursor_ = 0;
};

/// Pinhole back-projection of every valid pixel into the world frame, with
/// the pixel's color attached.
PointCloud generate_point_cloud(const Frame& frame);

/// Pulls `s` frames, back-projects and crops each. Throws insufficient-frames
/// when the source runs dry first.
std::vector<PointCloud> sample_clouds(FrameSource& source, std::size_t s, const CropBox& crop, double ground_z);

struct VoteResult {
    PointCloud merged;
    std::vector<std::size_t> selected;  // capture order
};

/// Groups clouds by point count (sorted counts chained while neighbours agree
/// within tolerance * max), keeps the largest group (ties: larger median),
/// prunes members that disagree with the group median, and concatenates the
/// survivors in capture order.
VoteResult majority_vote(const std::vector<PointCloud>& clouds, double tolerance);

PointCloud majority_vote_merge(const std::vector<PointCloud>& clouds, double tolerance);

/// |a - b| <= tolerance * max(a, b)
bool counts_agree(double a, double b, double tolerance);

}  // namespace inspath
