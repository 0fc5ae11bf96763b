#include <gtest/gtest.h>

#include "../support/shapes.hpp"
#include "../support/temp_dir.hpp"
#include "inspath/acquisition.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"

namespace inspath {
namespace {

Frame flat_frame(int w, int h, double depth) {
    Frame f;
    f.intrinsics = Intrinsics{100, 120, (w - 1) / 2.0, (h - 1) / 2.0, w, h};
    f.color = RgbImage(w, h);
    f.depth = DepthImage(w, h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) {
            f.depth.at(u, v) = depth;
            f.color.set(u, v, {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), 9});
        }
    return f;
}

PointCloud cloud_with_count(std::size_t n) {
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(static_cast<double>(i), 0, 0);
    return c;
}

TEST(GeneratePointCloud, MatchesPinholeFormula) {
    Frame f = flat_frame(8, 6, 2.0);
    f.depth.at(3, 3) = 0.0;
    f.camera_pose = RigidTransform(rotation_from_axis_angle(Vec3(1, 0, 0), 0.3), Vec3(0.5, -1, 2));
    const PointCloud c = generate_point_cloud(f);
    ASSERT_EQ(c.size(), 47u);
    ASSERT_TRUE(c.has_colors());
    std::size_t i = 0;
    for (int v = 0; v < 6; ++v)
        for (int u = 0; u < 8; ++u) {
            if (u == 3 && v == 3) continue;
            const double d = f.depth.at(u, v);
            const Vec3 cam((u - 3.5) * d / 100.0, (v - 2.5) * d / 120.0, d);
            const Vec3 expected = f.camera_pose.rotation().matrix() * cam + f.camera_pose.translation();
            EXPECT_LT((c.points[i] - expected).norm(), 1e-12);
            EXPECT_DOUBLE_EQ(c.colors[i].x(), u / 255.0);
            ++i;
        }
}

TEST(GeneratePointCloud, RejectsNegativeDepth) {
    Frame f = flat_frame(2, 2, 1.0);
    f.depth.at(0, 0) = -1.0;
    EXPECT_THROW(generate_point_cloud(f), Error);
}

TEST(LookAt, OpticalAxisPointsAtTarget) {
    const RigidTransform pose = look_at(Vec3(1, 2, 3), Vec3(1, 5, 3));
    EXPECT_LT((pose.apply_direction(Vec3(0, 0, 1)) - Vec3(0, 1, 0)).norm(), 1e-12);
    EXPECT_LT((pose.apply_direction(Vec3(0, 1, 0)) - Vec3(0, 0, -1)).norm(), 1e-12);
}

TEST(MajorityVote, DropsOutlierCount) {
    std::vector<PointCloud> clouds;
    for (std::size_t n : {800, 795, 790, 798, 300}) clouds.push_back(cloud_with_count(n));
    const VoteResult r = majority_vote(clouds, 0.05);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(r.merged.size(), 800u + 795 + 790 + 798);
    EXPECT_EQ(r.merged.points[800], Vec3(0, 0, 0));
}

TEST(MajorityVote, SingleCloudPassesThrough) {
    const VoteResult r = majority_vote({cloud_with_count(715)}, 0.05);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
    EXPECT_EQ(r.merged.size(), 715u);
}

TEST(MajorityVote, TieGoesToLargerCounts) {
    const VoteResult r = majority_vote({cloud_with_count(100), cloud_with_count(500)}, 0.05);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{1}));
}

TEST(MajorityVote, DriftingChainIsPruned) {
    std::vector<PointCloud> clouds;
    for (std::size_t n : {100, 104, 108, 112, 116}) clouds.push_back(cloud_with_count(n));
    const VoteResult r = majority_vote(clouds, 0.05);
    for (std::size_t i : r.selected) {
        for (std::size_t j : r.selected) EXPECT_TRUE(counts_agree(clouds[i].size(), clouds[j].size(), 0.1));
    }
    EXPECT_GE(r.selected.size(), 2u);
}

TEST(MajorityVote, RejectsEmptyInput) { EXPECT_THROW(majority_vote({}, 0.05), Error); }

TEST(SampleClouds, ExhaustedSourceIsInsufficientFrames) {
    VectorFrameSource src({flat_frame(4, 4, 1.0), flat_frame(4, 4, 1.0)});
    const CropBox box{Vec3::Constant(-10), Vec3::Constant(10)};
    try {
        sample_clouds(src, 3, box, -10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kInsufficientFrames);
    }
}

TEST(ReplayFrameSource, ReadsWhatWasWritten) {
    testing::TempDir dir;
    Frame a = flat_frame(6, 4, 1.5);
    a.camera_pose = look_at(Vec3(0, -2, 1), Vec3(0, 0, 1));
    Frame b = a;
    b.depth.at(2, 2) = 0.0;
    write_replay_directory({a, b}, dir.path());
    ReplayFrameSource src(dir.path());
    EXPECT_EQ(src.frame_count(), 2u);
    const auto fa = src.next();
    const auto fb = src.next();
    ASSERT_TRUE(fa && fb);
    EXPECT_FALSE(src.next());
    EXPECT_EQ(fa->color.data, a.color.data);
    EXPECT_EQ(fb->depth.at(2, 2), 0.0);
    EXPECT_DOUBLE_EQ(fa->depth.at(1, 1), 1.5);
    EXPECT_LT((fa->camera_pose.matrix() - a.camera_pose.matrix()).norm(), 1e-12);
}

TEST(ReplayFrameSource, MissingDirectoryIsIoError) {
    try {
        ReplayFrameSource src("/nonexistent/replay");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIo);
    }
}

}  // namespace
}  // namespace inspath
