#include <gtest/gtest.h>

#include <cstdint>
#include <cstring>
#include <fstream>

#include "../support/shapes.hpp"
#include "../support/temp_dir.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"

namespace inspath {
namespace {

using testing::TempDir;

PointCloud sample_cloud(bool normals, bool colors) {
    PointCloud c = testing::cloud_of(testing::uniform_cube(50, 7, -3.0, 3.0));
    std::mt19937_64 rng(11);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (normals) c.normals.push_back(testing::random_unit(rng));
        if (colors) c.colors.push_back(Vec3((i % 256) / 255.0, ((3 * i) % 256) / 255.0, ((7 * i) % 256) / 255.0));
    }
    return c;
}

void write_raw(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

int error_code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return static_cast<int>(e.code());
    }
    return -1;
}

class CloudRoundTrip : public ::testing::TestWithParam<std::tuple<CloudFormat, bool, bool>> {};

TEST_P(CloudRoundTrip, IsLossless) {
    const auto [format, normals, colors] = GetParam();
    TempDir dir;
    const PointCloud c = sample_cloud(normals, colors);
    write_cloud(c, dir / "c.out", format);
    const PointCloud back = read_cloud(dir / "c.out");
    ASSERT_EQ(back.size(), c.size());
    ASSERT_EQ(back.has_normals(), normals);
    ASSERT_EQ(back.has_colors(), colors);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back.points[i], c.points[i]);
        if (normals) EXPECT_EQ(back.normals[i], c.normals[i]);
        if (colors) EXPECT_LT((back.colors[i] - c.colors[i]).norm(), 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(AllFormats, CloudRoundTrip,
                         ::testing::Combine(::testing::Values(CloudFormat::kPlyAscii, CloudFormat::kPlyBinary,
                                                              CloudFormat::kXyz),
                                            ::testing::Bool(), ::testing::Bool()));

TEST(ReadCloud, AsciiPlyWithExtraPropertiesAndFaces) {
    TempDir dir;
    write_raw(dir / "m.ply",
              "ply\nformat ascii 1.0\ncomment hi\nelement vertex 3\nproperty float x\nproperty float y\n"
              "property float z\nproperty float intensity\nelement face 1\nproperty list uchar int vertex_indices\n"
              "end_header\n0 0 0 1\n1 0 0 2\n0 1 0 3\n3 0 1 2\n");
    std::vector<std::string> warnings;
    const PointCloud c = read_cloud(dir / "m.ply", &warnings);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.points[1], Vec3(1, 0, 0));
    EXPECT_FALSE(c.has_colors());
    EXPECT_EQ(warnings.size(), 2u);
}

TEST(ReadCloud, BigEndianFloats) {
    TempDir dir;
    std::string body;
    for (float v : {1.5f, -2.0f, 0.25f}) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        for (int s = 24; s >= 0; s -= 8) body.push_back(static_cast<char>((bits >> s) & 0xff));
    }
    write_raw(dir / "be.ply", "ply\nformat binary_big_endian 1.0\nelement vertex 1\nproperty float x\n"
                              "property float y\nproperty float z\nend_header\n" + body);
    const PointCloud c = read_cloud(dir / "be.ply");
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.points[0], Vec3(1.5, -2.0, 0.25));
}

TEST(ReadCloud, TruncatedBinaryBodyReportsByteOffset) {
    TempDir dir;
    const std::string header =
        "ply\nformat binary_little_endian 1.0\nelement vertex 2\nproperty double x\nproperty double y\n"
        "property double z\nend_header\n";
    write_raw(dir / "t.ply", header + std::string(24 + 10, '\0'));
    try {
        read_cloud(dir / "t.ply");
        FAIL() << "expected parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kParse);
        EXPECT_NE(e.message().find("byte offset " + std::to_string(header.size() + 32)), std::string::npos)
            << e.message();
    }
}

TEST(ReadCloud, TruncatedAsciiBody) {
    TempDir dir;
    write_raw(dir / "t.ply", "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\n"
                             "property float z\nend_header\n0 0 0\n1 1 1\n");
    EXPECT_EQ(error_code_of([&] { read_cloud(dir / "t.ply"); }), static_cast<int>(ErrorCode::kParse));
}

TEST(ReadCloud, MalformedHeaderReportsLine) {
    TempDir dir;
    write_raw(dir / "h.ply", "ply\nformat ascii 1.0\nelement vertex 1\nproperty quux x\nend_header\n1\n");
    try {
        read_cloud(dir / "h.ply");
        FAIL() << "expected parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kParse);
        EXPECT_NE(e.message().find("line 4"), std::string::npos) << e.message();
    }
}

TEST(ReadCloud, MissingFileIsIoError) {
    EXPECT_EQ(error_code_of([] { read_cloud("/nonexistent/nope.ply"); }), static_cast<int>(ErrorCode::kIo));
}

TEST(ReadCloud, XyzWithoutHeader) {
    TempDir dir;
    write_raw(dir / "p.xyz", "0 0 0\n1 2 3\n\n4 5 6\n");
    const PointCloud c = read_cloud(dir / "p.xyz");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.points[2], Vec3(4, 5, 6));
}

TEST(ReadCloud, XyzRaggedRowIsParseError) {
    TempDir dir;
    write_raw(dir / "p.xyz", "0 0 0\n1 2\n");
    EXPECT_EQ(error_code_of([&] { read_cloud(dir / "p.xyz"); }), static_cast<int>(ErrorCode::kParse));
}

TEST(Png, RgbRoundTrip) {
    TempDir dir;
    RgbImage img(7, 5);
    for (int v = 0; v < 5; ++v)
        for (int u = 0; u < 7; ++u)
            img.set(u, v, {static_cast<std::uint8_t>(u * 30), static_cast<std::uint8_t>(v * 50), 200});
    write_rgb_png(img, dir / "c.png");
    const RgbImage back = read_rgb_png(dir / "c.png");
    EXPECT_EQ(back.width, 7);
    EXPECT_EQ(back.height, 5);
    EXPECT_EQ(back.data, img.data);
}

TEST(Png, DepthRoundsToMillimeters) {
    TempDir dir;
    DepthImage d(4, 3);
    d.at(0, 0) = 1.2344;
    d.at(1, 0) = 1.2346;
    d.at(2, 2) = 70.0;
    d.at(3, 1) = 0.0;
    write_depth_png_mm(d, dir / "d.png");
    const DepthImage back = read_depth_png_mm(dir / "d.png");
    EXPECT_DOUBLE_EQ(back.at(0, 0), 1.234);
    EXPECT_DOUBLE_EQ(back.at(1, 0), 1.235);
    EXPECT_DOUBLE_EQ(back.at(2, 2), 65.535);
    EXPECT_EQ(back.at(3, 1), 0.0);
}

TEST(Png, CorruptFileIsParseError) {
    TempDir dir;
    write_raw(dir / "bad.png", "\x89PNG\r\n\x1a\nnot really");
    EXPECT_EQ(error_code_of([&] { read_rgb_png(dir / "bad.png"); }), static_cast<int>(ErrorCode::kParse));
}

TEST(Png, RgbFileIsNotDepth) {
    TempDir dir;
    write_rgb_png(RgbImage(2, 2), dir / "c.png");
    EXPECT_EQ(error_code_of([&] { read_depth_png_mm(dir / "c.png"); }), static_cast<int>(ErrorCode::kParse));
}

TEST(Sidecars, IntrinsicsAndPoseRoundTrip) {
    TempDir dir;
    Intrinsics k{600, 610, 320, 240, 640, 480};
    write_intrinsics(k, dir / "k.json");
    const Intrinsics kb = read_intrinsics(dir / "k.json");
    EXPECT_EQ(kb.fx, 600);
    EXPECT_EQ(kb.fy, 610);
    EXPECT_EQ(kb.width, 640);

    const RigidTransform pose(rotation_from_axis_angle(Vec3(0, 0, 1), 0.7), Vec3(1, 2, 3));
    write_pose(pose, dir / "p.json");
    const RigidTransform pb = read_pose(dir / "p.json");
    EXPECT_LT((pb.matrix() - pose.matrix()).norm(), 1e-15);
}

TEST(Sidecars, PoseWithUnknownKeyIsParseError) {
    TempDir dir;
    write_raw(dir / "p.json", R"({"quaternion":[1,0,0,0],"translation":[0,0,0],"scale":2})");
    EXPECT_EQ(error_code_of([&] { read_pose(dir / "p.json"); }), static_cast<int>(ErrorCode::kParse));
}

TEST(TextFile, WriteReplacesAtomically) {
    TempDir dir;
    write_text_file(dir / "a.txt", "one");
    write_text_file(dir / "a.txt", "two");
    EXPECT_EQ(read_text_file(dir / "a.txt"), "two");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
}

}  // namespace
}  // namespace inspath
