#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "inspath/frame.hpp"
#include "inspath/point_cloud.hpp"

namespace inspath {

enum class CloudFormat { kPlyAscii, kPlyBinary, kXyz };

/// Reads PLY (ascii or binary little/big endian) or XYZ text, chosen by
/// content. Unknown vertex properties and non-vertex elements are skipped and
/// reported through `warnings` when given. Malformed headers raise parse-error
/// with the line number; truncated bodies raise parse-error with the byte
/// offset.
PointCloud read_cloud(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// PLY stores coordinates and normals as doubles and colors as uchar RGB.
/// XYZ stores one point per line with %.17g reals; a leading `# columns:` line
/// names the optional normal and color columns.
void write_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);

RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const RgbImage& image, const std::filesystem::path& path);

/// 16-bit grayscale PNG holding millimeters; converted to meters.
DepthImage read_depth_png_mm(const std::filesystem::path& path);
/// Meters rounded to the nearest millimeter; values beyond 65.535 m clamp.
void write_depth_png_mm(const DepthImage& depth, const std::filesystem::path& path);

Intrinsics read_intrinsics(const std::filesystem::path& path);
void write_intrinsics(const Intrinsics& k, const std::filesystem::path& path);

/// `{"quaternion":[w,x,y,z],"translation":[x,y,z]}`
RigidTransform read_pose(const std::filesystem::path& path);
void write_pose(const RigidTransform& pose, const std::filesystem::path& path);

/// Writes frames as a replay directory (`<root>/frames/...`). All frames must
/// share intrinsics and pose.
void write_replay_directory(const std::vector<Frame>& frames, const std::filesystem::path& root);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace inspath
