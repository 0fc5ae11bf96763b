#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath {

struct Intrinsics {
    double fx = 525.0;
    double fy = 525.0;
    double cx = 319.5;
    double cy = 239.5;
    int width = 640;
    int height = 480;
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // row-major, 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::array<std::uint8_t, 3> at(int u, int v) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(v) * width + u);
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int u, int v, std::array<std::uint8_t, 3> rgb) {
        const std::size_t i = 3 * (static_cast<std::size_t>(v) * width + u);
        data[i] = rgb[0];
        data[i + 1] = rgb[1];
        data[i + 2] = rgb[2];
    }
};

/// Depth along the optical axis in meters; 0 marks an invalid pixel.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<double> meters;

    DepthImage() = default;
    DepthImage(int w, int h) : width(w), height(h), meters(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int u, int v) const { return meters[static_cast<std::size_t>(v) * width + u]; }
    double& at(int u, int v) { return meters[static_cast<std::size_t>(v) * width + u]; }
};

/// One RGB-D capture. Camera frame: +z along the optical axis, +x right, +y down.
struct Frame {
    RgbImage color;
    DepthImage depth;
    Intrinsics intrinsics;
    RigidTransform camera_pose;  // camera in world

    /// Throws invalid-argument on mismatched sizes, non-positive focal
    /// lengths, or negative/non-finite depth.
    void validate() const;
};

/// Camera pose looking from `eye` toward `target`, with image-up roughly along
/// `up`.
RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up = kUnitZ);

}  // namespace inspath
