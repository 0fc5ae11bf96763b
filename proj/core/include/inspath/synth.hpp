#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inspath/acquisition.hpp"
#include "inspath/frame.hpp"
#include "inspath/geom.hpp"

namespace inspath {

enum class Shape { kPlane, kSphere, kCylinder, kBox };

std::string to_string(Shape shape);

/// Analytic primitive in its own local frame, placed by `pose`.
///   plane:    finite rectangle on local z=0, `size` = (sx, sy), normal +z
///   sphere:   `radius` about the local origin
///   cylinder: capped, axis local z, `radius`, `height` centered on the origin
///   box:      centered on the origin, `size` = (sx, sy, sz)
struct Primitive {
    Shape shape = Shape::kPlane;
    RigidTransform pose;
    Vec3 size = Vec3::Zero();
    double radius = 0.0;
    double height = 0.0;
    std::array<std::uint8_t, 3> color{180, 180, 180};

    static Primitive plane(const Vec3& center, const Vec3& normal, double sx, double sy);
    static Primitive sphere(const Vec3& center, double radius);
    static Primitive cylinder(const Vec3& center, const Vec3& axis, double radius, double height);
    static Primitive box(const RigidTransform& pose, const Vec3& size);

    /// Throws invalid-argument on non-positive dimensions or a non-finite pose.
    void validate() const;
};

struct Scene {
    std::vector<Primitive> primitives;
    void validate() const;
};

struct CameraSpec {
    RigidTransform pose;  // camera in world
    Intrinsics intrinsics;
};

/// Depth jitter, per-pixel dropout and an optional strobe cycle. Frame i uses
/// dropout_prob * strobe_multipliers[i % strobe_period] (clamped to 1).
struct NoiseSpec {
    double depth_sigma = 0.0;
    double dropout_prob = 0.0;
    std::size_t strobe_period = 0;
    std::vector<double> strobe_multipliers;

    /// The lighting-disturbance preset: 2 mm jitter, 40% base dropout and a
    /// two-phase strobe starting in the dark phase.
    static NoiseSpec strobe();
    bool noiseless() const { return depth_sigma == 0.0 && dropout_prob == 0.0; }
    double dropout_for_frame(std::size_t frame_index) const;
    void validate() const;
};

struct RayHit {
    double t = 0.0;
    std::size_t primitive = 0;
};

/// Nearest hit with t > 1e-9 along origin + t * direction.
std::optional<RayHit> cast_ray(const Scene& scene, const Vec3& origin, const Vec3& direction);

/// Ray-cast depth frame. Depth is the hit's camera-frame z, jittered and then
/// dropped per the noise spec; misses and non-positive jittered depths are 0.
/// Deterministic in (scene, camera, noise, seed, frame_index).
Frame render_depth(const Scene& scene, const CameraSpec& camera, const NoiseSpec& noise, std::uint64_t seed,
                   std::size_t frame_index = 0);

/// Distance from p to the nearest primitive surface.
double surface_distance(const Scene& scene, const Vec3& p);

/// Outward unit normal of the nearest primitive at its closest surface point.
/// Throws invalid-argument when p is farther than `tolerance` from every
/// surface.
Vec3 ground_truth_normal(const Scene& scene, const Vec3& p, double tolerance = 1e-6);

/// Endless stream of renders with frame_index 0, 1, 2, ... optionally capped.
class SyntheticFrameSource final : public FrameSource {
public:
    SyntheticFrameSource(Scene scene, CameraSpec camera, NoiseSpec noise, std::uint64_t seed,
                         std::optional<std::size_t> limit = std::nullopt);
    std::optional<Frame> next() override;

private:
    Scene scene_;
    CameraSpec camera_;
    NoiseSpec noise_;
    std::uint64_t seed_;
    std::optional<std::size_t> limit_;
    std::size_t index_ = 0;
};

/// Scene file contents: primitives, camera and default noise.
struct SceneFile {
    Scene scene;
    CameraSpec camera;
    NoiseSpec noise;
};

SceneFile parse_scene_file(const std::string& json_text, const std::string& origin = "scene");
SceneFile load_scene_file(const std::filesystem::path& path);
std::string scene_file_to_json(const SceneFile& file);

/// Built-in scenes used by tests, benchmarks and the CLI:
/// "plane", "inclined_plane", "sphere", "cylinder", "two_blobs".
SceneFile builtin_scene(const std::string& name);
std::vector<std::string> builtin_scene_names();

}  // namespace inspath
