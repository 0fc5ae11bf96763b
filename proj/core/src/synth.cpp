#include "inspath/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "inspath/error.hpp"
#include "inspath/io.hpp"
#include "json_util.hpp"

namespace inspath {

using nlohmann::json;

namespace {
constexpr double kTMin = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::kPlane: return "plane";
        case Shape::kSphere: return "sphere";
        case Shape::kCylinder: return "cylinder";
        case Shape::kBox: return "box";
    }
    return "unknown";
}

Primitive Primitive::plane(const Vec3& center, const Vec3& normal, double sx, double sy) {
    Primitive p;
    p.shape = Shape::kPlane;
    p.pose = RigidTransform(align_z_to_normal(normal), center);
    p.size = Vec3(sx, sy, 0.0);
    return p;
}

Primitive Primitive::sphere(const Vec3& center, double radius) {
    Primitive p;
    p.shape = Shape::kSphere;
    p.pose = RigidTransform::from_translation(center);
    p.radius = radius;
    return p;
}

Primitive Primitive::cylinder(const Vec3& center, const Vec3& axis, double radius, double height) {
    Primitive p;
    p.shape = Shape::kCylinder;
    p.pose = RigidTransform(align_z_to_normal(axis), center);
    p.radius = radius;
    p.height = height;
    return p;
}

Primitive Primitive::box(const RigidTransform& pose, const Vec3& size) {
    Primitive p;
    p.shape = Shape::kBox;
    p.pose = pose;
    p.size = size;
    return p;
}

void Primitive::validate() const {
    if (!is_finite(pose.translation())) fail(ErrorCode::kInvalidArgument, "primitive pose must be finite");
    switch (shape) {
        case Shape::kPlane:
            if (!(size.x() > 0 && size.y() > 0)) fail(ErrorCode::kInvalidArgument, "plane size must be positive");
            break;
        case Shape::kSphere:
            if (!(radius > 0)) fail(ErrorCode::kInvalidArgument, "sphere radius must be positive");
            break;
        case Shape::kCylinder:
            if (!(radius > 0 && height > 0)) fail(ErrorCode::kInvalidArgument, "cylinder dimensions must be positive");
            break;
        case Shape::kBox:
            if (!(size.x() > 0 && size.y() > 0 && size.z() > 0)) {
                fail(ErrorCode::kInvalidArgument, "box size must be positive");
            }
            break;
    }
    if (!std::isfinite(size.sum()) || !std::isfinite(radius) || !std::isfinite(height)) {
        fail(ErrorCode::kInvalidArgument, "primitive dimensions must be finite");
    }
}

void Scene::validate() const {
    for (const Primitive& p : primitives) p.validate();
}

NoiseSpec NoiseSpec::strobe() {
    NoiseSpec n;
    n.depth_sigma = 0.002;
    n.dropout_prob = 0.45;
    n.strobe_period = 3;
    n.strobe_multipliers = {2.0, 0.5, 0.5};
    return n;
}

double NoiseSpec::dropout_for_frame(std::size_t frame_index) const {
    double p = dropout_prob;
    if (strobe_period > 0) p *= strobe_multipliers[frame_index % strobe_period];
    return std::clamp(p, 0.0, 1.0);
}

void NoiseSpec::validate() const {
    if (!(depth_sigma >= 0.0) || !std::isfinite(depth_sigma)) {
        fail(ErrorCode::kInvalidArgument, "depth_sigma must be finite and non-negative");
    }
    if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) fail(ErrorCode::kInvalidArgument, "dropout_prob must lie in [0,1]");
    if (strobe_period > 0 && strobe_multipliers.size() != strobe_period) {
        fail(ErrorCode::kInvalidArgument, "strobe_multipliers must have strobe_period entries");
    }
    if (strobe_period == 0 && !strobe_multipliers.empty()) {
        fail(ErrorCode::kInvalidArgument, "strobe_multipliers given without strobe_period");
    }
    for (double m : strobe_multipliers) {
        if (!(m >= 0.0) || !std::isfinite(m)) fail(ErrorCode::kInvalidArgument, "strobe multipliers must be non-negative");
    }
}

// ---------------------------------------------------------------- ray casting

namespace {

double intersect_local(const Primitive& prim, const Vec3& o, const Vec3& d) {
    switch (prim.shape) {
        case Shape::kPlane: {
            if (std::abs(d.z()) < 1e-15) return kInf;
            const double t = -o.z() / d.z();
            if (t <= kTMin) return kInf;
            const Vec3 h = o + t * d;
            if (std::abs(h.x()) > prim.size.x() / 2 || std::abs(h.y()) > prim.size.y() / 2) return kInf;
            return t;
        }
        case Shape::kSphere: {
            const double a = d.squaredNorm();
            const double b = o.dot(d);
            const double c = o.squaredNorm() - prim.radius * prim.radius;
            const double disc = b * b - a * c;
            if (disc < 0) return kInf;
            const double s = std::sqrt(disc);
            const double t0 = (-b - s) / a;
            const double t1 = (-b + s) / a;
            if (t0 > kTMin) return t0;
            if (t1 > kTMin) return t1;
            return kInf;
        }
        case Shape::kCylinder: {
            const double hh = prim.height / 2;
            double best = kInf;
            const double a = d.x() * d.x() + d.y() * d.y();
            if (a > 1e-30) {
                const double b = o.x() * d.x() + o.y() * d.y();
                const double c = o.x() * o.x() + o.y() * o.y() - prim.radius * prim.radius;
                const double disc = b * b - a * c;
                if (disc >= 0) {
                    const double s = std::sqrt(disc);
                    for (double t : {(-b - s) / a, (-b + s) / a}) {
                        if (t > kTMin && std::abs(o.z() + t * d.z()) <= hh) best = std::min(best, t);
                    }
                }
            }
            if (std::abs(d.z()) > 1e-15) {
                for (double zc : {-hh, hh}) {
                    const double t = (zc - o.z()) / d.z();
                    if (t <= kTMin) continue;
                    const Vec3 h = o + t * d;
                    if (h.x() * h.x() + h.y() * h.y() <= prim.radius * prim.radius) best = std::min(best, t);
                }
            }
            return best;
        }
        case Shape::kBox: {
            double tnear = -kInf, tfar = kInf;
            for (int i = 0; i < 3; ++i) {
                const double half = prim.size[i] / 2;
                if (std::abs(d[i]) < 1e-15) {
                    if (std::abs(o[i]) > half) return kInf;
                    continue;
                }
                double t0 = (-half - o[i]) / d[i];
                double t1 = (half - o[i]) / d[i];
                if (t0 > t1) std::swap(t0, t1);
                tnear = std::max(tnear, t0);
                tfar = std::min(tfar, t1);
            }
            if (tnear > tfar) return kInf;
            if (tnear > kTMin) return tnear;
            if (tfar > kTMin) return tfar;
            return kInf;
        }
    }
    return kInf;
}

struct SurfacePoint {
    double distance = kInf;
    Vec3 normal_local = Vec3::UnitZ();
};

double sign_or_one(double v) { return v < 0 ? -1.0 : 1.0; }

SurfacePoint closest_local(const Primitive& prim, const Vec3& q) {
    SurfacePoint sp;
    switch (prim.shape) {
        case Shape::kPlane: {
            const double dx = std::max(std::abs(q.x()) - prim.size.x() / 2, 0.0);
            const double dy = std::max(std::abs(q.y()) - prim.size.y() / 2, 0.0);
            sp.distance = std::sqrt(dx * dx + dy * dy + q.z() * q.z());
            sp.normal_local = Vec3::UnitZ();
            break;
        }
        case Shape::kSphere: {
            const double r = q.norm();
            sp.distance = std::abs(r - prim.radius);
            sp.normal_local = r > 0 ? Vec3(q / r) : Vec3::UnitZ();
            break;
        }
        case Shape::kCylinder: {
            const double rho = std::hypot(q.x(), q.y());
            const Vec3 radial = rho > 0 ? Vec3(q.x() / rho, q.y() / rho, 0) : Vec3::UnitX();
            const Vec3 cap(0, 0, sign_or_one(q.z()));
            const double hh = prim.height / 2;
            const double dr = rho - prim.radius;
            const double dz = std::abs(q.z()) - hh;
            if (dr <= 0 && dz <= 0) {
                const bool side = -dr <= -dz;
                sp.distance = side ? -dr : -dz;
                sp.normal_local = side ? radial : cap;
            } else {
                const double er = std::max(dr, 0.0);
                const double ez = std::max(dz, 0.0);
                sp.distance = std::hypot(er, ez);
                sp.normal_local = (er * radial + ez * cap).normalized();
            }
            break;
        }
        case Shape::kBox: {
            const Vec3 half = prim.size / 2;
            const Vec3 excess = q.cwiseAbs() - half;
            if ((excess.array() <= 0).all()) {
                int axis = 0;
                excess.maxCoeff(&axis);
                sp.distance = -excess[axis];
                sp.normal_local = Vec3::Zero();
                sp.normal_local[axis] = sign_or_one(q[axis]);
            } else {
                Vec3 out = excess.cwiseMax(0.0);
                for (int i = 0; i < 3; ++i) out[i] *= sign_or_one(q[i]);
                sp.distance = out.norm();
                sp.normal_local = out / sp.distance;
            }
            break;
        }
    }
    return sp;
}

struct NearestSurface {
    double distance = kInf;
    Vec3 normal = Vec3::UnitZ();
};

NearestSurface nearest_surface(const Scene& scene, const Vec3& p) {
    NearestSurface best;
    for (const Primitive& prim : scene.primitives) {
        const Vec3 q = prim.pose.inverse().apply(p);
        const SurfacePoint sp = closest_local(prim, q);
        if (sp.distance < best.distance) {
            best.distance = sp.distance;
            best.normal = prim.pose.apply_direction(sp.normal_local);
        }
    }
    return best;
}

}  // namespace

std::optional<RayHit> cast_ray(const Scene& scene, const Vec3& origin, const Vec3& direction) {
    std::optional<RayHit> hit;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& prim = scene.primitives[i];
        const RigidTransform inv = prim.pose.inverse();
        const double t = intersect_local(prim, inv.apply(origin), inv.apply_direction(direction));
        if (t < kInf && (!hit || t < hit->t)) hit = RayHit{t, i};
    }
    return hit;
}

Frame render_depth(const Scene& scene, const CameraSpec& camera, const NoiseSpec& noise, std::uint64_t seed,
                   std::size_t frame_index) {
    scene.validate();
    noise.validate();
    const Intrinsics& k = camera.intrinsics;
    if (!(k.fx > 0 && k.fy > 0) || k.width < 1 || k.height < 1) {
        fail(ErrorCode::kInvalidArgument, "camera intrinsics must have positive focal lengths and size");
    }

    Frame frame;
    frame.intrinsics = k;
    frame.camera_pose = camera.pose;
    frame.color = RgbImage(k.width, k.height);
    frame.depth = DepthImage(k.width, k.height);

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double dropout = noise.dropout_for_frame(frame_index);

    const Mat3 rot = camera.pose.rotation().matrix();
    const Vec3 eye = camera.pose.translation();
    for (int v = 0; v < k.height; ++v) {
        for (int u = 0; u < k.width; ++u) {
            const double g = jitter(rng);
            const double r = uniform(rng);
            const Vec3 dir = rot * Vec3((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
            const std::optional<RayHit> hit = cast_ray(scene, eye, dir);
            if (!hit) continue;
            double depth = hit->t + noise.depth_sigma * g;
            if (r < dropout || depth <= 0.0) depth = 0.0;
            frame.depth.at(u, v) = depth;
            if (depth > 0.0) frame.color.set(u, v, scene.primitives[hit->primitive].color);
        }
    }
    return frame;
}

double surface_distance(const Scene& scene, const Vec3& p) { return nearest_surface(scene, p).distance; }

Vec3 ground_truth_normal(const Scene& scene, const Vec3& p, double tolerance) {
    const NearestSurface s = nearest_surface(scene, p);
    if (!(s.distance <= tolerance)) {
        fail(ErrorCode::kInvalidArgument, "point lies " + std::to_string(s.distance) + " m from the nearest surface");
    }
    return s.normal;
}

SyntheticFrameSource::SyntheticFrameSource(Scene scene, CameraSpec camera, NoiseSpec noise, std::uint64_t seed,
                                           std::optional<std::size_t> limit)
    : scene_(std::move(scene)), camera_(camera), noise_(std::move(noise)), seed_(seed), limit_(limit) {}

std::optional<Frame> SyntheticFrameSource::next() {
    if (limit_ && index_ >= *limit_) return std::nullopt;
    return render_depth(scene_, camera_, noise_, seed_, index_++);
}

// ---------------------------------------------------------------- scene files

namespace {

RigidTransform placement_from_json(const json& j, const std::string& path, const char* axis_key) {
    if (j.contains("pose")) {
        if (j.contains("center") || j.contains(axis_key)) fail(ErrorCode::kParse, path + ": give either pose or center");
        return detail::transform_from_json(j["pose"], path + ".pose");
    }
    const Vec3 center = j.contains("center") ? detail::vec3_from_json(j["center"], path + ".center") : Vec3::Zero();
    Rotation r;
    if (j.contains(axis_key)) {
        const Vec3 axis = detail::vec3_from_json(j[axis_key], path + "." + axis_key);
        try {
            r = align_z_to_normal(axis);
        } catch (const Error& e) {
            fail(ErrorCode::kParse, path + "." + axis_key + ": " + e.message());
        }
    }
    return RigidTransform(r, center);
}

Primitive primitive_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("shape") || !j["shape"].is_string()) {
        fail(ErrorCode::kParse, path + ".shape: missing or not a string");
    }
    const std::string shape = j["shape"].get<std::string>();
    Primitive p;
    if (shape == "plane") {
        detail::check_keys(j, path, {"shape", "pose", "center", "normal", "size", "color"});
        p.shape = Shape::kPlane;
        p.pose = placement_from_json(j, path, "normal");
        if (!j.contains("size") || !j["size"].is_array() || j["size"].size() != 2 || !j["size"][0].is_number() ||
            !j["size"][1].is_number()) {
            fail(ErrorCode::kParse, path + ".size: expected [sx, sy]");
        }
        p.size = Vec3(j["size"][0].get<double>(), j["size"][1].get<double>(), 0.0);
    } else if (shape == "sphere") {
        detail::check_keys(j, path, {"shape", "pose", "center", "radius", "color"});
        p.shape = Shape::kSphere;
        p.pose = placement_from_json(j, path, "axis");
        p.radius = detail::number_at(j, "radius", path);
    } else if (shape == "cylinder") {
        detail::check_keys(j, path, {"shape", "pose", "center", "axis", "radius", "height", "color"});
        p.shape = Shape::kCylinder;
        p.pose = placement_from_json(j, path, "axis");
        p.radius = detail::number_at(j, "radius", path);
        p.height = detail::number_at(j, "height", path);
    } else if (shape == "box") {
        detail::check_keys(j, path, {"shape", "pose", "center", "size", "color"});
        p.shape = Shape::kBox;
        p.pose = placement_from_json(j, path, "axis");
        if (!j.contains("size")) fail(ErrorCode::kParse, path + ".size: missing");
        p.size = detail::vec3_from_json(j["size"], path + ".size");
    } else {
        fail(ErrorCode::kParse, path + ".shape: unknown shape '" + shape + "'");
    }
    if (j.contains("color")) {
        const Vec3 c = detail::vec3_from_json(j["color"], path + ".color");
        for (int i = 0; i < 3; ++i) {
            if (c[i] < 0 || c[i] > 255) fail(ErrorCode::kParse, path + ".color: components must lie in [0,255]");
            p.color[i] = static_cast<std::uint8_t>(c[i]);
        }
    }
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorCode::kParse, path + ": " + e.message());
    }
    return p;
}

Intrinsics intrinsics_from_json(const json& j, const std::string& path) {
    detail::check_keys(j, path, {"fx", "fy", "cx", "cy", "width", "height"});
    Intrinsics k;
    k.width = static_cast<int>(detail::number_or(j, "width", k.width, path));
    k.height = static_cast<int>(detail::number_or(j, "height", k.height, path));
    k.fx = detail::number_or(j, "fx", k.fx, path);
    k.fy = detail::number_or(j, "fy", k.fx, path);
    k.cx = detail::number_or(j, "cx", (k.width - 1) / 2.0, path);
    k.cy = detail::number_or(j, "cy", (k.height - 1) / 2.0, path);
    if (!(k.fx > 0 && k.fy > 0) || k.width < 1 || k.height < 1) fail(ErrorCode::kParse, path + ": invalid intrinsics");
    return k;
}

CameraSpec camera_from_json(const json& j, const std::string& path) {
    detail::check_keys(j, path, {"pose", "eye", "target", "up", "intrinsics"});
    CameraSpec cam;
    if (j.contains("pose")) {
        if (j.contains("eye") || j.contains("target")) fail(ErrorCode::kParse, path + ": give either pose or eye/target");
        cam.pose = detail::transform_from_json(j["pose"], path + ".pose");
    } else {
        if (!j.contains("eye") || !j.contains("target")) fail(ErrorCode::kParse, path + ": needs pose or eye and target");
        const Vec3 eye = detail::vec3_from_json(j["eye"], path + ".eye");
        const Vec3 target = detail::vec3_from_json(j["target"], path + ".target");
        const Vec3 up = j.contains("up") ? detail::vec3_from_json(j["up"], path + ".up") : kUnitZ;
        if ((target - eye).norm() == 0.0) fail(ErrorCode::kParse, path + ": eye and target coincide");
        cam.pose = look_at(eye, target, up);
    }
    if (j.contains("intrinsics")) cam.intrinsics = intrinsics_from_json(j["intrinsics"], path + ".intrinsics");
    return cam;
}

}  // namespace

static NoiseSpec noise_from_json(const json& j, const std::string& path) {
    detail::check_keys(j, path, {"depth_sigma", "dropout_prob", "strobe_period", "strobe_multipliers"});
    NoiseSpec n;
    n.depth_sigma = detail::number_or(j, "depth_sigma", 0.0, path);
    n.dropout_prob = detail::number_or(j, "dropout_prob", 0.0, path);
    const double period = detail::number_or(j, "strobe_period", 0.0, path);
    if (period < 0 || period != std::floor(period)) fail(ErrorCode::kParse, path + ".strobe_period: expected a count");
    n.strobe_period = static_cast<std::size_t>(period);
    if (j.contains("strobe_multipliers")) {
        const json& m = j["strobe_multipliers"];
        if (!m.is_array()) fail(ErrorCode::kParse, path + ".strobe_multipliers: expected an array");
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i].is_number()) {
                fail(ErrorCode::kParse, path + ".strobe_multipliers[" + std::to_string(i) + "]: expected a number");
            }
            n.strobe_multipliers.push_back(m[i].get<double>());
        }
    }
    try {
        n.validate();
    } catch (const Error& e) {
        fail(ErrorCode::kParse, path + ": " + e.message());
    }
    return n;
}

SceneFile parse_scene_file(const std::string& json_text, const std::string& origin) {
    const json j = detail::parse_json(json_text, origin);
    detail::check_keys(j, origin, {"primitives", "camera", "noise"});
    SceneFile f;
    if (!j.contains("primitives") || !j["primitives"].is_array() || j["primitives"].empty()) {
        fail(ErrorCode::kParse, origin + ".primitives: expected a non-empty array");
    }
    for (std::size_t i = 0; i < j["primitives"].size(); ++i) {
        f.scene.primitives.push_back(
            primitive_from_json(j["primitives"][i], origin + ".primitives[" + std::to_string(i) + "]"));
    }
    if (!j.contains("camera")) fail(ErrorCode::kParse, origin + ".camera: missing");
    f.camera = camera_from_json(j["camera"], origin + ".camera");
    if (j.contains("noise")) f.noise = noise_from_json(j["noise"], origin + ".noise");
    return f;
}

SceneFile load_scene_file(const std::filesystem::path& path) { return parse_scene_file(read_text_file(path), path.string()); }

std::string scene_file_to_json(const SceneFile& file) {
    detail::ojson j;
    j["primitives"] = detail::ojson::array();
    for (const Primitive& p : file.scene.primitives) {
        detail::ojson e;
        e["shape"] = to_string(p.shape);
        e["pose"] = detail::transform_to_json(p.pose);
        switch (p.shape) {
            case Shape::kPlane: e["size"] = {p.size.x(), p.size.y()}; break;
            case Shape::kSphere: e["radius"] = p.radius; break;
            case Shape::kCylinder:
                e["radius"] = p.radius;
                e["height"] = p.height;
                break;
            case Shape::kBox: e["size"] = detail::vec3_to_json(p.size); break;
        }
        e["color"] = {p.color[0], p.color[1], p.color[2]};
        j["primitives"].push_back(e);
    }
    const Intrinsics& k = file.camera.intrinsics;
    j["camera"]["pose"] = detail::transform_to_json(file.camera.pose);
    j["camera"]["intrinsics"] = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
    j["noise"]["depth_sigma"] = file.noise.depth_sigma;
    j["noise"]["dropout_prob"] = file.noise.dropout_prob;
    j["noise"]["strobe_period"] = file.noise.strobe_period;
    j["noise"]["strobe_multipliers"] = file.noise.strobe_multipliers;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- built-ins

namespace {

Intrinsics builtin_intrinsics() { return Intrinsics{280.0, 280.0, 159.5, 119.5, 320, 240}; }

CameraSpec builtin_camera(const Vec3& eye, const Vec3& target) {
    return CameraSpec{look_at(eye, target), builtin_intrinsics()};
}

}  // namespace

std::vector<std::string> builtin_scene_names() { return {"plane", "inclined_plane", "sphere", "cylinder", "two_blobs"}; }

SceneFile builtin_scene(const std::string& name) {
    SceneFile f;
    const Vec3 center(0, 0, 0.6);
    if (name == "plane") {
        f.scene.primitives.push_back(Primitive::plane(center, Vec3(0, -1, 0), 1.0, 1.0));
        f.camera = builtin_camera(Vec3(0, -1.2, 0.6), center);
    } else if (name == "inclined_plane") {
        // 45 degrees from +z, yawed 30 degrees so no edge or slope lines up
        // with the voxel grid; aligned planes make voxel counts alias.
        const Rotation yaw = rotation_from_axis_angle(Vec3::UnitZ(), -M_PI / 6.0);
        f.scene.primitives.push_back(Primitive::plane(center, yaw.apply(Vec3(0, -1, 1).normalized()), 1.0, 1.0));
        f.camera = builtin_camera(center + yaw.apply(Vec3(0, -1.0, 0.7)), center);
    } else if (name == "sphere") {
        f.scene.primitives.push_back(Primitive::sphere(center, 0.3));
        f.camera = builtin_camera(Vec3(0, -1.2, 0.6), center);
    } else if (name == "cylinder") {
        f.scene.primitives.push_back(Primitive::cylinder(center, Vec3(1, 0, 0), 0.25, 0.8));
        f.camera = builtin_camera(Vec3(0, -1.2, 0.6), center);
    } else if (name == "two_blobs") {
        Primitive s = Primitive::sphere(Vec3(-0.4, 0, 0.5), 0.2);
        s.color = {200, 60, 60};
        Primitive b = Primitive::box(RigidTransform(rotation_from_axis_angle(Vec3(0, 0, 1), 0.4), Vec3(0.4, 0, 0.5)),
                                     Vec3(0.2, 0.2, 0.2));
        b.color = {60, 60, 200};
        f.scene.primitives = {s, b};
        f.camera = builtin_camera(Vec3(0, -1.4, 0.7), Vec3(0, 0, 0.5));
    } else {
        fail(ErrorCode::kInvalidArgument, "unknown built-in scene '" + name + "'");
    }
    return f;
}

}  // namespace inspath
