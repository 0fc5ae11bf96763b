#include "inspath/geom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inspath/error.hpp"

namespace inspath {

namespace {
constexpr double kAxisUnitTolerance = 1e-6;
constexpr double kPoleTolerance = 1e-8;

Eigen::Quaterniond normalized_or_throw(const Eigen::Quaterniond& q) {
    const double n = q.norm();
    if (!std::isfinite(n) || n < 1e-12) fail(ErrorCode::kInvalidArgument, "quaternion must be finite and non-zero");
    return Eigen::Quaterniond(q.coeffs() / n);
}
}  // namespace

bool is_finite(const Vec3& v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }

Rotation::Rotation(double w, double x, double y, double z) : q_(normalized_or_throw(Eigen::Quaterniond(w, x, y, z))) {}

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(normalized_or_throw(q)) {}

Rotation Rotation::from_matrix(const Mat3& m) {
    if (!(m.determinant() > 0.0)) fail(ErrorCode::kInvalidArgument, "rotation matrix must have positive determinant");
    return Rotation(Eigen::Quaterniond(m));
}

std::pair<Vec3, double> Rotation::axis_angle() const {
    // Work on the w >= 0 hemisphere so the angle lands in [0, pi].
    Eigen::Quaterniond q = q_;
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    const Vec3 v = q.vec();
    const double s = v.norm();
    if (s < 1e-15) return {kUnitZ, 0.0};
    const double angle = 2.0 * std::atan2(s, q.w());
    return {v / s, angle};
}

RigidTransform RigidTransform::inverse() const {
    const Rotation inv = rotation_.inverse();
    return RigidTransform(inv, -inv.apply(translation_));
}

Eigen::Matrix4d RigidTransform::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_.matrix();
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    return RigidTransform(a.rotation() * b.rotation(), a.rotation().apply(b.translation()) + a.translation());
}

Rotation rotation_from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (!is_finite(axis) || std::abs(n - 1.0) > kAxisUnitTolerance) {
        fail(ErrorCode::kInvalidArgument, "rotation axis must be a unit vector (norm " + std::to_string(n) + ")");
    }
    if (!std::isfinite(angle)) fail(ErrorCode::kInvalidArgument, "rotation angle must be finite");
    const double half = 0.5 * angle;
    const double s = std::sin(half);
    return Rotation(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
}

Rotation align_z_to_normal(const Vec3& normal) {
    if (!is_finite(normal) || normal.norm() < 1e-12) fail(ErrorCode::kInvalidArgument, "normal must be finite and non-zero");
    const Vec3 n = normal.normalized();
    const Vec3 cross = n.cross(kUnitZ);
    const double cross_norm = cross.norm();
    const double dot = n.dot(kUnitZ);
    if (cross_norm < kPoleTolerance) {
        if (dot > 0.0) return Rotation::identity();
        return rotation_from_axis_angle(Vec3::UnitX(), M_PI);
    }
    const double theta = -std::acos(std::clamp(dot, -1.0, 1.0));
    return rotation_from_axis_angle(cross / cross_norm, theta);
}

}  // namespace inspath
