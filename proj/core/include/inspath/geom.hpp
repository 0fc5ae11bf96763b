#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace inspath {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline const Vec3 kUnitZ{0.0, 0.0, 1.0};

/// Unit-quaternion rotation. The quaternion is renormalized on construction;
/// matrices are derived on demand.
class Rotation {
public:
    Rotation() : q_(Eigen::Quaterniond::Identity()) {}
    /// Components in (w, x, y, z) order. Throws invalid-argument on a zero or
    /// non-finite quaternion.
    Rotation(double w, double x, double y, double z);
    explicit Rotation(const Eigen::Quaterniond& q);

    static Rotation identity() { return Rotation(); }
    /// Nearest rotation to an orthonormal matrix (det must be positive).
    static Rotation from_matrix(const Mat3& m);

    const Eigen::Quaterniond& quaternion() const { return q_; }
    double w() const { return q_.w(); }
    double x() const { return q_.x(); }
    double y() const { return q_.y(); }
    double z() const { return q_.z(); }

    Mat3 matrix() const { return q_.toRotationMatrix(); }
    Vec3 apply(const Vec3& v) const { return q_ * v; }
    Rotation inverse() const { return Rotation(q_.conjugate()); }

    /// Angle in [0, pi] and unit axis. Identity yields angle 0 about +z.
    std::pair<Vec3, double> axis_angle() const;

    friend Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(a.q_ * b.q_); }

private:
    Eigen::Quaterniond q_;
};

class RigidTransform {
public:
    RigidTransform() : translation_(Vec3::Zero()) {}
    RigidTransform(const Rotation& rotation, const Vec3& translation)
        : rotation_(rotation), translation_(translation) {}

    static RigidTransform identity() { return RigidTransform(); }
    static RigidTransform from_translation(const Vec3& t) { return RigidTransform(Rotation(), t); }
    static RigidTransform from_rotation(const Rotation& r) { return RigidTransform(r, Vec3::Zero()); }

    const Rotation& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }

    Vec3 apply(const Vec3& p) const { return rotation_.apply(p) + translation_; }
    Vec3 apply_direction(const Vec3& d) const { return rotation_.apply(d); }
    RigidTransform inverse() const;
    Eigen::Matrix4d matrix() const;

private:
    Rotation rotation_;
    Vec3 translation_;
};

/// (a ∘ b)(p) = a(b(p)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) { return compose(a, b); }

/// Right-handed rotation by `angle` radians about a unit `axis`.
/// Throws invalid-argument when |axis| deviates from 1 by more than 1e-6.
Rotation rotation_from_axis_angle(const Vec3& axis, double angle);

/// Rotation R with R * (0,0,1) = normal, built from the axis normal x z and
/// the angle -acos(normal . z). At the poles (|normal x z| < 1e-8) the result
/// is the identity for +z and a half turn about +x for -z.
Rotation align_z_to_normal(const Vec3& normal);

bool is_finite(const Vec3& v);

}  // namespace inspath
