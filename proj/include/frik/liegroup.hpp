#pragma once

#include <Eigen/Dense>

namespace frik {

using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Rotation angles closer than this to pi are rejected by the log maps.
inline constexpr double kNearPiGuard = 1e-6;

/// Below this angle exp/log switch to Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;

/// Twist layout is [linear; angular] everywhere in the project. The
/// geometric Jacobian rows follow the same layout.
struct Twist {
    Vector3 linear = Vector3::Zero();
    Vector3 angular = Vector3::Zero();

    Twist() = default;
    Twist(const Vector3& lin, const Vector3& ang) : linear(lin), angular(ang) {}
    explicit Twist(const Vector6& v) : linear(v.head<3>()), angular(v.tail<3>()) {}

    [[nodiscard]] Vector6 vector() const {
        Vector6 v;
        v << linear, angular;
        return v;
    }
    [[nodiscard]] double norm() const { return vector().norm(); }
};

/// Rigid transform: rotation plus translation (mm).
class Pose {
public:
    Pose() = default;
    Pose(const Matrix3& rotation, const Vector3& translation)
        : rotation_(rotation), translation_(translation) {}

    /// Accepts a homogeneous 4x4; the bottom row is not inspected.
    static Pose fromMatrix(const Matrix4& m) {
        return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
    }
    static Pose identity() { return {}; }
    static Pose translation(const Vector3& t) { return {Matrix3::Identity(), t}; }

    [[nodiscard]] const Matrix3& rotation() const { return rotation_; }
    [[nodiscard]] const Vector3& translation() const { return translation_; }

    [[nodiscard]] Matrix4 matrix() const {
        Matrix4 m = Matrix4::Identity();
        m.topLeftCorner<3, 3>() = rotation_;
        m.topRightCorner<3, 1>() = translation_;
        return m;
    }

    [[nodiscard]] Pose inverse() const {
        Matrix3 rt = rotation_.transpose();
        return {rt, -rt * translation_};
    }

    Pose operator*(const Pose& other) const {
        return {rotation_ * other.rotation_, rotation_ * other.translation_ + translation_};
    }
    Vector3 operator*(const Vector3& point) const { return rotation_ * point + translation_; }

    [[nodiscard]] bool isApprox(const Pose& other, double tol = 1e-9) const {
        return (matrix() - other.matrix()).cwiseAbs().maxCoeff() <= tol;
    }

private:
    Matrix3 rotation_ = Matrix3::Identity();
    Vector3 translation_ = Vector3::Zero();
};

/// True when R is orthonormal with det +1, entrywise within tol.
bool isRotation(const Matrix3& r, double tol = 1e-10);

Matrix3 skew(const Vector3& v);

Matrix3 rotX(double angle);
Matrix3 rotY(double angle);
Matrix3 rotZ(double angle);

/// Rodrigues formula.
Matrix3 so3Exp(const Vector3& omega);

/// Rotation vector of R. Throws RotationNearPi when the angle is within
/// kNearPiGuard of pi.
Vector3 so3Log(const Matrix3& r);

Pose se3Exp(const Twist& xi);

/// Matrix logarithm of a homogeneous transform, packed [linear; angular].
Twist se3Log(const Pose& t);

/// 6x6 block-diagonal diag(R^T, R^T): maps a base-frame twist into the
/// frame whose orientation is `rd`.
Matrix6 twistRotation(const Matrix3& rd);

/// Nearest rotation (Frobenius) to an arbitrary 3x3, via SVD.
Matrix3 orthonormalize(const Matrix3& m);

/// Unit quaternion (x, y, z, w) conversions.
Matrix3 quatToRotation(const Eigen::Vector4d& xyzw);
Eigen::Vector4d rotationToQuat(const Matrix3& r);

}  // namespace frik
