#include "frik/liegroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frik/errors.hpp"

namespace frik {

bool isRotation(const Matrix3& r, double tol) {
    if (!r.allFinite()) return false;
    const double orth = (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
    return orth <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

Matrix3 skew(const Vector3& v) {
    Matrix3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

Matrix3 rotX(double angle) {
    return Eigen::AngleAxisd(angle, Vector3::UnitX()).toRotationMatrix();
}
Matrix3 rotY(double angle) {
    return Eigen::AngleAxisd(angle, Vector3::UnitY()).toRotationMatrix();
}
Matrix3 rotZ(double angle) {
    return Eigen::AngleAxisd(angle, Vector3::UnitZ()).toRotationMatrix();
}

Matrix3 so3Exp(const Vector3& omega) {
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    double a;  // sin(t)/t
    double b;  // (1 - cos(t))/t^2
    if (theta < kSmallAngle) {
        a = 1.0 - theta2 / 6.0;
        b = 0.5 - theta2 / 24.0;
    } else {
        const double h = std::sin(0.5 * theta) / theta;
        a = std::sin(theta) / theta;
        b = 2.0 * h * h;
    }
    const Matrix3 w = skew(omega);
    return Matrix3::Identity() + a * w + b * w * w;
}

Vector3 so3Log(const Matrix3& r) {
    const Vector3 w(0.5 * (r(2, 1) - r(1, 2)), 0.5 * (r(0, 2) - r(2, 0)), 0.5 * (r(1, 0) - r(0, 1)));
    const double s = w.norm();
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    const double theta = std::atan2(s, c);

    if (theta > std::numbers::pi - kNearPiGuard) {
        std::ostringstream msg;
        msg << "rotation angle " << theta << " rad is within " << kNearPiGuard << " of pi";
        throw RotationNearPi(msg.str());
    }
    if (theta < kSmallAngle) {
        return (1.0 + theta * theta / 6.0) * w;
    }
    if (c > 0.0) {
        return (theta / s) * w;
    }
    // Obtuse angles: recover the axis from the symmetric part, where the
    // antisymmetric part has lost relative precision.
    const Matrix3 aat = (0.5 * (r + r.transpose()) - c * Matrix3::Identity()) / (1.0 - c);
    Eigen::Index col = 0;
    aat.diagonal().maxCoeff(&col);
    Vector3 axis = aat.col(col) / std::sqrt(aat(col, col));
    if (axis.dot(w) < 0.0) axis = -axis;
    return theta * axis.normalized();
}

namespace {
// Below this angle the se(3) coefficients use their Taylor series; the
// closed forms lose digits to cancellation.
constexpr double kSeriesAngle = 1e-2;
}  // namespace

Pose se3Exp(const Twist& xi) {
    const Vector3& omega = xi.angular;
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    double b;  // (1 - cos t)/t^2
    double c;  // (t - sin t)/t^3
    if (theta < kSeriesAngle) {
        b = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0 * (1.0 - theta2 / 56.0));
        c = 1.0 / 6.0 - theta2 / 120.0 * (1.0 - theta2 / 42.0 * (1.0 - theta2 / 72.0));
    } else {
        const double h = std::sin(0.5 * theta) / theta;
        b = 2.0 * h * h;
        c = (theta - std::sin(theta)) / (theta2 * theta);
    }
    const Matrix3 w = skew(omega);
    const Matrix3 v = Matrix3::Identity() + b * w + c * w * w;
    return {so3Exp(omega), v * xi.linear};
}

Twist se3Log(const Pose& t) {
    const Vector3 omega = so3Log(t.rotation());
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    double k;  // coefficient of W^2 in V^-1
    if (theta < kSeriesAngle) {
        k = 1.0 / 12.0 + theta2 / 720.0 + theta2 * theta2 / 30240.0;
    } else {
        // theta sin(theta) / (2 (1 - cos theta)) = (theta / 2) cot(theta / 2)
        k = (1.0 - 0.5 * theta / std::tan(0.5 * theta)) / theta2;
    }
    const Matrix3 w = skew(omega);
    const Matrix3 vinv = Matrix3::Identity() - 0.5 * w + k * w * w;
    return {vinv * t.translation(), omega};
}

Matrix6 twistRotation(const Matrix3& rd) {
    Matrix6 m = Matrix6::Zero();
    m.topLeftCorner<3, 3>() = rd.transpose();
    m.bottomRightCorner<3, 3>() = rd.transpose();
    return m;
}

Matrix3 orthonormalize(const Matrix3& m) {
    Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix3 d = Matrix3::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    return svd.matrixU() * d * svd.matrixV().transpose();
}

Matrix3 quatToRotation(const Eigen::Vector4d& xyzw) {
    Eigen::Quaterniond q(xyzw[3], xyzw[0], xyzw[1], xyzw[2]);
    return q.normalized().toRotationMatrix();
}

Eigen::Vector4d rotationToQuat(const Matrix3& r) {
    Eigen::Quaterniond q(r);
    q.normalize();
    if (q.w() < 0.0) q.coeffs() *= -1.0;
    return {q.x(), q.y(), q.z(), q.w()};
}

}  // namespace frik
