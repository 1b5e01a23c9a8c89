#include "frik/robot_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "frik/errors.hpp"

namespace frik {

namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

Pose rz(double theta, double d) {
    return {rotZ(theta), Vector3(0.0, 0.0, d)};
}

Pose rx(double alpha, double a) {
    return {rotX(alpha), Vector3(a, 0.0, 0.0)};
}

}  // namespace

KinematicHessian::KinematicHessian(Eigen::Index rows, Eigen::Index joints)
    : rows_(rows), joints_(joints),
      slices_(static_cast<std::size_t>(joints), Eigen::MatrixXd::Zero(rows, joints)) {}

KinematicHessian KinematicHessian::leftMultiplied(const Eigen::MatrixXd& m) const {
    if (m.cols() != rows_) {
        throw DimensionMismatch("hessian projection: matrix has " + std::to_string(m.cols()) +
                                " columns, hessian has " + std::to_string(rows_) + " rows");
    }
    KinematicHessian out(m.rows(), joints_);
    for (Eigen::Index j = 0; j < joints_; ++j) out.slices_[j].noalias() = m * slices_[j];
    return out;
}

Eigen::MatrixXd hessianContract(const KinematicHessian& h, const JointVector& dq) {
    if (dq.size() != h.joints()) {
        throw DimensionMismatch("hessian contraction: dq has " + std::to_string(dq.size()) +
                                " entries, expected " + std::to_string(h.joints()));
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.joints());
    for (Eigen::Index j = 0; j < h.joints(); ++j) out.noalias() += dq[j] * h.slice(j);
    return out;
}

RobotModel::RobotModel(std::vector<DHRow> dh, JointVector joint_min, JointVector joint_max,
                       Pose tool, DHConvention convention)
    : dh_(std::move(dh)), joint_min_(std::move(joint_min)), joint_max_(std::move(joint_max)),
      tool_(std::move(tool)), convention_(convention) {
    if (dh_.empty()) throw ConfigError("robot model needs at least one DH row");
    const auto n = dof();
    if (joint_min_.size() != n || joint_max_.size() != n) {
        throw DimensionMismatch("joint limit vectors must have " + std::to_string(n) + " entries");
    }
    for (const auto& row : dh_) {
        if (!std::isfinite(row.a) || !std::isfinite(row.alpha) || !std::isfinite(row.d) ||
            !std::isfinite(row.theta_offset)) {
            throw ConfigError("DH parameters must be finite");
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(joint_min_[i] < joint_max_[i])) {
            std::ostringstream msg;
            msg << "joint " << i + 1 << ": min " << joint_min_[i] << " must be below max " << joint_max_[i];
            throw ConfigError(msg.str());
        }
    }
    if (!isRotation(tool_.rotation(), 1e-9)) throw InvalidRotation("tool transform rotation is not orthonormal");
}

void RobotModel::checkSize(const JointVector& q) const {
    if (q.size() != dof()) {
        throw DimensionMismatch("joint vector has " + std::to_string(q.size()) + " entries, robot has " +
                                std::to_string(dof()) + " joints");
    }
}

bool RobotModel::withinLimits(const JointVector& q) const {
    checkSize(q);
    return (q.array() >= joint_min_.array()).all() && (q.array() <= joint_max_.array()).all();
}

Pose RobotModel::linkTransform(Eigen::Index i, double q) const {
    const DHRow& row = dh_[static_cast<std::size_t>(i)];
    const double theta = q + row.theta_offset;
    if (convention_ == DHConvention::Standard) return rz(theta, row.d) * rx(row.alpha, row.a);
    return rx(row.alpha, row.a) * rz(theta, row.d);
}

Pose RobotModel::forwardKinematics(const JointVector& q) const {
    checkSize(q);
    Pose t;
    for (Eigen::Index i = 0; i < dof(); ++i) t = t * linkTransform(i, q[i]);
    return t * tool_;
}

RobotModel::Evaluation RobotModel::evaluate(const JointVector& q) const {
    checkSize(q);
    const auto n = dof();
    Evaluation eval;
    eval.axes.resize(3, n);
    eval.origins.resize(3, n);
    eval.jacobian.resize(6, n);

    Pose t;
    for (Eigen::Index i = 0; i < n; ++i) {
        const DHRow& row = dh_[static_cast<std::size_t>(i)];
        const double theta = q[i] + row.theta_offset;
        if (convention_ == DHConvention::Modified) t = t * rx(row.alpha, row.a);
        eval.axes.col(i) = t.rotation().col(2);
        eval.origins.col(i) = t.translation();
        t = t * rz(theta, row.d);
        if (convention_ == DHConvention::Standard) t = t * rx(row.alpha, row.a);
    }
    eval.tcp = t * tool_;

    const Vector3& pe = eval.tcp.translation();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector3 z = eval.axes.col(i);
        eval.jacobian.col(i).head<3>() = z.cross(pe - eval.origins.col(i));
        eval.jacobian.col(i).tail<3>() = z;
    }
    return eval;
}

KinematicHessian RobotModel::hessianFrom(const Evaluation& eval) {
    const auto n = eval.jacobian.cols();
    KinematicHessian h(6, n);
    // Angular: d z_i / d q_j = z_j x z_i for j < i, zero otherwise.
    // Linear:  d Jv_i / d q_j = z_min(i,j) x Jv_max(i,j) (symmetric in i, j).
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::MatrixXd& s = h.slice(j);
        const Vector3 zj = eval.axes.col(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vector3 zi = eval.axes.col(i);
            if (j < i) {
                s.col(i).head<3>() = zj.cross(Vector3(eval.jacobian.col(i).head<3>()));
                s.col(i).tail<3>() = zj.cross(zi);
            } else {
                s.col(i).head<3>() = zi.cross(Vector3(eval.jacobian.col(j).head<3>()));
                s.col(i).tail<3>().setZero();
            }
        }
    }
    return h;
}

Jacobian RobotModel::geometricJacobian(const JointVector& q) const {
    return evaluate(q).jacobian;
}

KinematicHessian RobotModel::kinematicHessian(const JointVector& q) const {
    return hessianFrom(evaluate(q));
}

RobotModel makeIrb4600(const Pose& tool) {
    const double pi = std::numbers::pi;
    std::vector<DHRow> dh = {
        {175.0, -pi / 2, 329.5, 0.0},
        {900.0, 0.0, 0.0, -pi / 2},
        {174.56, -pi / 2, 0.0, 0.0},
        {0.0, -pi / 2, 960.0, pi},
        {0.0, -pi / 2, 0.0, pi},
        {0.0, 0.0, 135.0, 0.0},
    };
    JointVector lo(6), hi(6);
    lo << deg(-180), deg(-90), deg(-180), deg(-400), deg(-125), deg(-400);
    hi << deg(180), deg(150), deg(75), deg(400), deg(120), deg(400);
    return {std::move(dh), lo, hi, tool, DHConvention::Standard};
}

JointVector irb4600StartConfig() {
    JointVector q(6);
    q << deg(-112), deg(-7), deg(57), deg(-80), deg(-34), deg(9);
    return q;
}

}  // namespace frik
