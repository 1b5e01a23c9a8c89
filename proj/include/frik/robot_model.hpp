#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frik/liegroup.hpp"

namespace frik {

using JointVector = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// One Denavit-Hartenberg row. Lengths in mm, angles in rad.
struct DHRow {
    double a = 0.0;
    double alpha = 0.0;
    double d = 0.0;
    double theta_offset = 0.0;
};

enum class DHConvention { Standard, Modified };

/// Derivative of the geometric Jacobian with respect to the joints.
/// slice(j) is the rows x n matrix dJ/dq_j, so H(:, i, j) = slice(j).col(i).
/// Rows are 6 for a full Hessian and r after task projection.
class KinematicHessian {
public:
    KinematicHessian() = default;
    KinematicHessian(Eigen::Index rows, Eigen::Index joints);

    [[nodiscard]] Eigen::Index rows() const { return rows_; }
    [[nodiscard]] Eigen::Index joints() const { return joints_; }

    [[nodiscard]] const Eigen::MatrixXd& slice(Eigen::Index j) const { return slices_[j]; }
    Eigen::MatrixXd& slice(Eigen::Index j) { return slices_[j]; }

    /// H(:, i, j)
    [[nodiscard]] Eigen::VectorXd entry(Eigen::Index i, Eigen::Index j) const {
        return slices_[j].col(i);
    }

    /// Left-multiplies every slice by `m` (m must have rows() columns).
    [[nodiscard]] KinematicHessian leftMultiplied(const Eigen::MatrixXd& m) const;

private:
    Eigen::Index rows_ = 0;
    Eigen::Index joints_ = 0;
    std::vector<Eigen::MatrixXd> slices_;
};

/// result(:, i) = sum_j H(:, i, j) * dq(j). Throws DimensionMismatch.
Eigen::MatrixXd hessianContract(const KinematicHessian& h, const JointVector& dq);

/// All-revolute serial chain described by DH rows, joint limits and a
/// flange-to-TCP tool transform. Immutable after construction.
class RobotModel {
public:
    RobotModel(std::vector<DHRow> dh, JointVector joint_min, JointVector joint_max,
               Pose tool = Pose::identity(), DHConvention convention = DHConvention::Standard);

    [[nodiscard]] Eigen::Index dof() const { return static_cast<Eigen::Index>(dh_.size()); }
    [[nodiscard]] const std::vector<DHRow>& dh() const { return dh_; }
    [[nodiscard]] const JointVector& jointMin() const { return joint_min_; }
    [[nodiscard]] const JointVector& jointMax() const { return joint_max_; }
    [[nodiscard]] const Pose& tool() const { return tool_; }
    [[nodiscard]] DHConvention convention() const { return convention_; }

    [[nodiscard]] bool withinLimits(const JointVector& q) const;

    /// Transform contributed by row i at joint value q (offset applied).
    [[nodiscard]] Pose linkTransform(Eigen::Index i, double q) const;

    /// Base to TCP.
    [[nodiscard]] Pose forwardKinematics(const JointVector& q) const;

    /// Geometric Jacobian about the TCP point, base-frame, [linear; angular] rows.
    [[nodiscard]] Jacobian geometricJacobian(const JointVector& q) const;

    [[nodiscard]] KinematicHessian kinematicHessian(const JointVector& q) const;

    /// Everything an IK iteration needs from one pass down the chain.
    struct Evaluation {
        Pose tcp;
        Eigen::Matrix<double, 3, Eigen::Dynamic> axes;     // joint axes, base frame
        Eigen::Matrix<double, 3, Eigen::Dynamic> origins;  // points on the axes
        Jacobian jacobian;
    };
    [[nodiscard]] Evaluation evaluate(const JointVector& q) const;

    /// Analytic Hessian from an existing evaluation.
    [[nodiscard]] static KinematicHessian hessianFrom(const Evaluation& eval);

private:
    void checkSize(const JointVector& q) const;

    std::vector<DHRow> dh_;
    JointVector joint_min_;
    JointVector joint_max_;
    Pose tool_;
    DHConvention convention_;
};

/// DH geometry of the ABB IRB4600 with datasheet joint limits.
RobotModel makeIrb4600(const Pose& tool = Pose::identity());

/// The starting configuration used in the cone experiments, in rad.
JointVector irb4600StartConfig();

}  // namespace frik
