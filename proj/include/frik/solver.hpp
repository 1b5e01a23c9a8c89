#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frik/liegroup.hpp"
#include "frik/robot_model.hpp"

namespace frik {

enum class Method { DampedNewton, DampedHalley };

/// How the pose error twist is formed.
enum class ErrorModel {
    Se3,        ///< log(T_d T_e^-1), linear part referred to the TCP point
    Decoupled,  ///< (p_d - p_e, log(R_d R_e^T))
};

/// Row selection T_t: the first r rows of the 6x6 identity.
/// r = 6 keeps everything, r = 5 drops angular z, r = 3 keeps position only.
class TaskProjector {
public:
    explicit TaskProjector(int dof);

    [[nodiscard]] int dof() const { return dof_; }
    /// r x 6 selection matrix.
    [[nodiscard]] Eigen::MatrixXd matrix() const;
    /// True when rotation about the target z-axis is unconstrained.
    [[nodiscard]] bool freesToolAxis() const { return dof_ < 6; }

private:
    int dof_;
};

struct SolverSettings {
    double lambda = 0.1;
    double e_max = 50.0;
    double epsilon = 1e-6;
    int max_iterations = 100;
    Method method = Method::DampedHalley;
    /// mm per unit of the mixed twist norm; linear rows are divided by it.
    double position_scale = 1.0;
    ErrorModel error_model = ErrorModel::Se3;
    /// For r < 6, resolve the free rotation about the target z-axis to the
    /// one nearest the current TCP orientation before forming the error.
    bool align_free_axis = true;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// Error twist that moves `current` toward `target` (descent direction),
/// base-frame orientation, linear part at the TCP point.
Twist errorTwist(const Pose& current, const Pose& target, ErrorModel model = ErrorModel::Se3);

Twist saturate(const Twist& e, double e_max);
Eigen::VectorXd saturate(const Eigen::VectorXd& e, double e_max);

/// Target whose rotation about its own z-axis is chosen closest to
/// `current_rotation`; position and z-axis are those of `target`.
/// For r = 3 the whole rotation is taken from `current_rotation`.
Pose resolveFreeAxis(const Pose& target, const Matrix3& current_rotation, const TaskProjector& proj);

/// The r x 6 map T_t * R~_t * S, S dividing linear rows by position_scale.
Eigen::MatrixXd taskMap(const Matrix3& rd, const TaskProjector& proj, double position_scale = 1.0);

struct Decomposition {
    Eigen::MatrixXd jacobian;  ///< r x n
    Eigen::VectorXd twist;     ///< r
    KinematicHessian hessian;  ///< r x n x n
};

Decomposition decompose(const Jacobian& j, const Twist& dx, const KinematicHessian& h, const Matrix3& rd,
                        const TaskProjector& proj);

/// dq = J^T (J J^T + lambda^2 I)^-1 dx, via Cholesky of the r x r system.
JointVector dampedStep(const Eigen::MatrixXd& jhat, const Eigen::VectorXd& dxhat, double lambda);

/// Damped Newton step followed by the damped Halley step on the augmented
/// matrix A = J + 1/2 [H dq_newton], both in the projected task space.
JointVector halleyStep(const Jacobian& j, const KinematicHessian& h, const Eigen::VectorXd& dxhat,
                       const TaskProjector& proj, const Matrix3& rd, double lambda);

/// Same, with a prebuilt task map (see taskMap).
JointVector halleyStep(const Jacobian& j, const KinematicHessian& h, const Eigen::VectorXd& dxhat,
                       const Eigen::MatrixXd& task_map, double lambda);

struct SolveResult {
    JointVector q;
    bool converged = false;
    int iterations = 0;
    Eigen::VectorXd residual;  ///< final projected error (before saturation)
    double wall_time_us = 0.0;
};

/// Per-iteration trace for diagnostics and invariant checks.
struct IterationRecord {
    int iteration = 0;
    double residual_norm = 0.0;  ///< |dx^| before saturation
    bool saturated = false;
    Eigen::VectorXd step_twist;  ///< dx^ actually used for the step
    JointVector dq;
};
using IterationObserver = std::function<void(const IterationRecord&)>;

/// One target. NotConverged is reported through `converged = false`; the
/// returned q is the lowest-residual iterate seen.
SolveResult solve(const RobotModel& model, const Pose& target, const JointVector& q0,
                  const TaskProjector& proj, const SolverSettings& settings,
                  const IterationObserver& observer = {});

struct ToolpathSolution {
    std::vector<SolveResult> results;
    /// Index of the first target that failed to converge; solving stops there.
    std::optional<std::size_t> failed_index;

    [[nodiscard]] bool ok() const { return !failed_index.has_value(); }
};

/// Sequential warm-started solve over base-frame targets.
ToolpathSolution solveToolpath(const RobotModel& model, const std::vector<Pose>& targets,
                               const JointVector& q0, const TaskProjector& proj,
                               const SolverSettings& settings);

std::string toString(Method m);
Method methodFromString(const std::string& s);
std::string toString(ErrorModel m);
ErrorModel errorModelFromString(const std::string& s);

}  // namespace frik
