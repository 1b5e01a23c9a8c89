#include "frik/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "frik/errors.hpp"

namespace frik {

TaskProjector::TaskProjector(int dof) : dof_(dof) {
    if (dof != 3 && dof != 5 && dof != 6) {
        throw ConfigError("task dof must be 3, 5 or 6, got " + std::to_string(dof));
    }
}

Eigen::MatrixXd TaskProjector::matrix() const {
    return Eigen::MatrixXd::Identity(6, 6).topRows(dof_);
}

void SolverSettings::validate() const {
    std::ostringstream msg;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) msg << "lambda must be > 0; ";
    if (!(e_max > 0.0) || !std::isfinite(e_max)) msg << "e_max must be > 0; ";
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) msg << "epsilon must be > 0; ";
    if (max_iterations < 1) msg << "max_iterations must be >= 1; ";
    if (!(position_scale > 0.0) || !std::isfinite(position_scale)) msg << "position_scale must be > 0; ";
    if (!msg.str().empty()) throw ConfigError("invalid solver settings: " + msg.str());
}

Twist errorTwist(const Pose& current, const Pose& target, ErrorModel model) {
    if (model == ErrorModel::Decoupled) {
        return {target.translation() - current.translation(),
                so3Log(target.rotation() * current.rotation().transpose())};
    }
    // Spatial twist of T_d T_e^-1 describes the motion of the point at the
    // base origin; shift it to the TCP so it matches the Jacobian rows.
    Twist xi = se3Log(target * current.inverse());
    xi.linear += xi.angular.cross(current.translation());
    return xi;
}

Eigen::VectorXd saturate(const Eigen::VectorXd& e, double e_max) {
    const double n = e.norm();
    if (n <= e_max) return e;
    return (e_max / n) * e;
}

Twist saturate(const Twist& e, double e_max) {
    return Twist(Vector6(saturate(Eigen::VectorXd(e.vector()), e_max)));
}

Pose resolveFreeAxis(const Pose& target, const Matrix3& current_rotation, const TaskProjector& proj) {
    if (proj.dof() == 6) return target;
    if (proj.dof() == 3) return {current_rotation, target.translation()};

    const Vector3 ze = current_rotation.col(2);
    const Vector3 zd = target.rotation().col(2);
    const Vector3 axis = ze.cross(zd);
    const double angle = std::atan2(axis.norm(), ze.dot(zd));
    if (angle > std::numbers::pi - kNearPiGuard) {
        throw RotationNearPi("tool axis is antiparallel to the target approach direction");
    }
    Matrix3 swing = Matrix3::Identity();
    if (axis.norm() > 0.0) swing = so3Exp(angle * axis.normalized());
    return {swing * current_rotation, target.translation()};
}

Eigen::MatrixXd taskMap(const Matrix3& rd, const TaskProjector& proj, double position_scale) {
    Matrix6 m = twistRotation(rd);
    m.topRows<3>() /= position_scale;
    return m.topRows(proj.dof());
}

Decomposition decompose(const Jacobian& j, const Twist& dx, const KinematicHessian& h, const Matrix3& rd,
                        const TaskProjector& proj) {
    if (h.rows() != 6 || h.joints() != j.cols()) {
        throw DimensionMismatch("hessian is " + std::to_string(h.rows()) + "x" + std::to_string(h.joints()) +
                                "xn, jacobian has " + std::to_string(j.cols()) + " columns");
    }
    const Eigen::MatrixXd m = taskMap(rd, proj);
    return {m * j, m * dx.vector(), h.leftMultiplied(m)};
}

JointVector dampedStep(const Eigen::MatrixXd& jhat, const Eigen::VectorXd& dxhat, double lambda) {
    if (jhat.rows() != dxhat.size()) {
        throw DimensionMismatch("damped step: jacobian has " + std::to_string(jhat.rows()) + " rows, twist has " +
                                std::to_string(dxhat.size()));
    }
    Eigen::MatrixXd gram = jhat * jhat.transpose();
    gram.diagonal().array() += lambda * lambda;
    return jhat.transpose() * gram.llt().solve(dxhat);
}

JointVector halleyStep(const Jacobian& j, const KinematicHessian& h, const Eigen::VectorXd& dxhat,
                       const Eigen::MatrixXd& task_map, double lambda) {
    if (task_map.cols() != 6 || task_map.rows() != dxhat.size()) {
        throw DimensionMismatch("halley step: task map and twist sizes disagree");
    }
    const JointVector dq_newton = dampedStep(task_map * j, dxhat, lambda);
    const Eigen::MatrixXd augmented = j + 0.5 * hessianContract(h, dq_newton);
    return dampedStep(task_map * augmented, dxhat, lambda);
}

JointVector halleyStep(const Jacobian& j, const KinematicHessian& h, const Eigen::VectorXd& dxhat,
                       const TaskProjector& proj, const Matrix3& rd, double lambda) {
    return halleyStep(j, h, dxhat, taskMap(rd, proj), lambda);
}

SolveResult solve(const RobotModel& model, const Pose& target, const JointVector& q0, const TaskProjector& proj,
                  const SolverSettings& settings, const IterationObserver& observer) {
    const auto start = std::chrono::steady_clock::now();
    if (q0.size() != model.dof()) {
        throw DimensionMismatch("initial configuration has " + std::to_string(q0.size()) + " entries, robot has " +
                                std::to_string(model.dof()) + " joints");
    }
    const bool align = settings.align_free_axis && proj.freesToolAxis();

    SolveResult result;
    JointVector q = q0;
    double best_norm = std::numeric_limits<double>::infinity();

    for (int it = 0;; ++it) {
        const RobotModel::Evaluation eval = model.evaluate(q);
        const Pose goal = align ? resolveFreeAxis(target, eval.tcp.rotation(), proj) : target;
        const Eigen::MatrixXd m = taskMap(goal.rotation(), proj, settings.position_scale);
        const Eigen::VectorXd dxhat = m * errorTwist(eval.tcp, goal, settings.error_model).vector();
        const double norm = dxhat.norm();

        if (norm < best_norm) {
            best_norm = norm;
            result.q = q;
            result.residual = dxhat;
        }
        if (norm < settings.epsilon) {
            result.converged = true;
            result.iterations = it;
            break;
        }
        if (it == settings.max_iterations) {
            result.iterations = it;
            break;
        }

        const Eigen::VectorXd step_twist = saturate(dxhat, settings.e_max);
        JointVector dq;
        if (settings.method == Method::DampedNewton) {
            dq = dampedStep(m * eval.jacobian, step_twist, settings.lambda);
        } else {
            dq = halleyStep(eval.jacobian, RobotModel::hessianFrom(eval), step_twist, m, settings.lambda);
        }
        if (observer) observer({it, norm, norm > settings.e_max, step_twist, dq});
        q += dq;
    }

    result.wall_time_us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ToolpathSolution solveToolpath(const RobotModel& model, const std::vector<Pose>& targets, const JointVector& q0,
                               const TaskProjector& proj, const SolverSettings& settings) {
    ToolpathSolution out;
    out.results.reserve(targets.size());
    JointVector q = q0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        out.results.push_back(solve(model, targets[k], q, proj, settings));
        if (!out.results.back().converged) {
            out.failed_index = k;
            break;
        }
        q = out.results.back().q;
    }
    return out;
}

std::string toString(Method m) { return m == Method::DampedNewton ? "newton" : "halley"; }

Method methodFromString(const std::string& s) {
    if (s == "newton") return Method::DampedNewton;
    if (s == "halley") return Method::DampedHalley;
    throw ConfigError("unknown solver method '" + s + "' (expected newton or halley)");
}

std::string toString(ErrorModel m) { return m == ErrorModel::Se3 ? "se3" : "decoupled"; }

ErrorModel errorModelFromString(const std::string& s) {
    if (s == "se3") return ErrorModel::Se3;
    if (s == "decoupled") return ErrorModel::Decoupled;
    throw ConfigError("unknown error model '" + s + "' (expected se3 or decoupled)");
}

}  // namespace frik
