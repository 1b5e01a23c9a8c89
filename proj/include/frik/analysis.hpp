#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frik/robot_model.hpp"
#include "frik/solver.hpp"
#include "frik/toolpath.hpp"

namespace frik {

/// s_i(q_i) = (max - q)(q - min) / (max - min)^2. Zero at the limits and
/// 1/4 at midrange. Throws OutOfLimits outside [min, max].
Eigen::VectorXd jointLimitPenalties(const RobotModel& model, const JointVector& q);

/// sqrt(det(J diag(w) J^T)), clamped at zero for singular Gram matrices.
double weightedManipulability(const Jacobian& j, const Eigen::VectorXd& weights);

/// Joint-limit weighted manipulability w_JL with a mm-based Jacobian.
double manipulabilityJL(const RobotModel& model, const JointVector& q);

struct TimingSummary {
    std::size_t steps = 0;
    double mean_us = 0.0;
    double total_us = 0.0;
};

struct TravelReport {
    std::vector<double> per_joint_deg;
    /// Sum over steps of the Euclidean joint-space step length.
    double overall_deg = 0.0;
    TimingSummary timing;
};

/// Travel over consecutive configurations, in degrees.
TravelReport jointTravel(const std::vector<JointVector>& trajectory);

TimingSummary summarizeTiming(const std::vector<SolveResult>& results);

/// Wall plane of candidate workpiece placements: the plane x = x_mm of the
/// base frame, gridded in y and z. Cell centres sit half a voxel inside
/// the extents.
struct PlaneSpec {
    double x_mm = 0.0;
    double y_min_mm = -2400.0;
    double y_max_mm = 0.0;
    double z_min_mm = 0.0;
    double z_max_mm = 2400.0;
    double voxel_mm = 100.0;
    /// Workpiece orientation relative to the base frame.
    Matrix3 orientation = Matrix3::Identity();

    void validate() const;
    [[nodiscard]] std::size_t cellsY() const;
    [[nodiscard]] std::size_t cellsZ() const;
};

struct WorkspaceCell {
    double y_mm = 0.0;
    double z_mm = 0.0;
    bool reachable = false;
    std::optional<double> mean_w_jl;
    /// Empty when reachable; otherwise e.g. "not_converged@12" or "joint_limit@3:J5" (target 3, joint 5).
    std::string failure;
};

struct WorkspaceMap {
    PlaneSpec plane;
    /// Row-major over (z, y): index = iz * cellsY() + iy.
    std::vector<WorkspaceCell> cells;

    [[nodiscard]] std::size_t reachableCount() const;
};

struct ManipulabilityStats {
    std::size_t reachable = 0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  ///< population standard deviation
};

/// Statistics over the per-voxel mean w_JL of reachable cells.
ManipulabilityStats summarize(const WorkspaceMap& map);

/// Solves one placement; reachable iff every target converges with every
/// solution inside the joint limits.
WorkspaceCell evaluatePlacement(const RobotModel& model, const std::vector<Pose>& base_targets,
                                const JointVector& q0, const TaskProjector& proj, const SolverSettings& settings);

struct WorkspaceComparison {
    WorkspaceMap adhoc;
    WorkspaceMap frik;
    /// Cells reachable ad hoc but not with the functionally redundant task.
    std::size_t dominance_exceptions = 0;
};

/// Re-frames `path_template` at every cell centre and solves it with the
/// ad hoc 6-DOF orientation and with the `frik_dof` task. `jobs` = 0 uses
/// the hardware concurrency.
WorkspaceComparison workspaceSweep(const RobotModel& model, const Toolpath& path_template, const PlaneSpec& plane,
                                   const JointVector& q0, const SolverSettings& settings, int frik_dof = 5,
                                   unsigned jobs = 1);

}  // namespace frik
