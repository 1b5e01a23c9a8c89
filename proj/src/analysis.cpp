#include "frik/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "frik/errors.hpp"

namespace frik {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::size_t cellCount(double lo, double hi, double voxel) {
    return static_cast<std::size_t>(std::llround(std::max(0.0, (hi - lo) / voxel)));
}

WorkspaceMap emptyMap(const PlaneSpec& plane) {
    WorkspaceMap map;
    map.plane = plane;
    const std::size_t ny = plane.cellsY();
    const std::size_t nz = plane.cellsZ();
    map.cells.resize(ny * nz);
    for (std::size_t iz = 0; iz < nz; ++iz) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            auto& c = map.cells[iz * ny + iy];
            c.y_mm = plane.y_min_mm + (static_cast<double>(iy) + 0.5) * plane.voxel_mm;
            c.z_mm = plane.z_min_mm + (static_cast<double>(iz) + 0.5) * plane.voxel_mm;
        }
    }
    return map;
}

}  // namespace

Eigen::VectorXd jointLimitPenalties(const RobotModel& model, const JointVector& q) {
    if (q.size() != model.dof()) {
        throw DimensionMismatch("joint vector has " + std::to_string(q.size()) + " entries, robot has " +
                                std::to_string(model.dof()));
    }
    Eigen::VectorXd s(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        const double lo = model.jointMin()[i];
        const double hi = model.jointMax()[i];
        if (q[i] < lo || q[i] > hi) {
            std::ostringstream msg;
            msg << "joint " << i + 1 << " at " << q[i] << " rad is outside [" << lo << ", " << hi << "]";
            throw OutOfLimits(msg.str());
        }
        s[i] = (hi - q[i]) * (q[i] - lo) / ((hi - lo) * (hi - lo));
    }
    return s;
}

double weightedManipulability(const Jacobian& j, const Eigen::VectorXd& weights) {
    if (weights.size() != j.cols()) throw DimensionMismatch("weight vector does not match jacobian columns");
    const Matrix6 gram = j * weights.asDiagonal() * j.transpose();
    return std::sqrt(std::max(0.0, gram.determinant()));
}

double manipulabilityJL(const RobotModel& model, const JointVector& q) {
    const Eigen::VectorXd s = jointLimitPenalties(model, q);
    return weightedManipulability(model.geometricJacobian(q), s);
}

TravelReport jointTravel(const std::vector<JointVector>& trajectory) {
    if (trajectory.empty()) throw DimensionMismatch("joint travel needs at least one configuration");
    const auto n = trajectory.front().size();
    TravelReport report;
    report.per_joint_deg.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 1; k < trajectory.size(); ++k) {
        if (trajectory[k].size() != n || trajectory[k - 1].size() != n) {
            throw DimensionMismatch("trajectory entry " + std::to_string(k) + " has the wrong length");
        }
        const JointVector step = (trajectory[k] - trajectory[k - 1]) * kRadToDeg;
        for (Eigen::Index i = 0; i < n; ++i) report.per_joint_deg[static_cast<std::size_t>(i)] += std::abs(step[i]);
        report.overall_deg += step.norm();
    }
    return report;
}

TimingSummary summarizeTiming(const std::vector<SolveResult>& results) {
    TimingSummary t;
    t.steps = results.size();
    for (const auto& r : results) t.total_us += r.wall_time_us;
    if (t.steps > 0) t.mean_us = t.total_us / static_cast<double>(t.steps);
    return t;
}

void PlaneSpec::validate() const {
    std::ostringstream msg;
    if (!(voxel_mm > 0.0)) msg << "voxel_mm must be > 0; ";
    if (!(y_max_mm > y_min_mm)) msg << "y extent is empty; ";
    if (!(z_max_mm > z_min_mm)) msg << "z extent is empty; ";
    if (!isRotation(orientation, 1e-6)) msg << "workpiece orientation is not a rotation; ";
    if (!msg.str().empty()) throw ConfigError("invalid sweep plane: " + msg.str());
}

std::size_t PlaneSpec::cellsY() const { return cellCount(y_min_mm, y_max_mm, voxel_mm); }
std::size_t PlaneSpec::cellsZ() const { return cellCount(z_min_mm, z_max_mm, voxel_mm); }

std::size_t WorkspaceMap::reachableCount() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.reachable; }));
}

ManipulabilityStats summarize(const WorkspaceMap& map) {
    ManipulabilityStats st;
    std::vector<double> values;
    for (const auto& c : map.cells) {
        if (c.reachable && c.mean_w_jl) values.push_back(*c.mean_w_jl);
    }
    st.reachable = values.size();
    if (values.empty()) return st;
    st.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - st.mean) * (v - st.mean);
    st.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return st;
}

WorkspaceCell evaluatePlacement(const RobotModel& model, const std::vector<Pose>& base_targets,
                                const JointVector& q0, const TaskProjector& proj, const SolverSettings& settings) {
    WorkspaceCell cell;
    ToolpathSolution sol;
    try {
        sol = solveToolpath(model, base_targets, q0, proj, settings);
    } catch (const RotationNearPi&) {
        cell.failure = "rotation_near_pi";
        return cell;
    }
    if (!sol.ok()) {
        cell.failure = "not_converged@" + std::to_string(*sol.failed_index);
        return cell;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < sol.results.size(); ++k) {
        const JointVector& q = sol.results[k].q;
        for (Eigen::Index i = 0; i < q.size(); ++i) {
            if (q[i] < model.jointMin()[i] || q[i] > model.jointMax()[i]) {
                cell.failure = "joint_limit@" + std::to_string(k) + ":J" + std::to_string(i + 1);
                return cell;
            }
        }
        sum += manipulabilityJL(model, q);
    }
    cell.reachable = true;
    cell.mean_w_jl = sum / static_cast<double>(sol.results.size());
    return cell;
}

WorkspaceComparison workspaceSweep(const RobotModel& model, const Toolpath& path_template, const PlaneSpec& plane,
                                   const JointVector& q0, const SolverSettings& settings, int frik_dof,
                                   unsigned jobs) {
    plane.validate();
    const TaskProjector adhoc_proj(6);
    const TaskProjector frik_proj(frik_dof);
    const Toolpath adhoc_template = assignAdhocOrientation(path_template).path;

    WorkspaceComparison out{emptyMap(plane), emptyMap(plane), 0};
    const std::size_t total = out.adhoc.cells.size();

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            WorkspaceCell& a = out.adhoc.cells[i];
            WorkspaceCell& f = out.frik.cells[i];
            const Pose frame(plane.orientation, Vector3(plane.x_mm, a.y_mm, a.z_mm));
            const WorkspaceCell ra =
                evaluatePlacement(model, adhoc_template.reframed(frame).toBase(), q0, adhoc_proj, settings);
            const WorkspaceCell rf =
                evaluatePlacement(model, path_template.reframed(frame).toBase(), q0, frik_proj, settings);
            a.reachable = ra.reachable;
            a.mean_w_jl = ra.mean_w_jl;
            a.failure = ra.failure;
            f.reachable = rf.reachable;
            f.mean_w_jl = rf.mean_w_jl;
            f.failure = rf.failure;
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(total, 1)));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < total; ++i) {
        if (out.adhoc.cells[i].reachable && !out.frik.cells[i].reachable) ++out.dominance_exceptions;
    }
    return out;
}

}  // namespace frik
