#include "frik/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "frik/errors.hpp"

namespace frik {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct ModeRun {
    std::string name;
    ToolpathSolution solution;
    TravelReport travel;
};

std::string num(double v, int precision = 9) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

double pctChange(double from, double to) {
    return from == 0.0 ? 0.0 : 100.0 * (to - from) / from;
}

std::ofstream openOutput(const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + file.string() + "'");
    return out;
}

void writeAuditHeader(std::ostream& out, const RunConfig& config) {
    out << "# config: " << runConfigToJson(config).dump() << '\n';
}

Toolpath loadSourcePath(const RunConfig& config) {
    if (config.cone) return generateConeSpiral(*config.cone, config.workpiece);
    return loadToolpath(*config.toolpath_file);
}

RobotModel loadCheckedRobot(const RunConfig& config) {
    RobotModel model = loadRobot(config.robot_file);
    if (config.q0.size() != model.dof()) {
        throw ConfigError("q0 has " + std::to_string(config.q0.size()) + " entries but the robot has " +
                          std::to_string(model.dof()) + " joints");
    }
    return model;
}

ModeRun runMode(const RobotModel& model, const Toolpath& path, const RunConfig& config, RunMode mode) {
    ModeRun run;
    if (mode == RunMode::Adhoc) {
        run.name = "adhoc";
        run.solution = solveToolpath(model, assignAdhocOrientation(path).path.toBase(), config.q0, TaskProjector(6),
                                     config.solver);
    } else {
        run.name = "frik";
        run.solution = solveToolpath(model, path.toBase(), config.q0, TaskProjector(config.task_dof), config.solver);
    }
    std::vector<JointVector> traj;
    traj.reserve(run.solution.results.size());
    for (const auto& r : run.solution.results) traj.push_back(r.q);
    run.travel = jointTravel(traj);
    run.travel.timing = summarizeTiming(run.solution.results);
    return run;
}

void writeTrajectory(const fs::path& file, const ModeRun& run, const RunConfig& config, Eigen::Index dof) {
    std::ofstream out = openOutput(file);
    writeAuditHeader(out, config);
    out << "k";
    for (Eigen::Index i = 0; i < dof; ++i) out << ",q" << i + 1 << "_deg";
    out << ",iterations,residual,us\n";
    for (std::size_t k = 0; k < run.solution.results.size(); ++k) {
        const SolveResult& r = run.solution.results[k];
        out << k;
        for (Eigen::Index i = 0; i < dof; ++i) out << ',' << num(r.q[i] * kRadToDeg);
        out << ',' << r.iterations << ',' << std::scientific << std::setprecision(6) << r.residual.norm()
            << std::defaultfloat << ',' << (config.no_timing ? "0" : num(r.wall_time_us, 3)) << '\n';
    }
}

void writeTravel(const fs::path& file, const std::vector<ModeRun>& runs, const RunConfig& config) {
    std::ofstream out = openOutput(file);
    writeAuditHeader(out, config);
    const bool both = runs.size() == 2;
    out << "joint";
    for (const auto& r : runs) out << ",travel_" << r.name << "_deg";
    if (both) out << ",pct_change";
    out << '\n';
    const std::size_t n = runs.front().travel.per_joint_deg.size();
    for (std::size_t i = 0; i <= n; ++i) {
        out << (i < n ? "J" + std::to_string(i + 1) : std::string("overall"));
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(i < n ? r.travel.per_joint_deg[i] : r.travel.overall_deg);
        for (double x : v) out << ',' << num(x, 6);
        if (both) out << ',' << num(pctChange(v[0], v[1]), 3);
        out << '\n';
    }
}

json runSummary(const ModeRun& run, const RunConfig& config) {
    json j;
    j["targets"] = run.solution.results.size();
    j["converged"] = run.solution.ok();
    j["failed_index"] = run.solution.failed_index ? json(*run.solution.failed_index) : json(nullptr);
    j["travel_deg"] = {{"per_joint", run.travel.per_joint_deg}, {"overall", run.travel.overall_deg}};
    if (!config.no_timing) {
        j["timing_us"] = {{"mean", run.travel.timing.mean_us}, {"total", run.travel.timing.total_us}};
    }
    return j;
}

template <typename F>
int guarded(std::ostream& log, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

json statsJson(const ManipulabilityStats& s) {
    return {{"reachable_voxels", s.reachable}, {"max_w_jl", s.max}, {"mean_w_jl", s.mean}, {"std_w_jl", s.stddev}};
}

}  // namespace

int cmdSolve(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        config.validate();
        const RobotModel model = loadCheckedRobot(config);
        const Toolpath path = loadSourcePath(config);
        fs::create_directories(config.out_dir);
        const fs::path out_dir(config.out_dir);

        std::vector<ModeRun> runs;
        if (config.mode != RunMode::Frik) runs.push_back(runMode(model, path, config, RunMode::Adhoc));
        if (config.mode != RunMode::Adhoc) runs.push_back(runMode(model, path, config, RunMode::Frik));

        json summary;
        summary["config"] = runConfigToJson(config);
        summary["units"] = {{"angles", "deg"}, {"time", "us"}};
        bool all_ok = true;
        for (const auto& run : runs) {
            writeTrajectory(out_dir / ("trajectory_" + run.name + ".csv"), run, config, model.dof());
            summary[run.name] = runSummary(run, config);
            all_ok = all_ok && run.solution.ok();
            log << run.name << ": " << run.solution.results.size() << "/" << path.size() << " targets, overall travel "
                << num(run.travel.overall_deg, 3) << " deg";
            if (!config.no_timing) log << ", mean " << num(run.travel.timing.mean_us, 1) << " us/target";
            if (!run.solution.ok()) log << ", NOT CONVERGED at target " << *run.solution.failed_index;
            log << '\n';
        }
        if (runs.size() == 2) {
            summary["overall_travel_pct_change"] = pctChange(runs[0].travel.overall_deg, runs[1].travel.overall_deg);
            log << "overall travel change (adhoc -> frik): " << num(summary["overall_travel_pct_change"].get<double>(), 2)
                << " %\n";
        }
        writeTravel(out_dir / "travel.csv", runs, config);
        std::ofstream(out_dir / "solve_summary.json") << summary.dump(2) << '\n';
        return all_ok ? kExitOk : kExitNotConverged;
    });
}

int cmdCompare(const RunConfig& config, std::ostream& log) {
    RunConfig both = config;
    both.mode = RunMode::Both;
    return cmdSolve(both, log);
}

int cmdGenerate(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        if (!config.cone) throw ConfigError("generate needs a cone block");
        config.cone->validate();
        const Toolpath path = generateConeSpiral(*config.cone, config.workpiece);
        fs::create_directories(config.out_dir);
        const fs::path file = fs::path(config.out_dir) / "toolpath.json";
        saveToolpath(path, file);
        log << path.size() << " targets written to " << file.string() << '\n';
        return kExitOk;
    });
}

int cmdWorkspace(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        config.validate();
        const RobotModel model = loadCheckedRobot(config);
        const Toolpath path = loadSourcePath(config);
        fs::create_directories(config.out_dir);
        const fs::path out_dir(config.out_dir);

        const auto start = std::chrono::steady_clock::now();
        const WorkspaceComparison ws =
            workspaceSweep(model, path, config.sweep, config.q0, config.solver, config.task_dof, config.jobs);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        {
            std::ofstream out = openOutput(out_dir / "workspace.csv");
            writeAuditHeader(out, config);
            out << "y_mm,z_mm,reachable_adhoc,w_adhoc,reachable_frik,w_frik\n";
            for (std::size_t i = 0; i < ws.adhoc.cells.size(); ++i) {
                const auto& a = ws.adhoc.cells[i];
                const auto& f = ws.frik.cells[i];
                out << num(a.y_mm, 1) << ',' << num(a.z_mm, 1) << ',' << (a.reachable ? 1 : 0) << ','
                    << (a.mean_w_jl ? num(*a.mean_w_jl, 3) : "") << ',' << (f.reachable ? 1 : 0) << ','
                    << (f.mean_w_jl ? num(*f.mean_w_jl, 3) : "") << '\n';
            }
        }

        const ManipulabilityStats sa = summarize(ws.adhoc);
        const ManipulabilityStats sf = summarize(ws.frik);
        json summary;
        summary["config"] = runConfigToJson(config);
        summary["units"] = {{"position", "mm"}, {"w_jl", "mm^3 (mm-based Jacobian)"}};
        summary["voxels"] = ws.adhoc.cells.size();
        summary["adhoc"] = statsJson(sa);
        summary["frik"] = statsJson(sf);
        summary["pct_change"] = {{"reachable_voxels", pctChange(static_cast<double>(sa.reachable),
                                                                static_cast<double>(sf.reachable))},
                                 {"max_w_jl", pctChange(sa.max, sf.max)},
                                 {"mean_w_jl", pctChange(sa.mean, sf.mean)},
                                 {"std_w_jl", pctChange(sa.stddev, sf.stddev)}};
        summary["frik_count_ge_adhoc"] = sf.reachable >= sa.reachable;
        summary["dominance_exceptions"] = ws.dominance_exceptions;
        json cells = json::array();
        for (std::size_t i = 0; i < ws.adhoc.cells.size(); ++i) {
            const auto& a = ws.adhoc.cells[i];
            const auto& f = ws.frik.cells[i];
            cells.push_back({{"y_mm", a.y_mm},
                             {"z_mm", a.z_mm},
                             {"adhoc", {{"reachable", a.reachable},
                                        {"mean_w_jl", a.mean_w_jl ? json(*a.mean_w_jl) : json(nullptr)},
                                        {"failure", a.failure}}},
                             {"frik", {{"reachable", f.reachable},
                                       {"mean_w_jl", f.mean_w_jl ? json(*f.mean_w_jl) : json(nullptr)},
                                       {"failure", f.failure}}}});
        }
        summary["cells"] = std::move(cells);
        if (!config.no_timing) summary["wall_time_s"] = seconds;
        std::ofstream(out_dir / "workspace_summary.json") << summary.dump(2) << '\n';

        log << "voxels: " << ws.adhoc.cells.size() << ", reachable adhoc " << sa.reachable << ", frik " << sf.reachable
            << " (" << num(pctChange(static_cast<double>(sa.reachable), static_cast<double>(sf.reachable)), 1)
            << " %), dominance exceptions " << ws.dominance_exceptions << '\n';
        return kExitOk;
    });
}

}  // namespace frik
