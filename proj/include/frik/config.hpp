#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "frik/analysis.hpp"
#include "frik/robot_model.hpp"
#include "frik/solver.hpp"
#include "frik/toolpath.hpp"

namespace frik {

/// Robot description file: dh, joint_limits_rad, tool, dh_convention.
RobotModel robotFromJson(const nlohmann::json& j);
nlohmann::json robotToJson(const RobotModel& model);
RobotModel loadRobot(const std::filesystem::path& file);

/// Reads the solver block; absent fields keep the values of `base`.
SolverSettings settingsFromJson(const nlohmann::json& j, SolverSettings base = {});
nlohmann::json settingsToJson(const SolverSettings& s);

ConeSpec coneFromJson(const nlohmann::json& j, ConeSpec base = {});
nlohmann::json coneToJson(const ConeSpec& c);

enum class RunMode { Frik, Adhoc, Both };
std::string toString(RunMode m);
RunMode runModeFromString(const std::string& s);

/// Fully resolved experiment description.
struct RunConfig {
    /// JSON robot file, or builtin:irb4600 / builtin:irb4600-coldspray.
    std::string robot_file;
    SolverSettings solver;
    int task_dof = 5;
    /// Exactly one of these is the toolpath source.
    std::optional<std::string> toolpath_file;
    std::optional<ConeSpec> cone;
    /// Workpiece placement in the base frame.
    Pose workpiece;
    JointVector q0;
    PlaneSpec sweep;
    RunMode mode = RunMode::Both;
    std::string out_dir = "out";
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    bool no_timing = false;

    /// Defaults of the cone benchmark.
    static RunConfig defaults();

    /// Throws ConfigError on inconsistent fields (q0 length is checked
    /// against the robot by the commands).
    void validate() const;
};

/// Overlays a config JSON document onto `base`. Relative paths inside the
/// document are resolved against `base_dir`.
RunConfig runConfigFromJson(const nlohmann::json& j, RunConfig base = RunConfig::defaults(),
                            const std::filesystem::path& base_dir = {});
RunConfig loadRunConfig(const std::filesystem::path& file);
nlohmann::json runConfigToJson(const RunConfig& c);

/// Reads a whole JSON file, wrapping IO and syntax failures in ConfigError.
nlohmann::json readJsonFile(const std::filesystem::path& file, const std::string& what);

}  // namespace frik
