#include "frik/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "frik/errors.hpp"

namespace frik {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

constexpr const char* kBuiltinPrefix = "builtin:";

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

JointVector toVector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <typename T>
void readIf(const json& j, const char* key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

Pose poseFromJson(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected {pos_mm, quat}");
    Vector3 p = Vector3::Zero();
    if (j.contains("pos_mm")) {
        const auto v = numbers(j.at("pos_mm"), where + ".pos_mm");
        if (v.size() != 3) throw ConfigError(where + ".pos_mm: expected 3 numbers");
        p = {v[0], v[1], v[2]};
    }
    Matrix3 r = Matrix3::Identity();
    if (j.contains("quat")) {
        const auto q = numbers(j.at("quat"), where + ".quat");
        if (q.size() != 4) throw ConfigError(where + ".quat: expected [x, y, z, w]");
        const Eigen::Vector4d qv(q[0], q[1], q[2], q[3]);
        if (std::abs(qv.norm() - 1.0) > 1e-6) throw InvalidRotation(where + ".quat is not a unit quaternion");
        r = quatToRotation(qv);
    }
    return {r, p};
}

json poseToJson(const Pose& p) {
    const Eigen::Vector4d q = rotationToQuat(p.rotation());
    const Vector3& t = p.translation();
    return {{"pos_mm", {t.x(), t.y(), t.z()}}, {"quat", {q[0], q[1], q[2], q[3]}}};
}

/// Side-mounted spray gun: nozzle axis along the flange x-axis, nozzle
/// 150 mm out along the flange axis.
Pose coldSprayTool() {
    return {rotY(std::numbers::pi / 2), Vector3(0.0, 0.0, 150.0)};
}

}  // namespace

json readJsonFile(const std::filesystem::path& file, const std::string& what) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + what + " '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + " '" + file.string() + "': " + e.what());
    }
}

RobotModel robotFromJson(const json& j) {
    if (!j.is_object() || !j.contains("dh") || !j.at("dh").is_array()) {
        throw ConfigError("robot description needs a dh array");
    }
    std::vector<DHRow> dh;
    for (const auto& row : j.at("dh")) {
        DHRow r;
        try {
            r.a = row.value("a_mm", 0.0);
            r.alpha = row.value("alpha_rad", 0.0);
            r.d = row.value("d_mm", 0.0);
            r.theta_offset = row.value("theta_rad", 0.0);
        } catch (const json::exception&) {
            throw ConfigError("dh rows must be objects of numbers {a_mm, alpha_rad, d_mm, theta_rad}");
        }
        dh.push_back(r);
    }
    const auto n = static_cast<Eigen::Index>(dh.size());
    JointVector lo = JointVector::Constant(n, -std::numbers::pi);
    JointVector hi = JointVector::Constant(n, std::numbers::pi);
    if (j.contains("joint_limits_rad") && !j.at("joint_limits_rad").is_null()) {
        const auto& lim = j.at("joint_limits_rad");
        if (!lim.contains("min") || !lim.contains("max")) throw ConfigError("joint_limits_rad needs min and max");
        lo = toVector(numbers(lim.at("min"), "joint_limits_rad.min"));
        hi = toVector(numbers(lim.at("max"), "joint_limits_rad.max"));
    }
    Pose tool;
    if (j.contains("tool") && !j.at("tool").is_null()) {
        std::vector<double> flat;
        const auto& t = j.at("tool");
        if (t.is_array() && t.size() == 4 && t[0].is_array()) {
            for (const auto& row : t) {
                const auto r = numbers(row, "tool row");
                flat.insert(flat.end(), r.begin(), r.end());
            }
        } else {
            flat = numbers(t, "tool");
        }
        if (flat.size() != 16) throw ConfigError("tool must be a 4x4 row-major matrix");
        Matrix4 m;
        for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = flat[static_cast<std::size_t>(i)];
        tool = Pose::fromMatrix(m);
    }
    DHConvention conv = DHConvention::Standard;
    if (j.contains("dh_convention")) {
        const auto c = j.at("dh_convention").get<std::string>();
        if (c == "modified") {
            conv = DHConvention::Modified;
        } else if (c != "standard") {
            throw ConfigError("dh_convention must be standard or modified, got '" + c + "'");
        }
    }
    return {std::move(dh), lo, hi, tool, conv};
}

json robotToJson(const RobotModel& model) {
    json dh = json::array();
    for (const auto& r : model.dh()) {
        dh.push_back({{"a_mm", r.a}, {"alpha_rad", r.alpha}, {"d_mm", r.d}, {"theta_rad", r.theta_offset}});
    }
    const Matrix4 t = model.tool().matrix();
    json tool = json::array();
    for (int i = 0; i < 4; ++i) tool.push_back({t(i, 0), t(i, 1), t(i, 2), t(i, 3)});
    const auto& lo = model.jointMin();
    const auto& hi = model.jointMax();
    return {{"dh", dh},
            {"joint_limits_rad", {{"min", std::vector<double>(lo.data(), lo.data() + lo.size())},
                                  {"max", std::vector<double>(hi.data(), hi.data() + hi.size())}}},
            {"tool", tool},
            {"dh_convention", model.convention() == DHConvention::Standard ? "standard" : "modified"}};
}

RobotModel loadRobot(const std::filesystem::path& file) {
    const std::string name = file.string();
    if (name.rfind(kBuiltinPrefix, 0) == 0) {
        const std::string preset = name.substr(std::string(kBuiltinPrefix).size());
        if (preset == "irb4600") return makeIrb4600();
        if (preset == "irb4600-coldspray") return makeIrb4600(coldSprayTool());
        throw ConfigError("unknown built-in robot '" + preset + "'");
    }
    if (!std::filesystem::exists(file)) throw ConfigError("robot file '" + name + "' does not exist");
    return robotFromJson(readJsonFile(file, "robot file"));
}

SolverSettings settingsFromJson(const json& j, SolverSettings s) {
    if (!j.is_object()) throw ConfigError("solver block must be an object");
    readIf(j, "lambda", s.lambda);
    readIf(j, "e_max", s.e_max);
    readIf(j, "epsilon", s.epsilon);
    readIf(j, "max_iterations", s.max_iterations);
    readIf(j, "position_scale", s.position_scale);
    readIf(j, "align_free_axis", s.align_free_axis);
    if (j.contains("method")) s.method = methodFromString(j.at("method").get<std::string>());
    if (j.contains("error_model")) s.error_model = errorModelFromString(j.at("error_model").get<std::string>());
    s.validate();
    return s;
}

json settingsToJson(const SolverSettings& s) {
    return {{"lambda", s.lambda},
            {"e_max", s.e_max},
            {"epsilon", s.epsilon},
            {"max_iterations", s.max_iterations},
            {"method", toString(s.method)},
            {"position_scale", s.position_scale},
            {"error_model", toString(s.error_model)},
            {"align_free_axis", s.align_free_axis}};
}

ConeSpec coneFromJson(const json& j, ConeSpec c) {
    if (!j.is_object()) throw ConfigError("cone block must be an object");
    readIf(j, "diameter_mm", c.diameter_mm);
    readIf(j, "height_mm", c.height_mm);
    readIf(j, "pitch_mm", c.pitch_mm);
    readIf(j, "samples_per_rev", c.samples_per_rev);
    readIf(j, "standoff_mm", c.standoff_mm);
    return c;
}

json coneToJson(const ConeSpec& c) {
    return {{"diameter_mm", c.diameter_mm},
            {"height_mm", c.height_mm},
            {"pitch_mm", c.pitch_mm},
            {"samples_per_rev", c.samples_per_rev},
            {"standoff_mm", c.standoff_mm}};
}

std::string toString(RunMode m) {
    switch (m) {
        case RunMode::Frik: return "frik";
        case RunMode::Adhoc: return "adhoc";
        case RunMode::Both: return "both";
    }
    return "both";
}

RunMode runModeFromString(const std::string& s) {
    if (s == "frik") return RunMode::Frik;
    if (s == "adhoc") return RunMode::Adhoc;
    if (s == "both") return RunMode::Both;
    throw ConfigError("mode must be frik, adhoc or both, got '" + s + "'");
}

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.robot_file = std::string(kBuiltinPrefix) + "irb4600-coldspray";
    c.cone = ConeSpec{};
    // Cone base on the wall x = 0, axis pointing back along -x.
    c.workpiece = Pose(rotY(-std::numbers::pi / 2), Vector3(0.0, -1100.0, 900.0));
    c.q0 = irb4600StartConfig();
    c.sweep.orientation = c.workpiece.rotation();
    return c;
}

void RunConfig::validate() const {
    solver.validate();
    TaskProjector check(task_dof);
    (void)check;
    if (toolpath_file.has_value() == cone.has_value()) {
        throw ConfigError("exactly one toolpath source (toolpath file or cone block) is required");
    }
    if (cone) cone->validate();
    sweep.validate();
    if (q0.size() == 0) throw ConfigError("q0 is empty");
}

RunConfig runConfigFromJson(const json& j, RunConfig c, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    auto resolve = [&](const std::string& p) {
        if (p.rfind(kBuiltinPrefix, 0) == 0 || base_dir.empty() || std::filesystem::path(p).is_absolute()) {
            return p;
        }
        return (base_dir / p).lexically_normal().string();
    };
    if (j.contains("robot")) c.robot_file = resolve(j.at("robot").get<std::string>());
    if (j.contains("solver")) {
        c.solver = settingsFromJson(j.at("solver"), c.solver);
        readIf(j.at("solver"), "task_dof", c.task_dof);
    }
    if (j.contains("toolpath") && j.contains("cone")) {
        throw ConfigError("config names both a toolpath file and a cone block; pick one");
    }
    if (j.contains("toolpath")) {
        c.toolpath_file = resolve(j.at("toolpath").get<std::string>());
        c.cone.reset();
    }
    if (j.contains("cone")) {
        c.cone = coneFromJson(j.at("cone"), c.cone.value_or(ConeSpec{}));
        c.toolpath_file.reset();
    }
    if (j.contains("workpiece")) {
        c.workpiece = poseFromJson(j.at("workpiece"), "workpiece");
        c.sweep.orientation = c.workpiece.rotation();
    }
    if (j.contains("q0")) {
        const auto& q = j.at("q0");
        if (q.is_array()) {
            c.q0 = toVector(numbers(q, "q0"));
        } else if (q.is_object() && q.contains("values")) {
            const std::string unit = q.value("unit", std::string("rad"));
            if (unit != "rad" && unit != "deg") throw ConfigError("q0.unit must be rad or deg");
            c.q0 = toVector(numbers(q.at("values"), "q0.values")) * (unit == "deg" ? kDeg : 1.0);
        } else {
            throw ConfigError("q0 must be an array (rad) or {unit, values}");
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        readIf(s, "x_mm", c.sweep.x_mm);
        readIf(s, "y_min_mm", c.sweep.y_min_mm);
        readIf(s, "y_max_mm", c.sweep.y_max_mm);
        readIf(s, "z_min_mm", c.sweep.z_min_mm);
        readIf(s, "z_max_mm", c.sweep.z_max_mm);
        readIf(s, "voxel_mm", c.sweep.voxel_mm);
    }
    if (j.contains("mode")) c.mode = runModeFromString(j.at("mode").get<std::string>());
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    readIf(j, "jobs", c.jobs);
    readIf(j, "seed", c.seed);
    readIf(j, "no_timing", c.no_timing);
    return c;
}

RunConfig loadRunConfig(const std::filesystem::path& file) {
    return runConfigFromJson(readJsonFile(file, "config file"), RunConfig::defaults(), file.parent_path());
}

json runConfigToJson(const RunConfig& c) {
    json j;
    j["robot"] = c.robot_file;
    json solver = settingsToJson(c.solver);
    solver["task_dof"] = c.task_dof;
    j["solver"] = solver;
    if (c.toolpath_file) j["toolpath"] = *c.toolpath_file;
    if (c.cone) j["cone"] = coneToJson(*c.cone);
    j["workpiece"] = poseToJson(c.workpiece);
    j["q0"] = {{"unit", "rad"}, {"values", std::vector<double>(c.q0.data(), c.q0.data() + c.q0.size())}};
    j["sweep"] = {{"x_mm", c.sweep.x_mm},         {"y_min_mm", c.sweep.y_min_mm}, {"y_max_mm", c.sweep.y_max_mm},
                  {"z_min_mm", c.sweep.z_min_mm}, {"z_max_mm", c.sweep.z_max_mm}, {"voxel_mm", c.sweep.voxel_mm}};
    j["mode"] = toString(c.mode);
    j["out"] = c.out_dir;
    j["jobs"] = c.jobs;
    j["seed"] = c.seed;
    j["no_timing"] = c.no_timing;
    return j;
}

}  // namespace frik
