#include "frik/toolpath.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "frik/errors.hpp"

namespace frik {

using nlohmann::json;

namespace {

constexpr double kQuatNormTol = 1e-6;
constexpr double kDegenerateTol = 1e-9;

void checkIndices(const std::vector<ToolpathTarget>& targets) {
    if (targets.empty()) throw ParseError("toolpath has no targets");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].index != i) {
            throw ParseError("target record " + std::to_string(i) + " has index " +
                             std::to_string(targets[i].index) + "; indices must run 0, 1, 2, ...");
        }
    }
}

Matrix3 rotationFromQuat(const Eigen::Vector4d& q, const std::string& where) {
    if (!q.allFinite() || std::abs(q.norm() - 1.0) > kQuatNormTol) {
        std::ostringstream msg;
        msg << where << ": quaternion norm " << q.norm() << " deviates from 1 by more than " << kQuatNormTol;
        throw InvalidRotation(msg.str());
    }
    return quatToRotation(q);
}

Vector3 readVec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ParseError(where + ": expected an array of 3 numbers");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    } catch (const json::exception&) {
        throw ParseError(where + ": expected an array of 3 numbers");
    }
}

Eigen::Vector4d readQuat(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) throw ParseError(where + ": quat must be [x, y, z, w]");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    } catch (const json::exception&) {
        throw ParseError(where + ": quat must be [x, y, z, w]");
    }
}

Matrix3 readRotationMatrix(const json& j, const std::string& where) {
    std::vector<double> flat;
    try {
        if (j.is_array() && j.size() == 3 && j[0].is_array()) {
            for (const auto& row : j) {
                if (row.size() != 3) throw ParseError(where + ": rot rows must have 3 entries");
                for (const auto& v : row) flat.push_back(v.get<double>());
            }
        } else if (j.is_array() && j.size() == 9) {
            for (const auto& v : j) flat.push_back(v.get<double>());
        } else {
            throw ParseError(where + ": rot must be 3x3 (nested or flat row-major)");
        }
    } catch (const json::exception&) {
        throw ParseError(where + ": rot entries must be numbers");
    }
    Matrix3 r;
    for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = flat[static_cast<std::size_t>(i)];
    if (!isRotation(r, kQuatNormTol)) throw InvalidRotation(where + ": rot is not a proper rotation matrix");
    return orthonormalize(r);
}

Pose readPose(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    if (!j.contains("pos_mm")) throw ParseError(where + ": missing pos_mm");
    const Vector3 p = readVec3(j.at("pos_mm"), where + ".pos_mm");
    if (j.contains("quat")) return {rotationFromQuat(readQuat(j.at("quat"), where + ".quat"), where), p};
    if (j.contains("rot")) return {readRotationMatrix(j.at("rot"), where + ".rot"), p};
    throw ParseError(where + ": needs quat or rot");
}

json poseToJson(const Pose& p) {
    const Vector3& t = p.translation();
    const Eigen::Vector4d q = rotationToQuat(p.rotation());
    return {{"pos_mm", {t.x(), t.y(), t.z()}}, {"quat", {q[0], q[1], q[2], q[3]}}};
}

std::string readFile(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open toolpath file '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Toolpath::Toolpath(std::vector<ToolpathTarget> targets, Pose frame)
    : targets_(std::move(targets)), frame_(std::move(frame)) {}

Toolpath Toolpath::fromPoses(const std::vector<Pose>& local, const Pose& frame) {
    std::vector<ToolpathTarget> targets;
    targets.reserve(local.size());
    for (std::size_t k = 0; k < local.size(); ++k) targets.push_back({k, local[k]});
    return {std::move(targets), frame};
}

std::vector<Pose> Toolpath::toBase() const {
    std::vector<Pose> out;
    out.reserve(targets_.size());
    for (const auto& t : targets_) out.push_back(frame_ * t.pose);
    return out;
}

void ConeSpec::validate() const {
    std::ostringstream msg;
    if (!(diameter_mm > 0.0)) msg << "diameter must be > 0; ";
    if (!(height_mm > 0.0)) msg << "height must be > 0; ";
    if (!(pitch_mm > 0.0)) msg << "pitch must be > 0; ";
    if (samples_per_rev < 8) msg << "samples_per_rev must be >= 8; ";
    if (!(standoff_mm > 0.0 || standoff_mm == 0.0)) msg << "standoff must be >= 0; ";
    if (!msg.str().empty()) throw ConfigError("invalid cone spec: " + msg.str());
}

std::size_t ConeSpec::targetCount() const {
    return static_cast<std::size_t>(std::llround(height_mm / pitch_mm * samples_per_rev));
}

Vector3 ConeSurface::point(double azimuth, double z) const {
    const double r = radiusAt(z);
    return {r * std::cos(azimuth), r * std::sin(azimuth), z};
}

Vector3 ConeSurface::outwardNormal(double azimuth) const {
    return Vector3(height * std::cos(azimuth), height * std::sin(azimuth), radius).normalized();
}

Toolpath generateConeSpiral(const ConeSpec& spec, const Pose& frame) {
    spec.validate();
    const ConeSurface cone{0.5 * spec.diameter_mm, spec.height_mm};
    const std::size_t n = spec.targetCount();
    const double dtheta = 2.0 * std::numbers::pi / spec.samples_per_rev;
    const double dz = spec.pitch_mm / spec.samples_per_rev;

    std::vector<ToolpathTarget> targets;
    targets.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = dtheta * static_cast<double>(k);
        const double z = dz * static_cast<double>(k);
        const Vector3 normal = cone.outwardNormal(theta);
        const Vector3 tool_z = -normal;
        const Vector3 tool_x(-std::sin(theta), std::cos(theta), 0.0);
        Matrix3 r;
        r << tool_x, tool_z.cross(tool_x), tool_z;
        targets.push_back({k, Pose(r, cone.point(theta, z) + spec.standoff_mm * normal)});
    }
    return {std::move(targets), frame};
}

AdhocResult assignAdhocOrientation(const Toolpath& path, bool strict) {
    AdhocResult out;
    std::vector<ToolpathTarget> targets;
    targets.reserve(path.size());
    for (const auto& t : path.targets()) {
        const Vector3 z = t.pose.rotation().col(2);
        Vector3 x = Vector3::UnitX() - Vector3::UnitX().dot(z) * z;
        if (x.norm() < kDegenerateTol) {
            if (strict) {
                throw DegenerateProjection("target " + std::to_string(t.index) +
                                           ": approach axis is parallel to the workpiece x-axis");
            }
            out.fallback_indices.push_back(t.index);
            x = Vector3::UnitY() - Vector3::UnitY().dot(z) * z;
        }
        x.normalize();
        Matrix3 r;
        r << x, z.cross(x), z;
        targets.push_back({t.index, Pose(r, t.pose.translation())});
    }
    out.path = Toolpath(std::move(targets), path.frame());
    return out;
}

Toolpath parseToolpathJson(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("toolpath JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("toolpath JSON: top level must be an object");
    Pose frame;
    if (doc.contains("frame") && !doc.at("frame").is_null()) frame = readPose(doc.at("frame"), "frame");
    if (!doc.contains("targets") || !doc.at("targets").is_array()) {
        throw ParseError("toolpath JSON: missing targets array");
    }
    std::vector<ToolpathTarget> targets;
    std::size_t rec = 0;
    for (const auto& t : doc.at("targets")) {
        const std::string where = "targets[" + std::to_string(rec) + "]";
        if (!t.is_object() || !t.contains("k") || !t.at("k").is_number_integer()) {
            throw ParseError(where + ": missing integer k");
        }
        const auto k = t.at("k").get<long long>();
        if (k < 0) throw ParseError(where + ": k must be non-negative");
        targets.push_back({static_cast<std::size_t>(k), readPose(t, where)});
        ++rec;
    }
    checkIndices(targets);
    return {std::move(targets), frame};
}

Toolpath parseToolpathCsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ToolpathTarget> targets;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("k,", 0) == 0) continue;  // header
        std::vector<double> fields;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                fields.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("toolpath CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (fields.size() != 8) {
            throw ParseError("toolpath CSV line " + std::to_string(line_no) + ": expected 8 columns, got " +
                             std::to_string(fields.size()));
        }
        if (fields[0] < 0.0 || fields[0] != std::floor(fields[0])) {
            throw ParseError("toolpath CSV line " + std::to_string(line_no) + ": k must be a non-negative integer");
        }
        const std::string where = "toolpath CSV line " + std::to_string(line_no);
        const Matrix3 r = rotationFromQuat({fields[4], fields[5], fields[6], fields[7]}, where);
        targets.push_back({static_cast<std::size_t>(fields[0]), Pose(r, {fields[1], fields[2], fields[3]})});
    }
    checkIndices(targets);
    return {std::move(targets), Pose::identity()};
}

Toolpath loadToolpath(const std::filesystem::path& file) {
    const std::string text = readFile(file);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ParseError("toolpath file '" + file.string() + "' is empty");
    }
    if (file.extension() == ".csv") return parseToolpathCsv(text);
    return parseToolpathJson(text);
}

std::string toolpathToJson(const Toolpath& path) {
    json doc;
    doc["frame"] = poseToJson(path.frame());
    json targets = json::array();
    for (const auto& t : path.targets()) {
        json j = poseToJson(t.pose);
        j["k"] = t.index;
        targets.push_back(std::move(j));
    }
    doc["targets"] = std::move(targets);
    return doc.dump(1);
}

void saveToolpath(const Toolpath& path, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write toolpath file '" + file.string() + "'");
    out << toolpathToJson(path) << '\n';
}

}  // namespace frik
