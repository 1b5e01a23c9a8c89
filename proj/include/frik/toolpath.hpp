#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "frik/liegroup.hpp"

namespace frik {

/// Pose k of a toolpath. The z-axis of the rotation is the tool approach
/// direction (pointing from the TCP into the surface).
struct ToolpathTarget {
    std::size_t index = 0;
    Pose pose;
};

/// Ordered targets expressed in the workpiece frame; `frame` places the
/// workpiece in the robot base frame.
class Toolpath {
public:
    Toolpath() = default;
    Toolpath(std::vector<ToolpathTarget> targets, Pose frame);

    /// Builds targets indexed 0..N-1 from local poses.
    static Toolpath fromPoses(const std::vector<Pose>& local, const Pose& frame = Pose::identity());

    [[nodiscard]] const std::vector<ToolpathTarget>& targets() const { return targets_; }
    [[nodiscard]] const Pose& frame() const { return frame_; }
    [[nodiscard]] std::size_t size() const { return targets_.size(); }
    [[nodiscard]] bool empty() const { return targets_.empty(); }

    /// Same targets placed at a different workpiece frame.
    [[nodiscard]] Toolpath reframed(const Pose& frame) const { return {targets_, frame}; }

    /// Targets in the robot base frame.
    [[nodiscard]] std::vector<Pose> toBase() const;

private:
    std::vector<ToolpathTarget> targets_;
    Pose frame_;
};

struct ConeSpec {
    double diameter_mm = 100.0;
    double height_mm = 50.0;
    double pitch_mm = 25.0;
    int samples_per_rev = 358;
    double standoff_mm = 0.0;

    /// Throws ConfigError listing every invalid field.
    void validate() const;
    /// Targets generated: round(height / pitch * samples_per_rev).
    [[nodiscard]] std::size_t targetCount() const;
};

/// Analytic cone geometry in the cone frame: base circle on z = 0, apex on +z.
struct ConeSurface {
    double radius;
    double height;

    [[nodiscard]] double radiusAt(double z) const { return radius * (1.0 - z / height); }
    [[nodiscard]] Vector3 point(double azimuth, double z) const;
    [[nodiscard]] Vector3 outwardNormal(double azimuth) const;
};

/// Spiral from base to apex. Each target sits `standoff` along the outward
/// normal with its z-axis along the inward normal and its x-axis along the
/// direction of increasing azimuth.
Toolpath generateConeSpiral(const ConeSpec& spec, const Pose& frame = Pose::identity());

struct AdhocResult {
    Toolpath path;
    /// Targets whose approach axis was parallel to frame x and used frame y.
    std::vector<std::size_t> fallback_indices;
};

/// Fixes the free rotation: target x is the workpiece-frame x-axis
/// projected onto the plane normal to the target z-axis. With `strict`,
/// a degenerate projection throws DegenerateProjection instead of falling
/// back to the workpiece y-axis.
AdhocResult assignAdhocOrientation(const Toolpath& path, bool strict = false);

/// JSON or CSV by extension (.csv selects CSV, anything else JSON).
Toolpath loadToolpath(const std::filesystem::path& file);
Toolpath parseToolpathJson(const std::string& text);
Toolpath parseToolpathCsv(const std::string& text);

void saveToolpath(const Toolpath& path, const std::filesystem::path& file);
std::string toolpathToJson(const Toolpath& path);

}  // namespace frik
