#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "frik/errors.hpp"
#include "frik/toolpath.hpp"
#include "oracles.hpp"

using namespace frik;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratchDir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("frik_test_toolpath_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void writeText(const fs::path& file, const std::string& text) {
    std::ofstream(file, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("cone spec validation and count") {
    ConeSpec spec;
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.targetCount() == 716);
    spec.samples_per_rev = 8;
    CHECK(spec.targetCount() == 16);
    spec.diameter_mm = -1.0;
    spec.samples_per_rev = 4;
    try {
        spec.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("diameter") != std::string::npos);
        CHECK(what.find("samples_per_rev") != std::string::npos);
    }
}

TEST_CASE("cone spiral targets lie on the surface") {
    for (const double standoff : {0.0, 7.5}) {
        ConeSpec spec;
        spec.pitch_mm = 2.0;
        spec.samples_per_rev = 114;
        spec.standoff_mm = standoff;
        const Toolpath path = generateConeSpiral(spec);
        CHECK(path.size() == spec.targetCount());
        const ConeSurface cone{50.0, 50.0};
        const double dtheta = 2.0 * pi / spec.samples_per_rev;
        for (const auto& t : path.targets()) {
            const double theta = dtheta * static_cast<double>(t.index);
            const Vector3 surface = t.pose.translation() - standoff * cone.outwardNormal(theta);
            CHECK(std::hypot(surface.x(), surface.y()) == doctest::Approx(50.0 * (1.0 - surface.z() / 50.0)).epsilon(1e-11));
            CHECK(isRotation(t.pose.rotation()));
            // Approach axis points into the surface.
            CHECK(oracle::maxAbs(t.pose.rotation().col(2) + cone.outwardNormal(theta)) < 1e-15);
        }
        CHECK(path.targets().front().pose.translation().y() == doctest::Approx(0.0));
        if (standoff == 0.0) CHECK(path.targets().back().pose.translation().z() < 50.0);
    }
}

TEST_CASE("consecutive targets advance by a fixed azimuth and climb") {
    ConeSpec spec;
    spec.samples_per_rev = 40;
    const Toolpath path = generateConeSpiral(spec);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Vector3 a = path.targets()[k - 1].pose.translation();
        const Vector3 b = path.targets()[k].pose.translation();
        CHECK(b.z() - a.z() == doctest::Approx(spec.pitch_mm / 40));
        const double step = std::remainder(std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x()), 2 * pi);
        CHECK(step == doctest::Approx(2 * pi / 40));
    }
}

TEST_CASE("analytic cone normal matches the finite-difference surface normal") {
    const ConeSurface cone{50.0, 50.0};
    const double h = 1e-6;
    for (int i = 0; i < 64; ++i) {
        const double theta = 2 * pi * i / 64.0;
        const double z = 20.0;
        const Vector3 dtheta = (cone.point(theta + h, z) - cone.point(theta - h, z)) / (2 * h);
        const Vector3 dz = (cone.point(theta, z + h) - cone.point(theta, z - h)) / (2 * h);
        Vector3 n = dtheta.cross(dz).normalized();
        if (n.dot(cone.point(theta, z) - Vector3(0, 0, z)) < 0) n = -n;
        CHECK((n - cone.outwardNormal(theta)).norm() < 1e-6);
    }
}

TEST_CASE("ad hoc orientation") {
    SUBCASE("approach along frame z keeps frame x") {
        const Toolpath p = Toolpath::fromPoses({Pose(rotZ(0.8), Vector3(1, 2, 3))});
        const AdhocResult r = assignAdhocOrientation(p);
        CHECK(oracle::maxAbs(r.path.targets()[0].pose.rotation() - Matrix3::Identity()) < 1e-15);
        CHECK(r.fallback_indices.empty());
    }
    SUBCASE("approach along frame x falls back to frame y") {
        const Toolpath p = Toolpath::fromPoses({Pose(rotY(pi / 2), Vector3::Zero())});
        const AdhocResult r = assignAdhocOrientation(p);
        REQUIRE(r.fallback_indices.size() == 1);
        const Matrix3 rot = r.path.targets()[0].pose.rotation();
        CHECK(isRotation(rot));
        CHECK((rot.col(0) - Vector3::UnitY()).norm() < 1e-15);
        CHECK_THROWS_AS(assignAdhocOrientation(p, true), DegenerateProjection);
    }
    SUBCASE("random approach axes") {
        std::mt19937_64 rng(31);
        std::vector<Pose> poses;
        for (int i = 0; i < 1000; ++i) poses.emplace_back(so3Exp(2.5 * oracle::randomUnit(rng)), Vector3::Zero());
        const Toolpath p = Toolpath::fromPoses(poses, Pose(rotX(0.2), Vector3(5, 5, 5)));
        const AdhocResult r = assignAdhocOrientation(p);
        CHECK(r.path.frame().isApprox(p.frame(), 0.0));
        for (std::size_t k = 0; k < poses.size(); ++k) {
            const Matrix3 rot = r.path.targets()[k].pose.rotation();
            CHECK(isRotation(rot, 1e-12));
            CHECK(rot.determinant() == doctest::Approx(1.0));
            CHECK(std::abs(rot.col(0).dot(rot.col(2))) < 1e-14);
            CHECK(rot.col(2) == poses[k].rotation().col(2));
            CHECK(rot.col(0).dot(Vector3::UnitX()) >= 0.0);
        }
    }
}

TEST_CASE("reframing is a rigid motion") {
    const Toolpath path = generateConeSpiral(ConeSpec{});
    const Toolpath a = path.reframed(Pose(rotY(-pi / 2), Vector3(0, -1100, 900)));
    const Toolpath b = path.reframed(Pose(so3Exp(Vector3(0.4, -0.2, 1.0)), Vector3(300, 20, -40)));
    const auto pa = a.toBase();
    const auto pb = b.toBase();
    for (std::size_t i = 0; i < pa.size(); i += 37) {
        for (std::size_t j = 0; j < pa.size(); j += 53) {
            const double da = (pa[i].translation() - pa[j].translation()).norm();
            const double db = (pb[i].translation() - pb[j].translation()).norm();
            CHECK(da == doctest::Approx(db).epsilon(1e-12));
        }
    }
    // Base-frame pose is frame * local.
    CHECK(pa[5].isApprox(a.frame() * path.targets()[5].pose, 1e-12));
}

TEST_CASE("toolpath file round trip") {
    const fs::path dir = scratchDir("roundtrip");
    const Toolpath path = generateConeSpiral(ConeSpec{}, Pose(rotY(-pi / 2), Vector3(0, -1100, 900)));
    saveToolpath(path, dir / "cone.json");
    const Toolpath back = loadToolpath(dir / "cone.json");
    REQUIRE(back.size() == path.size());
    CHECK(back.frame().isApprox(path.frame(), 1e-12));
    double worst = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        CHECK(back.targets()[k].index == k);
        worst = std::max(worst, oracle::maxAbs(back.targets()[k].pose.matrix() - path.targets()[k].pose.matrix()));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("toolpath parsing") {
    const fs::path dir = scratchDir("parse");

    SUBCASE("empty file") {
        writeText(dir / "empty.json", "");
        CHECK_THROWS_AS(loadToolpath(dir / "empty.json"), ParseError);
        writeText(dir / "empty.csv", "  \n");
        CHECK_THROWS_AS(loadToolpath(dir / "empty.csv"), ParseError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(loadToolpath(dir / "nope.json"), ParseError); }
    SUBCASE("single identity record") {
        const Toolpath p = parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0],"quat":[0,0,0,1]}]})");
        REQUIRE(p.size() == 1);
        CHECK(p.targets()[0].pose.isApprox(Pose::identity(), 0.0));
        CHECK(p.frame().isApprox(Pose::identity(), 0.0));
    }
    SUBCASE("rotation matrix input") {
        const Toolpath p = parseToolpathJson(
            R"({"frame":{"pos_mm":[1,2,3],"rot":[0,-1,0,1,0,0,0,0,1]},
                "targets":[{"k":0,"pos_mm":[0,0,0],"rot":[[1,0,0],[0,1,0],[0,0,1]]}]})");
        CHECK(oracle::maxAbs(p.frame().rotation() - rotZ(pi / 2)) < 1e-15);
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0],"rot":[2,0,0,0,1,0,0,0,1]}]})"),
                        InvalidRotation);
    }
    SUBCASE("quaternion norm") {
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0],"quat":[0,0,0,1.01]}]})"),
                        InvalidRotation);
        CHECK_NOTHROW(parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0],"quat":[0,0,0,1.0000005]}]})"));
    }
    SUBCASE("malformed records") {
        CHECK_THROWS_AS(parseToolpathJson("{"), ParseError);
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[]})"), ParseError);
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[{"k":1,"pos_mm":[0,0,0],"quat":[0,0,0,1]}]})"), ParseError);
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0],"quat":[0,0,0,1]}]})"), ParseError);
        CHECK_THROWS_AS(parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0]}]})"), ParseError);
        try {
            parseToolpathJson(R"({"targets":[{"k":0,"pos_mm":[0,0,0],"quat":[0,0,0,1]},{"k":1,"quat":[0,0,0,1]}]})");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("targets[1]") != std::string::npos);
        }
    }
    SUBCASE("csv") {
        writeText(dir / "p.csv",
                  "# exported\nk,x_mm,y_mm,z_mm,qx,qy,qz,qw\n0,1,2,3,0,0,0,1\n1,4,5,6,0,0,0.7071067811865476,0.7071067811865476\n");
        const Toolpath p = loadToolpath(dir / "p.csv");
        REQUIRE(p.size() == 2);
        CHECK(p.targets()[1].pose.translation() == Vector3(4, 5, 6));
        CHECK(oracle::maxAbs(p.targets()[1].pose.rotation() - rotZ(pi / 2)) < 1e-15);
        try {
            parseToolpathCsv("0,1,2,3,0,0,0,1\n1,1,2,x,0,0,0,1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
        CHECK_THROWS_AS(parseToolpathCsv("0,1,2,3,0,0,0\n"), ParseError);
        CHECK_THROWS_AS(parseToolpathCsv("0,1,2,3,0,0,0,2\n"), InvalidRotation);
    }
}
