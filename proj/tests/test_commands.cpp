#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "frik/commands.hpp"
#include "frik/config.hpp"
#include "frik/toolpath.hpp"

using namespace frik;
using nlohmann::json;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratchDir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("frik_test_commands_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string output;
};

Run cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli.log";
    const std::string cmd = std::string(FRIK_CLI_PATH) + " " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> dataRows(const fs::path& csv) {
    std::ifstream in(csv);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(line);
    }
    return rows;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    const fs::path dir = scratchDir("usage");
    CHECK(cli("", dir).code == 1);
    CHECK(cli("frobnicate", dir).code == 1);
    CHECK(cli("solve --task-dof 4", dir).code == 1);
    CHECK(cli("solve --mode sideways", dir).code == 1);
    CHECK(cli("--help", dir).code == 0);
    CHECK(cli("solve --config " + (dir / "absent.json").string(), dir).code == 1);
}

TEST_CASE("generate") {
    const fs::path dir = scratchDir("generate");
    const Run r = cli("generate --cone-samples 8 --cone-pitch 25 --cone-height 50 --out " + dir.string(), dir);
    REQUIRE(r.code == 0);
    CHECK(r.output.find("16 targets") != std::string::npos);
    const Toolpath p = loadToolpath(dir / "toolpath.json");
    CHECK(p.size() == 16);

    CHECK(cli("generate --cone-diameter -1 --out " + dir.string(), dir).code == 1);
    CHECK(cli("generate --cone-samples 4 --out " + dir.string(), dir).code == 1);

    // Default spec round-trips through the file.
    const fs::path def = dir / "default";
    REQUIRE(cli("generate --out " + def.string(), dir).code == 0);
    const Toolpath loaded = loadToolpath(def / "toolpath.json");
    const Toolpath expected = generateConeSpiral(ConeSpec{}, RunConfig::defaults().workpiece);
    REQUIRE(loaded.size() == expected.size());
    for (std::size_t k = 0; k < loaded.size(); k += 41) {
        CHECK((loaded.targets()[k].pose.matrix() - expected.targets()[k].pose.matrix()).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("solve reports a missing robot file by name") {
    const fs::path dir = scratchDir("robot");
    const std::string missing = (dir / "no_such_robot.json").string();
    const Run r = cli("solve --robot " + missing + " --out " + dir.string(), dir);
    CHECK(r.code == 1);
    CHECK(r.output.find(missing) != std::string::npos);
}

TEST_CASE("one-target path at the start pose returns the start configuration") {
    const fs::path dir = scratchDir("one");
    const RobotModel robot = loadRobot("builtin:irb4600-coldspray");
    const JointVector q0 = irb4600StartConfig();
    saveToolpath(Toolpath::fromPoses({robot.forwardKinematics(q0)}), dir / "one.json");

    const Run r = cli("solve --mode frik --no-timing --toolpath " + (dir / "one.json").string() + " --out " +
                          (dir / "out").string(),
                      dir);
    REQUIRE(r.code == 0);
    const auto rows = dataRows(dir / "out" / "trajectory_frik.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "k,q1_deg,q2_deg,q3_deg,q4_deg,q5_deg,q6_deg,iterations,residual,us");
    std::stringstream ss(rows[1]);
    std::string cell;
    std::getline(ss, cell, ',');
    CHECK(cell == "0");
    for (Eigen::Index i = 0; i < 6; ++i) {
        std::getline(ss, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(q0[i] * 180.0 / pi).epsilon(1e-9));
    }
    std::getline(ss, cell, ',');
    CHECK(cell == "0");
    CHECK(rows[1].substr(rows[1].size() - 2) == ",0");

    // Every output names the resolved configuration.
    const std::string traj = slurp(dir / "out" / "trajectory_frik.csv");
    CHECK(traj.rfind("# config: {", 0) == 0);
    const json summary = json::parse(slurp(dir / "out" / "solve_summary.json"));
    CHECK(summary["frik"]["converged"] == true);
    CHECK(summary["config"]["robot"] == "builtin:irb4600-coldspray");
}

TEST_CASE("compare writes both trajectories and the travel report") {
    const fs::path dir = scratchDir("compare");
    const Run r = cli("compare --cone-samples 24 --no-timing --out " + dir.string(), dir);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "trajectory_adhoc.csv"));
    CHECK(fs::exists(dir / "trajectory_frik.csv"));
    const auto rows = dataRows(dir / "travel.csv");
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "joint,travel_adhoc_deg,travel_frik_deg,pct_change");
    CHECK(rows[1].rfind("J1,", 0) == 0);
    CHECK(rows[7].rfind("overall,", 0) == 0);
    CHECK(dataRows(dir / "trajectory_frik.csv").size() == 48 + 1);
}

TEST_CASE("unreachable placement exits 2") {
    const fs::path dir = scratchDir("unreachable");
    std::ofstream(dir / "far.json") << R"({"workpiece":{"pos_mm":[0,-6000,900],"quat":[0,-0.7071067811865476,0,0.7071067811865476]},
                                          "cone":{"samples_per_rev":8}})";
    const Run r = cli("solve --config " + (dir / "far.json").string() + " --out " + (dir / "out").string(), dir);
    CHECK(r.code == 2);
    CHECK(r.output.find("NOT CONVERGED") != std::string::npos);
    const json summary = json::parse(slurp(dir / "out" / "solve_summary.json"));
    CHECK(summary["frik"]["failed_index"] == 0);
}

TEST_CASE("workspace on a single cell and beyond reach") {
    const fs::path dir = scratchDir("workspace");
    std::ofstream(dir / "cell.json") << R"({"sweep":{"y_min_mm":-1150,"y_max_mm":-1050,"z_min_mm":850,"z_max_mm":950},
                                           "cone":{"samples_per_rev":24}})";
    REQUIRE(cli("workspace --no-timing --config " + (dir / "cell.json").string() + " --out " + (dir / "cell").string(),
                dir)
                .code == 0);
    const json cell = json::parse(slurp(dir / "cell" / "workspace_summary.json"));
    CHECK(cell["voxels"] == 1);
    CHECK(cell["cells"][0]["y_mm"] == -1100.0);
    CHECK(cell["cells"][0]["frik"]["reachable"] == true);
    CHECK(cell["cells"][0]["adhoc"].contains("reachable"));
    CHECK_FALSE(cell.contains("wall_time_s"));
    CHECK(dataRows(dir / "cell" / "workspace.csv").size() == 2);

    std::ofstream(dir / "far.json") << R"({"sweep":{"y_min_mm":-6000,"y_max_mm":-5800,"z_min_mm":3500,"z_max_mm":3700},
                                          "cone":{"samples_per_rev":8}})";
    REQUIRE(cli("workspace --config " + (dir / "far.json").string() + " --out " + (dir / "far").string(), dir).code ==
            0);
    const json far = json::parse(slurp(dir / "far" / "workspace_summary.json"));
    CHECK(far["voxels"] == 4);
    CHECK(far["adhoc"]["reachable_voxels"] == 0);
    CHECK(far["frik"]["reachable_voxels"] == 0);
}

TEST_CASE("repeated runs without timing are byte-identical") {
    const fs::path dir = scratchDir("determinism");
    const std::string args = "compare --cone-samples 16 --seed 7 --no-timing --out " + (dir / "out").string();
    REQUIRE(cli(args, dir).code == 0);
    const std::string first_frik = slurp(dir / "out" / "trajectory_frik.csv");
    const std::string first_travel = slurp(dir / "out" / "travel.csv");
    const std::string first_summary = slurp(dir / "out" / "solve_summary.json");
    REQUIRE(cli(args, dir).code == 0);
    CHECK(slurp(dir / "out" / "trajectory_frik.csv") == first_frik);
    CHECK(slurp(dir / "out" / "travel.csv") == first_travel);
    CHECK(slurp(dir / "out" / "solve_summary.json") == first_summary);
    CHECK(first_frik.find("\"seed\":7") != std::string::npos);
}

TEST_CASE("commands called in-process") {
    const fs::path dir = scratchDir("inproc");
    RunConfig c = RunConfig::defaults();
    c.out_dir = dir.string();
    c.cone->samples_per_rev = 8;
    c.no_timing = true;
    std::ostringstream log;
    CHECK(cmdGenerate(c, log) == kExitOk);
    c.q0 = JointVector::Zero(5);
    CHECK(cmdSolve(c, log) == kExitConfig);
    CHECK(log.str().find("q0 has 5 entries") != std::string::npos);
}
