#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frik/commands.hpp"
#include "frik/errors.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> robot;
    std::optional<std::string> toolpath;
    std::optional<int> task_dof;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
    std::optional<std::uint64_t> seed;
    bool no_timing = false;
    std::optional<double> cone_diameter;
    std::optional<double> cone_height;
    std::optional<double> cone_pitch;
    std::optional<int> cone_samples;
    std::optional<double> cone_standoff;
};

void addCommonFlags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--robot", f.robot, "Robot description JSON (or builtin:irb4600, builtin:irb4600-coldspray)");
    cmd->add_option("--toolpath", f.toolpath, "Toolpath file (.json or .csv); replaces the cone generator");
    cmd->add_option("--task-dof", f.task_dof, "Task dimension for the FRIK mode")->check(CLI::IsMember({3, 5, 6}));
    cmd->add_option("--mode", f.mode, "frik, adhoc or both")->check(CLI::IsMember({"frik", "adhoc", "both"}));
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--jobs", f.jobs, "Worker threads for the workspace sweep (0 = all cores)");
    cmd->add_option("--seed", f.seed, "Seed recorded in every output");
    cmd->add_flag("--no-timing", f.no_timing, "Zero out timing fields for byte-stable outputs");
    cmd->add_option("--cone-diameter", f.cone_diameter, "Cone diameter (mm)");
    cmd->add_option("--cone-height", f.cone_height, "Cone height (mm)");
    cmd->add_option("--cone-pitch", f.cone_pitch, "Spiral climb per revolution (mm)");
    cmd->add_option("--cone-samples", f.cone_samples, "Targets per revolution");
    cmd->add_option("--cone-standoff", f.cone_standoff, "TCP offset along the outward normal (mm)");
}

frik::RunConfig resolve(const Flags& f) {
    frik::RunConfig c = f.config.empty() ? frik::RunConfig::defaults() : frik::loadRunConfig(f.config);
    if (f.robot) c.robot_file = *f.robot;
    if (f.toolpath) {
        c.toolpath_file = *f.toolpath;
        c.cone.reset();
    }
    if (f.cone_diameter || f.cone_height || f.cone_pitch || f.cone_samples || f.cone_standoff) {
        if (f.toolpath) throw frik::ConfigError("--toolpath and --cone-* flags are mutually exclusive");
        frik::ConeSpec cone = c.cone.value_or(frik::ConeSpec{});
        if (f.cone_diameter) cone.diameter_mm = *f.cone_diameter;
        if (f.cone_height) cone.height_mm = *f.cone_height;
        if (f.cone_pitch) cone.pitch_mm = *f.cone_pitch;
        if (f.cone_samples) cone.samples_per_rev = *f.cone_samples;
        if (f.cone_standoff) cone.standoff_mm = *f.cone_standoff;
        c.cone = cone;
        c.toolpath_file.reset();
    }
    if (f.task_dof) c.task_dof = *f.task_dof;
    if (f.mode) c.mode = frik::runModeFromString(*f.mode);
    if (f.out) c.out_dir = *f.out;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.seed) c.seed = *f.seed;
    if (f.no_timing) c.no_timing = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functionally redundant inverse kinematics for toolpath optimisation"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App* solve = app.add_subcommand("solve", "Solve a toolpath and write the joint trajectory");
    CLI::App* generate = app.add_subcommand("generate", "Write the cone-spiral toolpath");
    CLI::App* workspace = app.add_subcommand("workspace", "Sweep workpiece placements over the wall plane");
    CLI::App* compare = app.add_subcommand("compare", "Solve ad hoc and FRIK back to back");
    for (CLI::App* cmd : {solve, generate, workspace, compare}) addCommonFlags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? frik::kExitOk : frik::kExitConfig;
    }

    frik::RunConfig config;
    try {
        config = resolve(flags);
    } catch (const frik::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return frik::kExitConfig;
    }

    if (solve->parsed()) return frik::cmdSolve(config, std::cout);
    if (generate->parsed()) return frik::cmdGenerate(config, std::cout);
    if (workspace->parsed()) return frik::cmdWorkspace(config, std::cout);
    return frik::cmdCompare(config, std::cout);
}
