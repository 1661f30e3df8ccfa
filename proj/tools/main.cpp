// featfield command-line front end: closed-loop scenario runs, potential
// field map rendering, and one-parameter sweeps over scenario configs.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "featfield/grid_map.hpp"
#include "featfield/ini.hpp"
#include "featfield/render.hpp"
#include "featfield/sim/io.hpp"
#include "featfield/sim/scenario.hpp"
#include "featfield/sim/sweep.hpp"

namespace fs = std::filesystem;
using namespace featfield;
using namespace featfield::sim;

namespace {

// exit-code contract (documented in the README)
constexpr int kExitSuccess = 0;
constexpr int kExitLostTracking = 20;
constexpr int kExitTimeout = 21;
constexpr int kExitConfig = 22;
constexpr int kExitIo = 23;

int outcome_exit_code(Outcome outcome) {
    switch (outcome) {
        case Outcome::Success: return kExitSuccess;
        case Outcome::LostTracking: return kExitLostTracking;
        default: return kExitTimeout;
    }
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void apply_overrides(IniDocument& doc, const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + item + "' is not of the form section.key=value");
        const std::string path = item.substr(0, eq);
        const auto dot = path.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
            throw ConfigError("override '" + item + "' is not of the form section.key=value");
        doc.set(path.substr(0, dot), path.substr(dot + 1), item.substr(eq + 1));
    }
}

IniDocument load_config(const std::string& path, const std::vector<std::string>& overrides) {
    IniDocument doc = IniDocument::load(path);
    apply_overrides(doc, overrides);
    return doc;
}

fs::path make_run_dir(const std::string& out_base, const std::string& name) {
    const fs::path dir = fs::path(out_base) / name;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    return dir;
}

Vec2 parse_pair_arg(const std::string& text, const std::string& flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError(flag + " expects 'x,y', got '" + text + "'");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigError(flag + " expects 'x,y', got '" + text + "'");
    }
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

int cmd_simulate(const std::string& config_path, const std::string& out_base,
                 const std::vector<std::string>& overrides) {
    const IniDocument doc = load_config(config_path, overrides);
    const Scenario scenario = load_scenario(doc);
    const RunResult result = run_scenario(scenario);

    const std::string stem = fs::path(config_path).stem().string();
    const fs::path dir =
        make_run_dir(out_base, stem + "-s" + std::to_string(scenario.run.seed));
    write_trajectory_csv(result.trajectory, (dir / "trajectory.csv").string());
    write_metadata(run_metadata(scenario, result, iso_timestamp()),
                   (dir / "run_meta.ini").string());

    std::printf("outcome: %s  frames=%zu  path=%.3f m  min_inliers=%d\n",
                to_string(result.outcome), result.trajectory.size(), result.path_length,
                result.min_inliers);
    std::printf("wrote %s\n", dir.string().c_str());
    return outcome_exit_code(result.outcome);
}

FeatureSet load_image_features(const std::string& path, const Scenario& scenario) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read features file '" + path + "'");
    FeatureSet features;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_not_of("uvresponse, \t") == std::string::npos)
            continue;  // header row
        const auto c1 = line.find(',');
        if (c1 == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'u,v[,response]'");
        try {
            const double u = std::stod(line.substr(0, c1));
            const double v = std::stod(line.substr(c1 + 1));  // stops at the next comma if any
            features.push_back({u, v});
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'u,v[,response]'");
        }
    }
    if (features.size() > scenario.sensor.feature_cap)
        throw ConfigError(path + ": " + std::to_string(features.size()) +
                          " features exceed the configured cap of " +
                          std::to_string(scenario.sensor.feature_cap));
    for (const ImagePoint& p : features)
        if (!inside_sensor(p, scenario.rig))
            throw ConfigError(path + ": feature (" + format_number(p.x) + ", " +
                              format_number(p.y) + ") lies outside the sensor");
    for (std::size_t i = 0; i < features.size(); ++i)
        for (std::size_t j = i + 1; j < features.size(); ++j)
            if (std::abs(features[i].x - features[j].x) < 1e-9 &&
                std::abs(features[i].y - features[j].y) < 1e-9)
                throw ConfigError(path + ": duplicate feature coordinates at rows " +
                                  std::to_string(i + 1) + " and " + std::to_string(j + 1));
    return features;
}

int cmd_fieldmap(const std::string& config_path, const std::string& out_base,
                 const std::vector<std::string>& overrides, const std::string& pose_arg,
                 const std::string& features_path, int stride_arg) {
    IniDocument doc = load_config(config_path, overrides);
    if (stride_arg > 0) doc.set("fieldmap", "stride", std::to_string(stride_arg));
    const Scenario scenario = load_scenario(doc);

    Vec2 pose = scenario.fieldmap.pose.value_or(scenario.arena.start);
    if (!pose_arg.empty()) pose = parse_pair_arg(pose_arg, "--pose");
    if (!scenario.arena.contains(pose))
        throw ConfigError("fieldmap pose (" + format_number(pose.x) + ", " +
                          format_number(pose.y) + ") is outside the arena");

    std::string feature_source;
    FeatureSet features;
    if (!features_path.empty()) {
        features = load_image_features(features_path, scenario);
        feature_source = features_path;
    } else {
        const auto world = realize_features(scenario.arena, scenario.run.seed);
        Rng rng(scenario.run.seed);
        const VehicleState state{pose.x, pose.y, scenario.camera_height, 0.0};
        features = visible_features(state, world, scenario.rig, scenario.sensor.feature_cap,
                                    scenario.sensor.pixel_noise_sigma, rng)
                       .pixels();
        feature_source = "arena";
    }

    const Vec2 to_goal = scenario.arena.goal - pose;
    if (to_goal.norm() <= kTinyNorm)
        throw ConfigError("fieldmap pose coincides with the goal; no goal direction exists");
    const Vec2 goal_dir_img = project_goal_direction(to_goal.normalized(), scenario.rig);

    const GridSpec grid{scenario.rig.width_px, scenario.rig.height_px,
                        scenario.fieldmap.stride_px};
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("fieldmap.stride = " + std::to_string(grid.step_px) + ": " + e.what());
    }
    const FieldMap map =
        evaluate_grid(features, goal_dir_img, scenario.field, grid, worker_count());
    const ChargeHeatMap heat = charge_heatmap(features, scenario.rig.principal_point(),
                                              goal_dir_img, scenario.field);

    const std::string stem = fs::path(config_path).stem().string();
    const fs::path dir = make_run_dir(
        out_base, stem + "-s" + std::to_string(scenario.run.seed) + "-fieldmap");

    IniDocument meta = scenario_to_ini(scenario);
    meta.set("fieldmap", "pose", format_number(pose.x) + ", " + format_number(pose.y));
    meta.set("fieldmap", "feature_source", feature_source);
    meta.set("fieldmap", "generated_at", iso_timestamp());
    render_field_map(map, dir.string(), meta);
    render_charge_heatmap(heat, scenario.rig.width_px, scenario.rig.height_px, dir.string());

    int goal_friendly = 0, feature_friendly = 0, neutral = 0;
    for (const FieldCell& cell : map.cells) {
        goal_friendly += cell.label == RegionLabel::GoalFriendly;
        feature_friendly += cell.label == RegionLabel::FeatureFriendly;
        neutral += cell.label == RegionLabel::Neutral;
    }
    std::printf("fieldmap: %d x %d cells  goal_friendly=%d feature_friendly=%d neutral=%d\n",
                grid.cols(), grid.rows(), goal_friendly, feature_friendly, neutral);
    std::printf("wrote %s\n", dir.string().c_str());
    return kExitSuccess;
}

int cmd_sweep(const std::string& config_path, const std::string& out_base,
              const std::vector<std::string>& overrides, const std::string& parameter,
              const std::vector<double>& values, int repetitions, long seed_arg) {
    const IniDocument doc = load_config(config_path, overrides);
    const Scenario base = load_scenario(doc);

    SweepSpec spec;
    spec.parameter = parameter;
    spec.values = values;
    spec.repetitions = repetitions;
    spec.base_seed = seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg) : base.run.seed;
    try {
        spec.validate();
        Scenario probe = base;
        for (double v : spec.values) apply_field_parameter(probe, spec.parameter, v);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const SweepResult sweep = run_sweep(base, spec, worker_count());

    const std::string stem = fs::path(config_path).stem().string();
    const fs::path dir = make_run_dir(out_base, stem + "-sweep-" + spec.parameter + "-s" +
                                                    std::to_string(spec.base_seed));
    for (const SweepCell& cell : sweep.cells) {
        Scenario scenario = base;
        apply_field_parameter(scenario, spec.parameter, cell.value);
        scenario.run.seed = cell.seed;
        const fs::path cell_dir = make_run_dir(
            dir.string(), spec.parameter + "_" + format_number(cell.value) + "_rep" +
                              std::to_string(cell.repetition));
        write_trajectory_csv(cell.result.trajectory, (cell_dir / "trajectory.csv").string());
        write_metadata(run_metadata(scenario, cell.result, iso_timestamp()),
                       (cell_dir / "run_meta.ini").string());
    }
    const std::string summary = sweep_summary_csv(sweep, spec.parameter);
    {
        const std::string path = (dir / "summary.csv").string();
        auto out = featfield::detail::open_output(path, false);
        out << summary;
        featfield::detail::finish_output(out, path);
    }
    IniDocument meta = scenario_to_ini(base);
    meta.set("sweep", "parameter", spec.parameter);
    std::string joined;
    for (double v : spec.values) {
        if (!joined.empty()) joined += ", ";
        joined += format_number(v);
    }
    meta.set("sweep", "values", joined);
    meta.set("sweep", "repetitions", std::to_string(spec.repetitions));
    meta.set("sweep", "base_seed", std::to_string(spec.base_seed));
    meta.set("sweep", "generated_at", iso_timestamp());
    write_metadata(meta, (dir / "sweep_meta.ini").string());

    std::fputs(summary.c_str(), stdout);
    std::printf("wrote %s\n", dir.string().c_str());
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature-based potential field: navigation simulator and field mapper"};
    app.require_subcommand(1);

    std::string config_path, out_base = ".";
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "scenario config (.ini)")->required();
        cmd->add_option("--out", out_base, "output base directory")->capture_default_str();
        cmd->add_option("--set", overrides, "override config values, section.key=value")
            ->take_all();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
    add_common(simulate);

    CLI::App* fieldmap =
        app.add_subcommand("fieldmap", "render the charge heat-map and potential field map");
    add_common(fieldmap);
    std::string pose_arg, features_path;
    int stride_arg = 0;
    fieldmap->add_option("--pose", pose_arg, "evaluation pose 'x,y' in meters");
    fieldmap->add_option("--features", features_path,
                         "explicit image features CSV (u,v[,response]) instead of sensing");
    fieldmap->add_option("--stride", stride_arg, "grid stride in pixels");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one field parameter over many runs");
    add_common(sweep);
    std::string parameter;
    std::vector<double> values;
    int repetitions = 1;
    long seed_arg = -1;
    sweep->add_option("--param", parameter, "lambda | theta_cs_hat_deg | r | s")->required();
    sweep->add_option("--values", values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--reps", repetitions, "repetitions per value")->capture_default_str();
    sweep->add_option("--seed", seed_arg, "base seed (default: the config's run.seed)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_base, overrides);
        if (fieldmap->parsed())
            return cmd_fieldmap(config_path, out_base, overrides, pose_arg, features_path,
                                stride_arg);
        return cmd_sweep(config_path, out_base, overrides, parameter, values, repetitions,
                         seed_arg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::logic_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
