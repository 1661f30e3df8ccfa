#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "featfield/camera.hpp"
#include "featfield/command.hpp"
#include "featfield/field.hpp"
#include "featfield/ini.hpp"
#include "featfield/render.hpp"
#include "featfield/rng.hpp"
#include "featfield/sim/filter.hpp"
#include "featfield/sim/motion.hpp"
#include "featfield/sim/sensor.hpp"
#include "featfield/sim/tracker.hpp"
#include "featfield/sim/world.hpp"

namespace featfield::sim {

struct ControllerParams {
    double max_speed = 0.3;   ///< m/s, also the commanded speed magnitude
    double cutoff_hz = 20.0;  ///< low-pass cutoff on the feature direction

    void validate() const {
        if (!(max_speed > 0.0)) throw std::invalid_argument("controller: max_speed must be > 0");
        if (!(cutoff_hz > 0.0)) throw std::invalid_argument("controller: cutoff_hz must be > 0");
    }
};

struct SensorParams {
    std::size_t feature_cap = 100;   ///< keep this many highest-response features
    double pixel_noise_sigma = 0.5;  ///< px

    void validate() const {
        if (feature_cap < 1) throw std::invalid_argument("camera: feature_cap must be >= 1");
        if (!(pixel_noise_sigma >= 0.0))
            throw std::invalid_argument("camera: pixel_noise_sigma must be >= 0");
    }
};

struct RunParams {
    std::uint64_t seed = 1;
    double max_time = 30.0;  ///< s

    void validate() const {
        if (!(max_time > 0.0)) throw std::invalid_argument("run: max_time must be > 0");
    }
};

/// Optional field-map rendering defaults carried in the config.
struct FieldMapParams {
    int stride_px = 8;
    std::optional<Vec2> pose;  ///< evaluation pose; arena start when absent
};

/// Everything one closed-loop run needs.
struct Scenario {
    Arena arena;
    double camera_height = 0.5;  ///< m, constant flight height
    CameraRig rig = make_nadir_rig(120.0);
    SensorParams sensor;
    FieldParams field;
    ControllerParams controller;
    TrackerParams tracker;
    RunParams run;
    FieldMapParams fieldmap;

    void validate() const {
        arena.validate();
        if (!(camera_height > 0.0))
            throw std::invalid_argument("camera: height must be > 0");
        rig.validate();
        sensor.validate();
        field.validate();
        controller.validate();
        tracker.validate();
        run.validate();
        if (fieldmap.stride_px < 1)
            throw std::invalid_argument("fieldmap: stride must be >= 1");
    }
};

namespace detail {

inline void require_count(const IniDocument& doc, const IniDocument::Entry& e,
                          std::string_view section, std::size_t lo, std::size_t hi,
                          std::size_t got) {
    if (got < lo || got > hi)
        throw ConfigError(doc.origin() + ":" + std::to_string(e.line) + ": key '" +
                          std::string(section) + "." + e.key + "' expects " +
                          std::to_string(lo) + (lo == hi ? "" : ".." + std::to_string(hi)) +
                          " comma-separated numbers, got " + std::to_string(got));
}

inline Vec2 get_pair(const IniDocument& doc, std::string_view section, std::string_view key) {
    const auto entries = doc.all(section, key);
    if (entries.empty())
        throw ConfigError(doc.origin() + ": missing required key '" + std::string(section) + "." +
                          std::string(key) + "'");
    const auto values = doc.split_doubles(entries.front(), section);
    require_count(doc, entries.front(), section, 2, 2, values.size());
    return {values[0], values[1]};
}

inline void check_known_keys(const IniDocument& doc, std::string_view section,
                             std::initializer_list<std::string_view> allowed) {
    const auto* s = doc.find(section);
    if (!s) return;
    for (const auto& e : s->entries) {
        bool known = false;
        for (std::string_view k : allowed)
            if (e.key == k) { known = true; break; }
        if (!known)
            throw ConfigError(doc.origin() + ":" + std::to_string(e.line) + ": unknown key '" +
                              std::string(section) + "." + e.key + "'");
    }
}

}  // namespace detail

/**
 * @brief Build a scenario from a parsed config document.
 *
 * Sections [arena] and [camera] are required; everything else falls back to
 * defaults. Diagnostics name the offending key and line.
 */
inline Scenario load_scenario(const IniDocument& doc) {
    for (const char* name : {"arena", "camera"})
        if (!doc.find(name))
            throw ConfigError(doc.origin() + ": missing required section '[" +
                              std::string(name) + "]'");
    for (const auto& s : doc.sections()) {
        static constexpr const char* known[] = {"arena",      "features", "camera", "field",
                                                "controller", "tracker",  "run",    "fieldmap"};
        bool ok = false;
        for (const char* k : known)
            if (s.name == k) { ok = true; break; }
        if (!ok)
            throw ConfigError(doc.origin() + ":" + std::to_string(s.line) +
                              ": unknown section '[" + s.name + "]'");
    }
    detail::check_known_keys(doc, "arena", {"size", "start", "goal", "goal_radius"});
    detail::check_known_keys(doc, "features", {"feature", "cluster"});
    detail::check_known_keys(doc, "camera",
                             {"height", "fov_deg", "resolution", "frame_rate_hz",
                              "pixel_noise_sigma", "feature_cap"});
    detail::check_known_keys(doc, "field",
                             {"r", "s", "theta_cs_hat_deg", "lambda", "force_epsilon"});
    detail::check_known_keys(doc, "controller", {"max_speed", "cutoff_hz"});
    detail::check_known_keys(doc, "tracker", {"min_inliers", "patience"});
    detail::check_known_keys(doc, "run", {"seed", "max_time"});
    detail::check_known_keys(doc, "fieldmap", {"stride", "pose"});

    Scenario sc;
    const Vec2 size = detail::get_pair(doc, "arena", "size");
    sc.arena.width = size.x;
    sc.arena.height = size.y;
    sc.arena.start = detail::get_pair(doc, "arena", "start");
    sc.arena.goal = detail::get_pair(doc, "arena", "goal");
    sc.arena.goal_radius = doc.get_double("arena", "goal_radius", 0.2);

    for (const auto& e : doc.all("features", "feature")) {
        const auto v = doc.split_doubles(e, "features");
        detail::require_count(doc, e, "features", 2, 3, v.size());
        sc.arena.features.push_back({v[0], v[1], v.size() > 2 ? v[2] : 1.0});
    }
    for (const auto& e : doc.all("features", "cluster")) {
        const auto v = doc.split_doubles(e, "features");
        detail::require_count(doc, e, "features", 4, 6, v.size());
        ClusterSpec c;
        c.center_x = v[0];
        c.center_y = v[1];
        c.radius = v[2];
        c.count = static_cast<int>(v[3]);
        c.response_min = v.size() > 4 ? v[4] : 1.0;
        c.response_max = v.size() > 5 ? v[5] : c.response_min;
        sc.arena.clusters.push_back(c);
    }

    sc.camera_height = doc.get_double("camera", "height");
    int width_px = 720, height_px = 480;
    if (doc.has("camera", "resolution")) {
        const auto e = doc.all("camera", "resolution").front();
        const auto v = doc.split_doubles(e, "camera");
        detail::require_count(doc, e, "camera", 2, 2, v.size());
        width_px = static_cast<int>(v[0]);
        height_px = static_cast<int>(v[1]);
    }
    sc.rig = make_nadir_rig(doc.get_double("camera", "fov_deg", 120.0), width_px, height_px,
                            doc.get_double("camera", "frame_rate_hz", 30.0));
    sc.sensor.pixel_noise_sigma = doc.get_double("camera", "pixel_noise_sigma", 0.5);
    sc.sensor.feature_cap = static_cast<std::size_t>(doc.get_int("camera", "feature_cap", 100));

    sc.field.dead_zone_px = doc.get_double("field", "r", 50.0);
    sc.field.spread_px = doc.get_double("field", "s", 150.0);
    sc.field.neutral_angle_rad =
        doc.get_double("field", "theta_cs_hat_deg", 30.0) * std::numbers::pi / 180.0;
    sc.field.goal_weight = doc.get_double("field", "lambda", 0.45);
    sc.field.force_epsilon = doc.get_double("field", "force_epsilon", 1e-9);

    sc.controller.max_speed = doc.get_double("controller", "max_speed", 0.3);
    sc.controller.cutoff_hz = doc.get_double("controller", "cutoff_hz", 20.0);

    sc.tracker.min_inliers = static_cast<int>(doc.get_int("tracker", "min_inliers", 8));
    sc.tracker.patience = static_cast<int>(doc.get_int("tracker", "patience", 15));

    sc.run.seed = static_cast<std::uint64_t>(doc.get_int("run", "seed", 1));
    sc.run.max_time = doc.get_double("run", "max_time", 30.0);

    sc.fieldmap.stride_px = static_cast<int>(doc.get_int("fieldmap", "stride", 8));
    if (doc.has("fieldmap", "pose")) sc.fieldmap.pose = detail::get_pair(doc, "fieldmap", "pose");

    try {
        sc.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(doc.origin() + ": " + err.what());
    }
    return sc;
}

/// Resolved scenario re-emitted in the config schema (defaults materialized).
inline IniDocument scenario_to_ini(const Scenario& sc) {
    IniDocument doc;
    doc.set("arena", "size", format_number(sc.arena.width) + ", " + format_number(sc.arena.height));
    doc.set("arena", "start",
            format_number(sc.arena.start.x) + ", " + format_number(sc.arena.start.y));
    doc.set("arena", "goal", format_number(sc.arena.goal.x) + ", " + format_number(sc.arena.goal.y));
    doc.set("arena", "goal_radius", format_number(sc.arena.goal_radius));
    doc.set("camera", "height", format_number(sc.camera_height));
    doc.set("camera", "fov_deg",
            format_number(2.0 * std::atan(0.5 * sc.rig.width_px / sc.rig.focal_x_px) * 180.0 /
                          std::numbers::pi));
    doc.set("camera", "resolution",
            std::to_string(sc.rig.width_px) + ", " + std::to_string(sc.rig.height_px));
    doc.set("camera", "frame_rate_hz", format_number(sc.rig.frame_rate_hz));
    doc.set("camera", "pixel_noise_sigma", format_number(sc.sensor.pixel_noise_sigma));
    doc.set("camera", "feature_cap", std::to_string(sc.sensor.feature_cap));
    doc.set("field", "r", format_number(sc.field.dead_zone_px));
    doc.set("field", "s", format_number(sc.field.spread_px));
    doc.set("field", "theta_cs_hat_deg",
            format_number(sc.field.neutral_angle_rad * 180.0 / std::numbers::pi));
    doc.set("field", "lambda", format_number(sc.field.goal_weight));
    doc.set("field", "force_epsilon", format_number(sc.field.force_epsilon));
    doc.set("controller", "max_speed", format_number(sc.controller.max_speed));
    doc.set("controller", "cutoff_hz", format_number(sc.controller.cutoff_hz));
    doc.set("tracker", "min_inliers", std::to_string(sc.tracker.min_inliers));
    doc.set("tracker", "patience", std::to_string(sc.tracker.patience));
    doc.set("run", "seed", std::to_string(sc.run.seed));
    doc.set("run", "max_time", format_number(sc.run.max_time));
    return doc;
}

enum class Outcome { Success, LostTracking, Timeout };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Success: return "SUCCESS";
        case Outcome::LostTracking: return "LOST_TRACKING";
        default: return "TIMEOUT";
    }
}

/// One frame of a run.
struct FrameRecord {
    double t = 0.0;
    Vec2 position;      ///< m, world frame
    Vec2 command_body;  ///< m/s, body frame
    Vec2 filtered_dir;  ///< filtered feature direction, (0,0) when absent
    int inliers = 0;
    bool lost = false;
};

using Trajectory = std::vector<FrameRecord>;

struct RunResult {
    Outcome outcome = Outcome::Timeout;
    Trajectory trajectory;
    double path_length = 0.0;
    int min_inliers = 0;
    int clamp_count = 0;
};

/**
 * @brief Closed-loop run: sense, track, blend, filter, integrate.
 *
 * Per frame the goal velocity is the unit vector toward the goal, the field
 * is evaluated at the principal point on the sensed features, the feature
 * direction is low-pass filtered before blending, and the command is mapped
 * back to the body frame at max speed. Deterministic for a given seed.
 */
inline RunResult run_scenario(const Scenario& sc) {
    sc.validate();
    const auto features = realize_features(sc.arena, sc.run.seed);
    Rng rng(sc.run.seed);
    const double dt = 1.0 / sc.rig.frame_rate_hz;
    DirectionFilter filter(lowpass_alpha(dt, sc.controller.cutoff_hz), sc.field.force_epsilon);
    TrackerState tracker;
    VehicleState state{sc.arena.start.x, sc.arena.start.y, sc.camera_height, 0.0};

    RunResult result;
    result.min_inliers = std::numeric_limits<int>::max();
    for (int frame = 0;; ++frame) {
        const double t = frame / sc.rig.frame_rate_hz;
        const Observation obs = visible_features(state, features, sc.rig, sc.sensor.feature_cap,
                                                 sc.sensor.pixel_noise_sigma, rng);
        const auto ids = obs.ids();
        int inliers;
        if (frame == 0) {
            tracker.previous_ids = ids;  // bootstrap: the first frame tracks itself
            inliers = static_cast<int>(ids.size());
        } else {
            inliers = track_step(tracker, ids, sc.tracker);
        }
        result.min_inliers = std::min(result.min_inliers, inliers);

        FrameRecord rec;
        rec.t = t;
        rec.position = {state.x, state.y};
        rec.inliers = inliers;
        rec.lost = tracker.lost;

        if (tracker.lost) {
            result.trajectory.push_back(rec);
            result.outcome = Outcome::LostTracking;
            break;
        }
        if (distance(rec.position, sc.arena.goal) <= sc.arena.goal_radius) {
            result.trajectory.push_back(rec);
            result.outcome = Outcome::Success;
            break;
        }
        if (t >= sc.run.max_time) {
            result.trajectory.push_back(rec);
            result.outcome = Outcome::Timeout;
            break;
        }

        const Vec2 to_goal = sc.arena.goal - rec.position;
        const Vec2 goal_body = to_goal.rotated(-state.yaw).normalized();
        const Vec2 goal_dir_img = project_goal_direction(goal_body, sc.rig);
        const auto raw_dir =
            feature_direction(obs.pixels(), sc.rig.principal_point(), goal_dir_img, sc.field);
        const auto filtered = filter.update(raw_dir);
        rec.filtered_dir = filtered.value_or(Vec2{0.0, 0.0});

        const Vec2 blended =
            blend_command(goal_dir_img, filtered, sc.field.goal_weight, sc.field.force_epsilon);
        rec.command_body = image_to_body_direction(blended, sc.rig) * sc.controller.max_speed;

        bool clamped = false;
        const Vec2 world_vel = rec.command_body.rotated(state.yaw);
        state = step(state, world_vel, dt, sc.arena, sc.controller.max_speed, &clamped);
        if (clamped) ++result.clamp_count;
        result.path_length += distance(rec.position, {state.x, state.y});
        result.trajectory.push_back(rec);
    }
    if (result.min_inliers == std::numeric_limits<int>::max()) result.min_inliers = 0;
    return result;
}

}  // namespace featfield::sim
