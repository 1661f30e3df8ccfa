#pragma once

#include <string>

#include "featfield/ini.hpp"
#include "featfield/render.hpp"
#include "featfield/sim/scenario.hpp"

namespace featfield::sim {

/// Trajectory serialized as CSV, one row per frame. Stable byte output.
inline std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "time,x,y,cmd_vx,cmd_vy,filt_u,filt_v,inliers,status\n";
    for (const FrameRecord& r : trajectory) {
        out += format_number(r.t);
        out += ',';
        out += format_number(r.position.x);
        out += ',';
        out += format_number(r.position.y);
        out += ',';
        out += format_number(r.command_body.x);
        out += ',';
        out += format_number(r.command_body.y);
        out += ',';
        out += format_number(r.filtered_dir.x);
        out += ',';
        out += format_number(r.filtered_dir.y);
        out += ',';
        out += std::to_string(r.inliers);
        out += ',';
        out += r.lost ? "LOST" : "OK";
        out += '\n';
    }
    return out;
}

inline void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    auto out = featfield::detail::open_output(path, false);
    out << trajectory_csv(trajectory);
    featfield::detail::finish_output(out, path);
}

/**
 * @brief Run metadata: the resolved scenario plus a [result] section.
 *
 * The timestamp is the only non-reproducible value and lives under the
 * single key result.generated_at.
 */
inline IniDocument run_metadata(const Scenario& scenario, const RunResult& result,
                                const std::string& timestamp) {
    IniDocument doc = scenario_to_ini(scenario);
    doc.set("result", "outcome", to_string(result.outcome));
    doc.set("result", "frames", std::to_string(result.trajectory.size()));
    doc.set("result", "elapsed_s",
            format_number(result.trajectory.empty() ? 0.0 : result.trajectory.back().t));
    doc.set("result", "path_length_m", format_number(result.path_length));
    doc.set("result", "min_inliers", std::to_string(result.min_inliers));
    doc.set("result", "clamp_count", std::to_string(result.clamp_count));
    if (!timestamp.empty()) doc.set("result", "generated_at", timestamp);
    return doc;
}

inline void write_metadata(const IniDocument& doc, const std::string& path) {
    auto out = featfield::detail::open_output(path, false);
    out << doc.serialize();
    featfield::detail::finish_output(out, path);
}

}  // namespace featfield::sim
