#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "featfield/grid_map.hpp"
#include "featfield/ini.hpp"

namespace featfield {

/// Compact, locale-independent float formatting shared by all text outputs.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v + 0.0);  // folds -0 into 0
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("error while writing output file '" + path + "'");
}

}  // namespace detail

/// Binary portable pixmap, 8-bit RGB triples in row-major order.
inline void write_ppm(const std::string& path, int width, int height,
                      const std::vector<std::uint8_t>& rgb) {
    auto out = detail::open_output(path, true);
    out << "P6\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    detail::finish_output(out, path);
}

/// Binary portable graymap, one byte per pixel.
inline void write_pgm(const std::string& path, int width, int height,
                      const std::vector<std::uint8_t>& gray) {
    auto out = detail::open_output(path, true);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()),
              static_cast<std::streamsize>(gray.size()));
    detail::finish_output(out, path);
}

struct RegionColor {
    std::uint8_t r, g, b;
};

inline RegionColor region_color(RegionLabel label) {
    switch (label) {
        case RegionLabel::GoalFriendly: return {240, 200, 40};    // yellow
        case RegionLabel::FeatureFriendly: return {200, 50, 50};  // red
        default: return {235, 235, 235};                          // neutral gray
    }
}

/// One pixel per grid cell, colored by region label.
inline std::vector<std::uint8_t> rasterize_regions(const FieldMap& map) {
    const int cols = map.grid.cols();
    const int rows = map.grid.rows();
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(cols) * rows * 3);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            const RegionColor c = region_color(map.at(i, j).label);
            const std::size_t k = (static_cast<std::size_t>(j) * cols + i) * 3;
            rgb[k] = c.r;
            rgb[k + 1] = c.g;
            rgb[k + 2] = c.b;
        }
    return rgb;
}

/// Dark background with one bright dot per feature, intensity tracking energy.
inline std::vector<std::uint8_t> rasterize_heatmap(const ChargeHeatMap& heat, int width_px,
                                                   int height_px) {
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(width_px) * height_px, 20);
    const int dot = 2;
    for (std::size_t n = 0; n < heat.positions.size(); ++n) {
        const int cu = static_cast<int>(std::lround(heat.positions[n].x));
        const int cv = static_cast<int>(std::lround(heat.positions[n].y));
        const auto value =
            static_cast<std::uint8_t>(40 + std::lround(215.0 * heat.energies[n]));
        for (int dv = -dot; dv <= dot; ++dv)
            for (int du = -dot; du <= dot; ++du) {
                const int u = cu + du, v = cv + dv;
                if (u < 0 || u >= width_px || v < 0 || v >= height_px) continue;
                auto& px = gray[static_cast<std::size_t>(v) * width_px + u];
                px = std::max(px, value);
            }
    }
    return gray;
}

/**
 * @brief Emit the field-map triple into a directory: region raster
 * (field_map.ppm), arrow table (field_arrows.csv) and metadata
 * (fieldmap_meta.ini). `extra` sections are prepended to the metadata.
 */
inline void render_field_map(const FieldMap& map, const std::string& out_dir,
                             const IniDocument& extra = IniDocument{}) {
    write_ppm(out_dir + "/field_map.ppm", map.grid.cols(), map.grid.rows(),
              rasterize_regions(map));

    const std::string arrows_path = out_dir + "/field_arrows.csv";
    auto arrows = detail::open_output(arrows_path, false);
    arrows << "pc_u,pc_v,fx,fy,vfx,vfy,label\n";
    for (const FieldCell& cell : map.cells) {
        const Vec2 dir = cell.feature_dir.value_or(Vec2{0.0, 0.0});
        arrows << format_number(cell.eval_point.x) << ',' << format_number(cell.eval_point.y)
               << ',' << format_number(cell.force.x) << ',' << format_number(cell.force.y) << ','
               << format_number(dir.x) << ',' << format_number(dir.y) << ','
               << to_string(cell.label) << '\n';
    }
    detail::finish_output(arrows, arrows_path);

    IniDocument meta = extra;
    meta.set("field", "r", format_number(map.params.dead_zone_px));
    meta.set("field", "s", format_number(map.params.spread_px));
    meta.set("field", "theta_cs_hat_deg",
             format_number(map.params.neutral_angle_rad * 180.0 / std::numbers::pi));
    meta.set("field", "lambda", format_number(map.params.goal_weight));
    meta.set("fieldmap", "grid_cols", std::to_string(map.grid.cols()));
    meta.set("fieldmap", "grid_rows", std::to_string(map.grid.rows()));
    meta.set("fieldmap", "stride_px", std::to_string(map.grid.step_px));
    meta.set("fieldmap", "feature_count", std::to_string(map.feature_count));
    meta.set("fieldmap", "goal_dir_u", format_number(map.goal_dir_img.x));
    meta.set("fieldmap", "goal_dir_v", format_number(map.goal_dir_img.y));

    const std::string meta_path = out_dir + "/fieldmap_meta.ini";
    auto meta_out = detail::open_output(meta_path, false);
    meta_out << meta.serialize();
    detail::finish_output(meta_out, meta_path);
}

/**
 * @brief Emit the charge heat-map pair into a directory: raster
 * (charge_heatmap.pgm) and per-feature table (charges.csv).
 */
inline void render_charge_heatmap(const ChargeHeatMap& heat, int width_px, int height_px,
                                  const std::string& out_dir) {
    write_pgm(out_dir + "/charge_heatmap.pgm", width_px, height_px,
              rasterize_heatmap(heat, width_px, height_px));

    const std::string table_path = out_dir + "/charges.csv";
    auto table = detail::open_output(table_path, false);
    table << "u,v,energy\n";
    for (std::size_t n = 0; n < heat.positions.size(); ++n)
        table << format_number(heat.positions[n].x) << ',' << format_number(heat.positions[n].y)
              << ',' << format_number(heat.energies[n]) << '\n';
    detail::finish_output(table, table_path);
}

}  // namespace featfield
