#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "featfield/command.hpp"
#include "featfield/field.hpp"

namespace featfield {

/// Regular sampling of evaluation points over the sensor.
struct GridSpec {
    int width_px = 720;
    int height_px = 480;
    int step_px = 8;

    void validate() const {
        if (!(width_px > 0 && height_px > 0))
            throw std::invalid_argument("grid: sensor dimensions must be positive");
        if (!(step_px >= 1)) throw std::invalid_argument("grid: step must be >= 1");
        if (cols() < 2 || rows() < 2)
            throw std::invalid_argument("grid: step leaves fewer than 2 samples per axis");
    }

    int cols() const { return width_px / step_px; }
    int rows() const { return height_px / step_px; }

    /// Cell-center evaluation point of column i, row j.
    ImagePoint point(int i, int j) const {
        return {(i + 0.5) * step_px, (j + 0.5) * step_px};
    }
};

enum class RegionLabel { GoalFriendly, FeatureFriendly, Neutral };

/// Sign of the feature direction against the goal direction, with tolerance.
inline RegionLabel classify_region(std::optional<Vec2> feature_dir, Vec2 goal_dir_img,
                                   double tol = 1e-9) {
    if (!feature_dir) return RegionLabel::Neutral;
    const double along = feature_dir->dot(goal_dir_img);
    if (along > tol) return RegionLabel::GoalFriendly;
    if (along < -tol) return RegionLabel::FeatureFriendly;
    return RegionLabel::Neutral;
}

inline const char* to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::GoalFriendly: return "goal_friendly";
        case RegionLabel::FeatureFriendly: return "feature_friendly";
        default: return "neutral";
    }
}

struct FieldCell {
    ImagePoint eval_point;
    Vec2 force;                       ///< unnormalized total force, kept for rendering
    std::optional<Vec2> feature_dir;  ///< normalized direction, nullopt when below epsilon
    RegionLabel label = RegionLabel::Neutral;
};

/// Feature-velocity field sampled over the sensor, row-major cells.
struct FieldMap {
    GridSpec grid;
    Vec2 goal_dir_img;
    FieldParams params;
    std::size_t feature_count = 0;
    std::vector<FieldCell> cells;

    const FieldCell& at(int col, int row) const { return cells[row * grid.cols() + col]; }
};

/// Energies of one frame's features charged at a fixed evaluation point.
struct ChargeHeatMap {
    ImagePoint eval_point;
    std::vector<ImagePoint> positions;
    std::vector<double> energies;
};

/**
 * @brief Evaluate the feature velocity over every grid cell.
 *
 * Each cell runs the full charging/force pipeline at its own evaluation
 * point. Cells are independent; with workers > 1 they are computed in
 * parallel and the result is identical to the single-worker evaluation.
 */
inline FieldMap evaluate_grid(const FeatureSet& features, Vec2 goal_dir_img,
                              const FieldParams& params, const GridSpec& grid,
                              unsigned workers = 1) {
    grid.validate();
    params.validate();
    FieldMap map;
    map.grid = grid;
    map.goal_dir_img = goal_dir_img;
    map.params = params;
    map.feature_count = features.size();
    const int cols = grid.cols();
    const int rows = grid.rows();
    map.cells.resize(static_cast<std::size_t>(cols) * rows);

    auto eval_row = [&](int j) {
        for (int i = 0; i < cols; ++i) {
            FieldCell& cell = map.cells[static_cast<std::size_t>(j) * cols + i];
            cell.eval_point = grid.point(i, j);
            const auto charges = make_charges(features, cell.eval_point, goal_dir_img, params);
            cell.force = total_force(charges, params);
            cell.feature_dir = feature_velocity(cell.force, params);
            cell.label = classify_region(cell.feature_dir, goal_dir_img);
        }
    };

    if (workers <= 1) {
        for (int j = 0; j < rows; ++j) eval_row(j);
        return map;
    }

    std::atomic<int> next_row{0};
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(rows));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            for (int j = next_row.fetch_add(1); j < rows; j = next_row.fetch_add(1)) eval_row(j);
        });
    }
    for (auto& t : pool) t.join();
    return map;
}

/// Charge energies of the frame at one evaluation point (the principal point
/// in the standard case study).
inline ChargeHeatMap charge_heatmap(const FeatureSet& features, ImagePoint eval_point,
                                    Vec2 goal_dir_img, const FieldParams& params) {
    ChargeHeatMap heat;
    heat.eval_point = eval_point;
    heat.positions = features;
    heat.energies.reserve(features.size());
    for (const Charge& c : make_charges(features, eval_point, goal_dir_img, params))
        heat.energies.push_back(c.energy);
    return heat;
}

}  // namespace featfield
