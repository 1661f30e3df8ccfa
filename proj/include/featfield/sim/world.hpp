#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "featfield/rng.hpp"
#include "featfield/vec2.hpp"

namespace featfield::sim {

/// A visual landmark on the floor plane (z = 0).
struct WorldFeature {
    double x = 0.0;       ///< m
    double y = 0.0;       ///< m
    double response = 1.0;  ///< detector strength, drives the selection cap
};

/// Disk of randomly scattered features, expanded per run from the run seed.
struct ClusterSpec {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    int count = 0;
    double response_min = 1.0;
    double response_max = 1.0;
};

/// Floor arena with explicit features and/or cluster generators.
struct Arena {
    double width = 4.0;   ///< m
    double height = 3.0;  ///< m
    std::vector<WorldFeature> features;
    std::vector<ClusterSpec> clusters;
    Vec2 start{0.0, 0.0};
    Vec2 goal{0.0, 0.0};
    double goal_radius = 0.2;

    bool contains(const Vec2& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }

    void validate() const {
        if (!(width > 0.0 && height > 0.0))
            throw std::invalid_argument("arena: dimensions must be positive");
        if (!contains(start)) throw std::invalid_argument("arena: start is outside the bounds");
        if (!contains(goal)) throw std::invalid_argument("arena: goal is outside the bounds");
        if (!(goal_radius > 0.0)) throw std::invalid_argument("arena: goal radius must be > 0");
        for (const WorldFeature& f : features)
            if (!contains({f.x, f.y}))
                throw std::invalid_argument("arena: explicit feature outside the bounds");
        for (const ClusterSpec& c : clusters) {
            if (!(c.radius >= 0.0)) throw std::invalid_argument("arena: cluster radius < 0");
            if (c.count < 0) throw std::invalid_argument("arena: cluster count < 0");
            if (!(c.response_min > 0.0 && c.response_max >= c.response_min))
                throw std::invalid_argument("arena: cluster response range invalid");
        }
    }
};

/**
 * @brief Realize the arena's feature map for one run.
 *
 * Explicit features come first, then each cluster scatters its points
 * uniformly over a disk (clipped to the arena), deterministically from the
 * given seed.
 */
inline std::vector<WorldFeature> realize_features(const Arena& arena, std::uint64_t seed) {
    std::vector<WorldFeature> out = arena.features;
    Rng rng(seed ^ 0xfeedc0de12345678ULL);  // stream separate from the sensor noise
    for (const ClusterSpec& c : arena.clusters) {
        for (int i = 0; i < c.count; ++i) {
            const double radius = c.radius * std::sqrt(rng.uniform());
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            WorldFeature f;
            f.x = std::clamp(c.center_x + radius * std::cos(angle), 0.0, arena.width);
            f.y = std::clamp(c.center_y + radius * std::sin(angle), 0.0, arena.height);
            f.response = rng.uniform(c.response_min, c.response_max);
            out.push_back(f);
        }
    }
    return out;
}

/// Planar vehicle pose; height and yaw stay fixed for a run.
struct VehicleState {
    double x = 0.0;    ///< m
    double y = 0.0;    ///< m
    double z = 1.0;    ///< m, constant flight height
    double yaw = 0.0;  ///< rad, constant heading
};

}  // namespace featfield::sim
