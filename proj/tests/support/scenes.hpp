#pragma once

// Shared synthetic scenes for map-level tests.

#include <vector>

#include "featfield/field.hpp"
#include "featfield/vec2.hpp"
#include "support/oracles.hpp"

namespace scenes {

struct OffAxisCluster {
    featfield::FeatureSet features;
    featfield::Vec2 goal_dir_img;   // unit, up-right in image coordinates
    featfield::Vec2 cluster_center;
    double cluster_radius;
};

// Dense feature disk left of the image center with the goal direction toward
// the top-right corner: produces both goal-friendly and feature-friendly
// regions in the potential field map.
inline OffAxisCluster make_offaxis_cluster_scene(int count = 80, unsigned seed = 2024) {
    OffAxisCluster scene;
    scene.cluster_center = {190.0, 300.0};
    scene.cluster_radius = 70.0;
    scene.goal_dir_img = featfield::Vec2{1.0, -1.0}.normalized();
    oracle::Rand rand(seed);
    while (scene.features.size() < static_cast<std::size_t>(count)) {
        const double dx = rand.uniform(-1.0, 1.0) * scene.cluster_radius;
        const double dy = rand.uniform(-1.0, 1.0) * scene.cluster_radius;
        if (dx * dx + dy * dy > scene.cluster_radius * scene.cluster_radius) continue;
        scene.features.push_back(scene.cluster_center + featfield::Vec2{dx, dy});
    }
    return scene;
}

}  // namespace scenes
