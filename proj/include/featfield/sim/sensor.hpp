#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "featfield/camera.hpp"
#include "featfield/field.hpp"
#include "featfield/rng.hpp"
#include "featfield/sim/world.hpp"

namespace featfield::sim {

/// An image feature that still knows which world landmark produced it.
struct TrackedFeature {
    std::uint32_t world_id = 0;
    ImagePoint pixel;
    double response = 0.0;
};

/// One frame's sensed features, ordered by world id.
struct Observation {
    std::vector<TrackedFeature> tracked;

    FeatureSet pixels() const {
        FeatureSet out;
        out.reserve(tracked.size());
        for (const TrackedFeature& f : tracked) out.push_back(f.pixel);
        return out;
    }

    std::vector<std::uint32_t> ids() const {
        std::vector<std::uint32_t> out;
        out.reserve(tracked.size());
        for (const TrackedFeature& f : tracked) out.push_back(f.world_id);
        return out;
    }
};

/**
 * @brief Sense the floor features from the current pose.
 *
 * Projects every world feature through the rig, keeps those landing inside
 * the sensor, perturbs them with seeded gaussian pixel noise, and keeps the
 * `cap` highest-response ones. The result is ordered by world id, so noise
 * draws and output bytes replay exactly for a given generator state.
 */
inline Observation visible_features(const VehicleState& state,
                                    const std::vector<WorldFeature>& features,
                                    const CameraRig& rig, std::size_t cap,
                                    double pixel_noise_sigma, Rng& rng) {
    Observation obs;
    const double cos_yaw = std::cos(state.yaw);
    const double sin_yaw = std::sin(state.yaw);
    for (std::uint32_t id = 0; id < features.size(); ++id) {
        const WorldFeature& f = features[id];
        // world -> body: rotate the offset by -yaw, camera sits z above the floor
        const double dx = f.x - state.x;
        const double dy = f.y - state.y;
        const Vec3 body{cos_yaw * dx + sin_yaw * dy, -sin_yaw * dx + cos_yaw * dy, -state.z};
        const auto pixel = project_body_point(body, rig);
        if (!pixel || !inside_sensor(*pixel, rig)) continue;
        TrackedFeature t;
        t.world_id = id;
        t.pixel = *pixel;
        t.response = f.response;
        if (pixel_noise_sigma > 0.0) {
            t.pixel.x += pixel_noise_sigma * rng.gaussian();
            t.pixel.y += pixel_noise_sigma * rng.gaussian();
        }
        obs.tracked.push_back(t);
    }
    if (obs.tracked.size() > cap) {
        std::stable_sort(obs.tracked.begin(), obs.tracked.end(),
                         [](const TrackedFeature& a, const TrackedFeature& b) {
                             return a.response > b.response;
                         });
        obs.tracked.resize(cap);
        std::sort(obs.tracked.begin(), obs.tracked.end(),
                  [](const TrackedFeature& a, const TrackedFeature& b) {
                      return a.world_id < b.world_id;
                  });
    }
    return obs;
}

}  // namespace featfield::sim
