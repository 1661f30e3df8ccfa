#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "featfield/vec2.hpp"

namespace featfield {

/// Inlier image features of one frame, pixel coordinates.
using FeatureSet = std::vector<ImagePoint>;

/**
 * @brief Tunables of the feature potential field.
 *
 * Distances are in pixels, angles in radians. goal_weight blends the goal
 * direction against the feature direction in the commanded action.
 */
struct FieldParams {
    double dead_zone_px = 50.0;     ///< radius below which a charge exerts no force
    double spread_px = 150.0;       ///< width of the linear force ramp
    double neutral_angle_rad = 0.0; ///< central angle of the neutral circular segment
    double goal_weight = 0.45;      ///< convex weight on the goal direction, in [0,1]
    double force_epsilon = 1e-9;    ///< total-force norm below which no feature preference exists

    void validate() const {
        if (!(dead_zone_px >= 0.0)) throw std::invalid_argument("field: dead zone radius must be >= 0");
        if (!(spread_px > 0.0)) throw std::invalid_argument("field: spread must be > 0");
        if (!(neutral_angle_rad >= 0.0 && neutral_angle_rad < 2.0 * std::numbers::pi))
            throw std::invalid_argument("field: neutral segment angle must be in [0, 2*pi)");
        if (!(goal_weight >= 0.0 && goal_weight <= 1.0))
            throw std::invalid_argument("field: goal weight must be in [0,1]");
        if (!(force_epsilon > 0.0)) throw std::invalid_argument("field: force epsilon must be > 0");
    }
};

/**
 * @brief Cutoff angle of the attractive cone from the neutral-segment central angle.
 *
 * Features whose bearing deviates from the goal direction by more than the
 * returned angle carry zero energy. Result lies in (0, pi].
 */
inline double attraction_cutoff(double neutral_angle_rad) {
    if (!(neutral_angle_rad >= 0.0 && neutral_angle_rad < 2.0 * std::numbers::pi))
        throw std::invalid_argument("attraction_cutoff: angle must be in [0, 2*pi)");
    return std::numbers::pi - 0.5 * neutral_angle_rad;
}

/// Charging policy: linear decay of energy with angle, zero past the cutoff.
inline double charge_energy(double angle_rad, double cutoff_rad) {
    return angle_rad <= cutoff_rad ? 1.0 - angle_rad / cutoff_rad : 0.0;
}

/// A feature converted into a potential source.
struct Charge {
    Vec2 offset;    ///< feature position relative to the evaluation point, px
    double energy;  ///< potential energy in [0,1]
    double cutoff;  ///< attraction cutoff angle used when charging, rad
};

/**
 * @brief Convert a feature set into charges at an evaluation point.
 *
 * Energy decays linearly with the angle between the feature bearing and the
 * goal direction and is zero past the attraction cutoff. A feature that
 * coincides with the evaluation point gets angle zero (it cannot exert force
 * anyway, its distance being inside any dead zone).
 *
 * @param goal_dir_img unit goal direction in the image plane
 */
inline std::vector<Charge> make_charges(const FeatureSet& features, ImagePoint eval_point,
                                        Vec2 goal_dir_img, const FieldParams& params) {
    const double cutoff = attraction_cutoff(params.neutral_angle_rad);
    std::vector<Charge> charges;
    charges.reserve(features.size());
    for (const ImagePoint& feature : features) {
        const Vec2 offset = feature - eval_point;
        const double dist = offset.norm();
        double angle = 0.0;
        if (dist >= kTinyNorm) {
            // clamp absorbs floating-point drift outside [-1, 1]
            const double c = std::clamp(offset.dot(goal_dir_img) / dist, -1.0, 1.0);
            angle = std::acos(c);
        }
        charges.push_back({offset, charge_energy(angle, cutoff), cutoff});
    }
    return charges;
}

/**
 * @brief Force a single charge exerts at the evaluation point.
 *
 * Zero inside the dead zone, a linear ramp across the spread, then saturated
 * at the charge energy. The force points from the evaluation point toward
 * the feature.
 */
inline Vec2 charge_force(const Charge& charge, const FieldParams& params) {
    const double dist = charge.offset.norm();
    if (dist < params.dead_zone_px || dist < kTinyNorm) return {0.0, 0.0};
    const Vec2 bearing = charge.offset * (1.0 / dist);
    if (dist <= params.spread_px + params.dead_zone_px) {
        const double ramp = (dist - params.dead_zone_px) / params.spread_px;
        return bearing * (ramp * charge.energy);
    }
    return bearing * charge.energy;
}

/// Component-wise sum of all charge forces; empty input gives the zero vector.
inline Vec2 total_force(const std::vector<Charge>& charges, const FieldParams& params) {
    Vec2 sum{0.0, 0.0};
    for (const Charge& charge : charges) sum += charge_force(charge, params);
    return sum;
}

/**
 * @brief Normalize the total force into a feature direction.
 *
 * Returns nullopt when the force norm is at or below the epsilon threshold,
 * meaning the field expresses no feature preference.
 */
inline std::optional<Vec2> feature_velocity(Vec2 force, const FieldParams& params) {
    const double n = force.norm();
    if (n <= params.force_epsilon) return std::nullopt;
    return force * (1.0 / n);
}

/**
 * @brief Blend the goal direction with the feature direction.
 *
 * Returns the normalized convex combination. With no feature direction, or
 * when the combination cancels below epsilon (antiparallel inputs at equal
 * weight), the command falls back to the pure goal direction.
 */
inline Vec2 blend_command(Vec2 goal_dir_img, std::optional<Vec2> feature_dir, double goal_weight,
                          double force_epsilon = 1e-9) {
    if (!(goal_weight >= 0.0 && goal_weight <= 1.0))
        throw std::invalid_argument("blend_command: goal weight must be in [0,1]");
    if (!feature_dir) return goal_dir_img;
    const Vec2 mix = goal_dir_img * goal_weight + *feature_dir * (1.0 - goal_weight);
    if (mix.norm() <= force_epsilon) return goal_dir_img;
    return mix.normalized();
}

}  // namespace featfield
