#pragma once

#include <optional>

#include "featfield/camera.hpp"
#include "featfield/field.hpp"

namespace featfield {

/**
 * @brief Feature direction at an evaluation point: charges, summed force,
 * normalized preference. nullopt when the field expresses none.
 */
inline std::optional<Vec2> feature_direction(const FeatureSet& features, ImagePoint eval_point,
                                             Vec2 goal_dir_img, const FieldParams& params) {
    const auto charges = make_charges(features, eval_point, goal_dir_img, params);
    return feature_velocity(total_force(charges, params), params);
}

/**
 * @brief Blend a goal direction with an already-computed feature direction
 * and return the planar body velocity at the requested speed.
 */
inline Vec2 command_from_directions(Vec2 goal_dir_img, std::optional<Vec2> feature_dir,
                                    const CameraRig& rig, const FieldParams& params, double speed) {
    if (!(speed > 0.0)) throw std::invalid_argument("command: speed must be > 0");
    const Vec2 blended = blend_command(goal_dir_img, feature_dir, params.goal_weight,
                                       params.force_epsilon);
    return image_to_body_direction(blended, rig) * speed;
}

/**
 * @brief Full pipeline: project the goal, charge the features, sum forces,
 * blend, and map the command back to the body frame at the given speed.
 */
inline Vec2 compute_command(const FeatureSet& features, ImagePoint eval_point, Vec2 goal_vel_body,
                            const CameraRig& rig, const FieldParams& params, double speed) {
    const Vec2 goal_dir_img = project_goal_direction(goal_vel_body, rig);
    const auto feature_dir = feature_direction(features, eval_point, goal_dir_img, params);
    return command_from_directions(goal_dir_img, feature_dir, rig, params, speed);
}

}  // namespace featfield
