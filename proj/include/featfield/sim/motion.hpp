#pragma once

#include <algorithm>
#include <stdexcept>

#include "featfield/sim/world.hpp"
#include "featfield/vec2.hpp"

namespace featfield::sim {

/**
 * @brief Euler-integrate the planar position by one step.
 *
 * The velocity norm is saturated at max_speed and the position is clamped to
 * the arena bounds; `clamped` reports whether clamping occurred.
 */
inline VehicleState step(const VehicleState& state, Vec2 world_velocity, double dt,
                         const Arena& arena, double max_speed, bool* clamped = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    if (!(max_speed > 0.0)) throw std::invalid_argument("step: max speed must be > 0");
    const double speed = world_velocity.norm();
    if (speed > max_speed) world_velocity *= max_speed / speed;
    VehicleState next = state;
    next.x = state.x + world_velocity.x * dt;
    next.y = state.y + world_velocity.y * dt;
    const double cx = std::clamp(next.x, 0.0, arena.width);
    const double cy = std::clamp(next.y, 0.0, arena.height);
    if (clamped) *clamped = (cx != next.x) || (cy != next.y);
    next.x = cx;
    next.y = cy;
    return next;
}

}  // namespace featfield::sim
