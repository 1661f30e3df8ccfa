#pragma once

#include <cmath>

namespace featfield {

/// Norm below which a vector is treated as having no direction.
inline constexpr double kTinyNorm = 1e-12;

/**
 * @brief 2D vector, double precision.
 *
 * Used both for metric planar quantities (meters) and for image-plane
 * quantities (pixels), where x maps to the horizontal pixel coordinate u
 * and y to the vertical pixel coordinate v.
 */
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_squared() const { return x * x + y * y; }

    /// Unit vector in the same direction, or (0,0) when the norm is <= eps.
    Vec2 normalized(double eps = kTinyNorm) const {
        const double n = norm();
        if (n <= eps) return {0.0, 0.0};
        return {x / n, y / n};
    }

    /// Counter-clockwise rotation by angle (radians), x-right / y-up convention.
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

/// Image point in pixels: x is the horizontal coordinate u, y the vertical v.
using ImagePoint = Vec2;

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace featfield
