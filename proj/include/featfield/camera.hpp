#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "featfield/vec2.hpp"

namespace featfield {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix, just enough for rig algebra.
struct Mat3 {
    double m[3][3]{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }

    Vec3 apply(const Vec3& v) const {
        Vec3 out{};
        for (int i = 0; i < 3; ++i)
            out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        return out;
    }

    Mat3 times(const Mat3& r) const {
        Mat3 out;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.m[i][j] = m[i][0] * r.m[0][j] + m[i][1] * r.m[1][j] + m[i][2] * r.m[2][j];
        return out;
    }

    Mat3 transposed() const {
        Mat3 out;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.m[i][j] = m[j][i];
        return out;
    }
};

/// Rotation about the z axis by angle (radians).
inline Mat3 rotation_z(double angle) {
    Mat3 r = Mat3::identity();
    const double c = std::cos(angle), s = std::sin(angle);
    r.m[0][0] = c; r.m[0][1] = -s;
    r.m[1][0] = s; r.m[1][1] = c;
    return r;
}

/// 2x2 matrix for the planar image<->body direction map.
struct Mat2 {
    double a{0}, b{0}, c{0}, d{0};  // [[a b],[c d]]

    double determinant() const { return a * d - b * c; }

    /// Ratio of the largest to smallest singular value.
    double condition_number() const {
        const double g11 = a * a + c * c;
        const double g12 = a * b + c * d;
        const double g22 = b * b + d * d;
        const double tr = g11 + g22;
        const double det = g11 * g22 - g12 * g12;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        const double smax2 = 0.5 * (tr + disc);
        const double smin2 = 0.5 * (tr - disc);
        if (smin2 <= 0.0) return std::numeric_limits<double>::infinity();
        return std::sqrt(smax2 / smin2);
    }

    Vec2 solve(const Vec2& rhs) const {
        const double det = determinant();
        return {(d * rhs.x - b * rhs.y) / det, (a * rhs.y - c * rhs.x) / det};
    }
};

/**
 * @brief Pinhole camera rig: intrinsics plus the body-to-camera transform.
 *
 * The intrinsic matrix has zero skew. body_to_cam rotates body coordinates
 * into the camera frame (x right, y down in the image, z along the optical
 * axis); cam_offset is the camera position offset in that frame. The rig is
 * expected to look downward: the optical axis must have a negative body-z
 * component.
 */
struct CameraRig {
    double focal_x_px = 0.0;
    double focal_y_px = 0.0;
    double principal_x_px = 0.0;
    double principal_y_px = 0.0;
    Mat3 body_to_cam = Mat3::identity();
    Vec3 cam_offset{0.0, 0.0, 0.0};
    int width_px = 720;
    int height_px = 480;
    double frame_rate_hz = 30.0;

    ImagePoint principal_point() const { return {principal_x_px, principal_y_px}; }

    void validate() const {
        if (!(focal_x_px > 0.0 && focal_y_px > 0.0))
            throw std::invalid_argument("camera: focal lengths must be > 0");
        if (!(width_px > 0 && height_px > 0))
            throw std::invalid_argument("camera: resolution must be positive");
        if (!(principal_x_px >= 0.0 && principal_x_px < width_px &&
              principal_y_px >= 0.0 && principal_y_px < height_px))
            throw std::invalid_argument("camera: principal point must lie inside the sensor");
        if (!(frame_rate_hz > 0.0))
            throw std::invalid_argument("camera: frame rate must be > 0");
        // orthonormality: ||R^T R - I||_max < 1e-9
        const Mat3 gram = body_to_cam.transposed().times(body_to_cam);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                if (std::abs(gram.m[i][j] - expect) >= 1e-9)
                    throw std::invalid_argument("camera: rotation is not orthonormal");
            }
        // optical axis in body coordinates is the third row of R transposed
        if (!(body_to_cam.m[2][2] < 0.0))
            throw std::invalid_argument("camera: optical axis must point downward");
    }
};

/**
 * @brief Downward-looking rig from a horizontal field of view.
 *
 * Square pixels, principal point at the sensor center, camera x axis aligned
 * with body x (forward), image v axis opposed to body y.
 */
inline CameraRig make_nadir_rig(double hfov_deg, int width_px = 720, int height_px = 480,
                                double frame_rate_hz = 30.0, double axis_roll_rad = 0.0) {
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
        throw std::invalid_argument("camera: horizontal fov must be in (0, 180) degrees");
    CameraRig rig;
    const double half = 0.5 * hfov_deg * std::numbers::pi / 180.0;
    rig.focal_x_px = 0.5 * width_px / std::tan(half);
    rig.focal_y_px = rig.focal_x_px;
    rig.principal_x_px = 0.5 * width_px;
    rig.principal_y_px = 0.5 * height_px;
    rig.width_px = width_px;
    rig.height_px = height_px;
    rig.frame_rate_hz = frame_rate_hz;
    Mat3 mount{};  // body x -> camera x, body y -> -camera y, body z -> -camera z
    mount.m[0][0] = 1.0;
    mount.m[1][1] = -1.0;
    mount.m[2][2] = -1.0;
    rig.body_to_cam = rotation_z(axis_roll_rad).times(mount);
    return rig;
}

/// First two rows of K*R restricted to planar body vectors (vx, vy, 0).
inline Mat2 planar_projection_matrix(const CameraRig& rig) {
    const Mat3& r = rig.body_to_cam;
    Mat2 m;
    m.a = rig.focal_x_px * r.m[0][0] + rig.principal_x_px * r.m[2][0];
    m.b = rig.focal_x_px * r.m[0][1] + rig.principal_x_px * r.m[2][1];
    m.c = rig.focal_y_px * r.m[1][0] + rig.principal_y_px * r.m[2][0];
    m.d = rig.focal_y_px * r.m[1][1] + rig.principal_y_px * r.m[2][1];
    return m;
}

/**
 * @brief Project the planar goal velocity into an image-plane direction.
 *
 * Applies K*R to (vx, vy, 0) -- the zero homogeneous coordinate annihilates
 * the translation -- and normalizes the first two components.
 *
 * @throws std::invalid_argument when the body velocity has no direction
 * @throws std::domain_error when the projection is degenerate
 */
inline Vec2 project_goal_direction(Vec2 goal_vel_body, const CameraRig& rig) {
    if (goal_vel_body.norm() <= kTinyNorm)
        throw std::invalid_argument("project_goal_direction: goal velocity has no direction");
    const Mat2 m = planar_projection_matrix(rig);
    const Vec2 img{m.a * goal_vel_body.x + m.b * goal_vel_body.y,
                   m.c * goal_vel_body.x + m.d * goal_vel_body.y};
    if (img.norm() < kTinyNorm)
        throw std::domain_error("project_goal_direction: goal direction is unprojectable");
    return img.normalized();
}

/**
 * @brief Map an image-plane direction back to a planar body direction.
 *
 * Inverts the 2x2 linear action of K*R on planar body vectors and
 * renormalizes.
 *
 * @throws std::domain_error when the rig is near-singular for planar motion
 */
inline Vec2 image_to_body_direction(Vec2 image_dir, const CameraRig& rig) {
    const Mat2 m = planar_projection_matrix(rig);
    if (!(m.condition_number() <= 1e6))
        throw std::domain_error("image_to_body_direction: degenerate rig (condition number > 1e6)");
    const Vec2 body = m.solve(image_dir);
    if (body.norm() < kTinyNorm)
        throw std::domain_error("image_to_body_direction: direction collapses to zero");
    return body.normalized();
}

/**
 * @brief Project a body-frame 3D point to the image plane.
 *
 * Returns nullopt when the point is not in front of the camera.
 */
inline std::optional<ImagePoint> project_body_point(const Vec3& point_body, const CameraRig& rig) {
    Vec3 cam = rig.body_to_cam.apply(point_body);
    cam[0] += rig.cam_offset[0];
    cam[1] += rig.cam_offset[1];
    cam[2] += rig.cam_offset[2];
    if (!(cam[2] > kTinyNorm)) return std::nullopt;
    return ImagePoint{rig.focal_x_px * cam[0] / cam[2] + rig.principal_x_px,
                      rig.focal_y_px * cam[1] / cam[2] + rig.principal_y_px};
}

/// True when a pixel lies inside the sensor, [0, width) x [0, height).
inline bool inside_sensor(const ImagePoint& p, const CameraRig& rig) {
    return p.x >= 0.0 && p.x < rig.width_px && p.y >= 0.0 && p.y < rig.height_px;
}

}  // namespace featfield
