#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "featfield/camera.hpp"
#include "support/oracles.hpp"

using namespace featfield;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(NadirRig, FocalLengthFromHorizontalFov) {
    const CameraRig rig = make_nadir_rig(120.0, 720, 480, 30.0);
    // 360 / tan(60 deg), computed independently
    EXPECT_NEAR(rig.focal_x_px, 207.84609690826534, 1e-9);
    EXPECT_DOUBLE_EQ(rig.focal_y_px, rig.focal_x_px);
    EXPECT_DOUBLE_EQ(rig.principal_x_px, 360.0);
    EXPECT_DOUBLE_EQ(rig.principal_y_px, 240.0);
    EXPECT_NO_THROW(rig.validate());
}

TEST(RigValidation, RejectsBadRigs) {
    CameraRig rig = make_nadir_rig(120.0);
    rig.body_to_cam.m[0][0] = 2.0;  // not orthonormal
    EXPECT_THROW(rig.validate(), std::invalid_argument);

    rig = make_nadir_rig(120.0);
    rig.body_to_cam = Mat3::identity();  // forward-looking, not downward
    EXPECT_THROW(rig.validate(), std::invalid_argument);

    rig = make_nadir_rig(120.0);
    rig.principal_x_px = 800.0;
    EXPECT_THROW(rig.validate(), std::invalid_argument);

    rig = make_nadir_rig(120.0);
    rig.focal_y_px = 0.0;
    EXPECT_THROW(rig.validate(), std::invalid_argument);
}

TEST(GoalProjection, IdentityRotationAxisCases) {
    CameraRig rig;
    rig.focal_x_px = 310.0;
    rig.focal_y_px = 290.0;
    rig.principal_x_px = 360.0;
    rig.principal_y_px = 240.0;
    rig.body_to_cam = Mat3::identity();
    const Vec2 east = project_goal_direction({1.0, 0.0}, rig);
    EXPECT_NEAR(east.x, 1.0, 1e-15);
    EXPECT_NEAR(east.y, 0.0, 1e-15);
    // scaling does not change direction
    const Vec2 north = project_goal_direction({0.0, 2.0}, rig);
    EXPECT_NEAR(north.x, 0.0, 1e-15);
    EXPECT_NEAR(north.y, 1.0, 1e-15);
}

TEST(GoalProjection, NadirRigSignConvention) {
    const CameraRig rig = make_nadir_rig(120.0);
    // body +y (left) maps to image -v (up)
    const Vec2 left = project_goal_direction({0.0, 1.0}, rig);
    EXPECT_NEAR(left.x, 0.0, 1e-15);
    EXPECT_NEAR(left.y, -1.0, 1e-15);
}

TEST(GoalProjection, QuarterTurnAboutOpticalAxisMatchesMatrixOracle) {
    const CameraRig rig = make_nadir_rig(120.0, 720, 480, 30.0, /*axis_roll_rad=*/kPi / 2.0);
    const Vec2 dir = project_goal_direction({1.0, 0.0}, rig);

    // independent chain: K * Rz(90deg) * mount applied to (1,0,0)
    const double fx = 207.84609690826534;
    const double k[3][3] = {{fx, 0.0, 360.0}, {0.0, fx, 240.0}, {0.0, 0.0, 1.0}};
    const double rz[3][3] = {{0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const double mount[3][3] = {{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}};
    double rot[3][3], full[3][3];
    oracle::mat3_mul(rz, mount, rot);
    oracle::mat3_mul(k, rot, full);
    const double v[3] = {1.0, 0.0, 0.0};
    double img[3];
    oracle::mat3_apply(full, v, img);
    const double n = std::hypot(img[0], img[1]);

    EXPECT_NEAR(dir.x, img[0] / n, 1e-12);
    EXPECT_NEAR(dir.y, img[1] / n, 1e-12);
    // which is (0, 1) for this mounting
    EXPECT_NEAR(dir.x, 0.0, 1e-12);
    EXPECT_NEAR(dir.y, 1.0, 1e-12);
}

TEST(GoalProjection, RejectsZeroVelocity) {
    const CameraRig rig = make_nadir_rig(120.0);
    EXPECT_THROW(project_goal_direction({0.0, 0.0}, rig), std::invalid_argument);
}

TEST(GoalProjection, SignalsUnprojectableGoal) {
    // camera pitched so that body x maps onto the optical axis, principal point at the corner
    CameraRig rig;
    rig.focal_x_px = 300.0;
    rig.focal_y_px = 300.0;
    rig.principal_x_px = 0.0;
    rig.principal_y_px = 0.0;
    Mat3 pitched{};
    pitched.m[0][2] = -1.0;
    pitched.m[1][1] = 1.0;
    pitched.m[2][0] = 1.0;
    rig.body_to_cam = pitched;
    EXPECT_THROW(project_goal_direction({1.0, 0.0}, rig), std::domain_error);
}

TEST(BodyBackMap, RoundTripsPlanarDirections) {
    const CameraRig rig = make_nadir_rig(120.0);
    oracle::Rand rand(31u);
    for (int i = 0; i < 200; ++i) {
        const Vec2 body = Vec2{1.0, 0.0}.rotated(rand.uniform(0.0, 2.0 * kPi));
        const Vec2 img = project_goal_direction(body, rig);
        const Vec2 back = image_to_body_direction(img, rig);
        ASSERT_NEAR(back.x, body.x, 1e-12);
        ASSERT_NEAR(back.y, body.y, 1e-12);
    }
}

TEST(BodyBackMap, RejectsNearSingularRig) {
    CameraRig rig = make_nadir_rig(120.0);
    rig.focal_y_px = rig.focal_x_px * 1e7;  // condition number 1e7 on the planar map
    EXPECT_THROW(image_to_body_direction({1.0, 0.0}, rig), std::domain_error);
}

TEST(BodyPointProjection, OpticalAxisHitsPrincipalPoint) {
    const CameraRig rig = make_nadir_rig(120.0);
    const auto p = project_body_point({0.0, 0.0, -0.5}, rig);  // floor point under the camera
    ASSERT_TRUE(p.has_value());
    EXPECT_NEAR(p->x, rig.principal_x_px, 1e-12);
    EXPECT_NEAR(p->y, rig.principal_y_px, 1e-12);
}

TEST(BodyPointProjection, BehindCameraIsInvisible) {
    const CameraRig rig = make_nadir_rig(120.0);
    EXPECT_FALSE(project_body_point({0.0, 0.0, 0.5}, rig).has_value());
}

TEST(PlanarMatrix, NadirConditionNumberIsOne) {
    const CameraRig rig = make_nadir_rig(120.0);
    EXPECT_NEAR(planar_projection_matrix(rig).condition_number(), 1.0, 1e-12);
}
