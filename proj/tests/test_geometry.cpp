#include <gtest/gtest.h>

#include <numbers>

#include "depthrefine/error.hpp"
#include "depthrefine/geometry.hpp"
#include "test_util.hpp"

namespace depthrefine {
namespace {

using testing::eigen_matrix;
using testing::random_quaternion;
using testing::random_vec;
using testing::rotation_distance;
using testing::to_eigen;

constexpr double kPi = std::numbers::pi;

TEST(Quaternion, NormalizesAndCanonicalizesSign) {
  const auto q = UnitQuaternion::from_components(-2.0, 0.0, 0.0, 0.0);
  EXPECT_EQ(q.w(), 1.0);
  const auto r = UnitQuaternion::from_components(0.0, 0.0, -3.0, 4.0);
  EXPECT_DOUBLE_EQ(r.y(), 0.6);
  EXPECT_DOUBLE_EQ(r.z(), -0.8);
  EXPECT_THROW(UnitQuaternion::from_components(0, 0, 0, 0), Error);
}

TEST(QuatMul, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const auto q = random_quaternion(rng);
  EXPECT_EQ(quat_mul(UnitQuaternion{}, q), q);
  EXPECT_EQ(quat_mul(q, UnitQuaternion{}), q);
}

TEST(QuatMul, ElementaryAnglesAdd) {
  const auto half = UnitQuaternion::about_z(kPi / 2.0);
  EXPECT_LT(rotation_distance(quat_mul(half, half), UnitQuaternion::about_z(kPi)), 1e-12);
}

TEST(QuatMul, MatchesRotationMatrixProduct) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_quaternion(rng);
    const auto b = random_quaternion(rng);
    const Eigen::Matrix3d expected = eigen_matrix(a) * eigen_matrix(b);
    EXPECT_LT((eigen_matrix(quat_mul(a, b)) - expected).cwiseAbs().maxCoeff(), 1e-9);
    const double n = std::hypot(std::hypot(quat_mul(a, b).w(), quat_mul(a, b).x()),
                                std::hypot(quat_mul(a, b).y(), quat_mul(a, b).z()));
    EXPECT_NEAR(n, 1.0, 1e-12);
    EXPECT_GE(quat_mul(a, b).w(), 0.0);
  }
}

TEST(QuatMul, Associative) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_quaternion(rng), b = random_quaternion(rng), c = random_quaternion(rng);
    EXPECT_LT(rotation_distance(quat_mul(quat_mul(a, b), c), quat_mul(a, quat_mul(b, c))), 1e-9);
  }
}

TEST(Quaternion, MatrixRoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_quaternion(rng);
    const auto back = UnitQuaternion::from_matrix(q.to_matrix());
    EXPECT_LT(rotation_distance(q, back), 1e-12);
  }
}

TEST(Rotate, Examples) {
  const Vec3 v{1, 2, 3};
  EXPECT_EQ(rotate(UnitQuaternion{}, v), v);
  const Vec3 r = rotate(UnitQuaternion::about_z(kPi / 2.0), {1, 0, 0});
  EXPECT_NEAR(r.x, 0.0, 1e-15);
  EXPECT_NEAR(r.y, 1.0, 1e-15);
  EXPECT_NEAR(r.z, 0.0, 1e-15);
}

TEST(Rotate, PreservesNormAndMatchesMatrix) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 500; ++i) {
    const auto q = random_quaternion(rng);
    const Vec3 v = random_vec(rng, -3, 3);
    const Vec3 r = rotate(q, v);
    EXPECT_NEAR(r.norm(), v.norm(), 1e-9);
    EXPECT_LT((to_eigen(r) - eigen_matrix(q) * to_eigen(v)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Pose, ComposeAndInvert) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Pose a{random_vec(rng), random_quaternion(rng)};
    const Pose b{random_vec(rng), random_quaternion(rng)};
    const Vec3 v = random_vec(rng);
    EXPECT_LT(((a * b).transform(v) - a.transform(b.transform(v))).norm(), 1e-12);
    EXPECT_LT((a.inverse().transform(a.transform(v)) - v).norm(), 1e-12);
  }
}

TEST(SigmaTranslate, Examples) {
  const Vec3 a = sigma_translate({0.2, {0, 0, 1.0}});
  EXPECT_NEAR(a.z, 0.8, 1e-15);
  EXPECT_EQ(a.x, 0.0);
  const Vec3 b = sigma_translate({0.0, {0.3, 0, 0.4}});
  EXPECT_EQ(b, (Vec3{0.3, 0, 0.4}));
  const Vec3 c = sigma_translate({0.1, {0.3, 0, 0.4}});
  EXPECT_NEAR(c.x, 0.24, 1e-15);
  EXPECT_NEAR(c.y, 0.0, 1e-15);
  EXPECT_NEAR(c.z, 0.32, 1e-15);
}

TEST(SigmaTranslate, ZeroAnchorIsDegenerate) {
  try {
    sigma_translate({0.1, {0, 0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateRay);
  }
  EXPECT_THROW(scale_factor({0.1, {0, 0, 0}}), Error);
}

TEST(SigmaTranslate, CollinearWithShortenedNorm) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> frac(-0.95, 0.95);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p = random_vec(rng, -2, 2);
    const double sigma = frac(rng) * p.norm();
    const Vec3 q = sigma_translate({sigma, p});
    EXPECT_NEAR(q.norm(), p.norm() - sigma, 1e-12);
    EXPECT_LT(cross(p, q).norm(), 1e-12);
    EXPECT_GT(dot(p, q), 0.0);
  }
}

TEST(SigmaTranslate, NegatedSigmaIsTheInverse) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> frac(-0.9, 0.9);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p = random_vec(rng, -2, 2);
    const double sigma = frac(rng) * p.norm();
    const Vec3 q = sigma_translate({sigma, p});
    EXPECT_LT((sigma_translate({-sigma, q}) - p).norm(), 1e-12);
  }
}

TEST(ScaleFactor, Examples) {
  EXPECT_EQ(scale_factor({0.0, {0, 0, 1.0}}), 1.0);
  EXPECT_NEAR(scale_factor({0.2, {0, 0, 1.0}}), 0.8, 1e-15);
  EXPECT_NEAR(scale_factor({-0.1, {0, 0, 0.5}}), 1.2, 1e-15);
}

TEST(ScaleFactor, AffineDecreasingAndNormRatio) {
  std::mt19937_64 rng(14);
  const Vec3 p = random_vec(rng);
  double prev = 2.0;
  for (double s = -0.9; s <= 0.9; s += 0.05) {
    const double sigma = s * p.norm();
    const double mu = scale_factor({sigma, p});
    EXPECT_LT(mu, prev);
    prev = mu;
    EXPECT_NEAR(mu, sigma_translate({sigma, p}).norm() / p.norm(), 1e-12);
  }
  // Affine: second differences vanish.
  const auto mu = [&](double s) { return scale_factor({s, p}); };
  EXPECT_NEAR(mu(0.1) - 2 * mu(0.2) + mu(0.3), 0.0, 1e-15);
}

TEST(ApplySigmaToPose, Examples) {
  const auto q = UnitQuaternion::about_x(0.3);
  const Pose pose{{0, 0, 0.6}, q};
  const ScaledPose same = apply_sigma_to_pose(pose, 0.0);
  EXPECT_EQ(same.pose.position, pose.position);
  EXPECT_EQ(same.mu, 1.0);
  const ScaledPose moved = apply_sigma_to_pose(pose, 0.3);
  EXPECT_NEAR(moved.pose.position.z, 0.3, 1e-15);
  EXPECT_NEAR(moved.mu, 0.5, 1e-15);
  EXPECT_EQ(moved.pose.orientation, q);
}

TEST(ApplySigmaToPose, ScalesWorldPointsAboutCameraOrigin) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> frac(-0.8, 0.8);
  for (int i = 0; i < 500; ++i) {
    const Pose pose{random_vec(rng, -0.5, 0.5) + Vec3{0, 0, 1.0}, random_quaternion(rng)};
    const ScaledPose sp = apply_sigma_to_pose(pose, frac(rng) * pose.position.z);
    const Vec3 v = random_vec(rng, -0.1, 0.1);
    const Vec3 lhs = sp.pose.position + sp.mu * rotate(pose.orientation, v);
    const Vec3 rhs = sp.mu * (pose.position + rotate(pose.orientation, v));
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
  }
}

TEST(Project, Examples) {
  const CameraIntrinsics intr{500, 500, 320, 240, 640, 480};
  const Projection a = project(intr, {0, 0, 1});
  EXPECT_EQ(a.u, 320.0);
  EXPECT_EQ(a.v, 240.0);
  EXPECT_EQ(a.depth, 1.0);
  EXPECT_DOUBLE_EQ(project(intr, {0.1, 0, 1}).u, 370.0);
  try {
    project(intr, {0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BehindCamera);
  }
  EXPECT_THROW(project(intr, {0, 0, -1}), Error);
}

TEST(Project, ScalingThroughOriginKeepsPixel) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> mu(0.1, 5.0);
  const CameraIntrinsics intr = testing::vga();
  for (int i = 0; i < 500; ++i) {
    const Vec3 p = random_vec(rng, -0.3, 0.3) + Vec3{0, 0, 1.0};
    const double m = mu(rng);
    const Projection a = project(intr, p);
    const Projection b = project(intr, m * p);
    EXPECT_NEAR(a.u, b.u, 1e-9);
    EXPECT_NEAR(a.v, b.v, 1e-9);
    EXPECT_NEAR(b.depth, m * a.depth, 1e-12);
  }
}

// Every model vertex keeps its pixel under the sigma transform while its
// depth scales by mu.
TEST(Project, SigmaFamilyIsImageInvariant) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> frac(-0.8, 0.8);
  const CameraIntrinsics intr = testing::vga();
  for (int i = 0; i < 300; ++i) {
    const Pose pose{random_vec(rng, -0.2, 0.2) + Vec3{0, 0, 0.7}, random_quaternion(rng)};
    const ScaledPose sp = apply_sigma_to_pose(pose, frac(rng) * pose.position.z);
    for (int k = 0; k < 10; ++k) {
      const Vec3 v = random_vec(rng, -0.05, 0.05);
      const Projection a = project(intr, pose.position + rotate(pose.orientation, v));
      const Projection b = project(intr, sp.pose.position + sp.mu * rotate(pose.orientation, v));
      EXPECT_NEAR(a.u, b.u, 1e-6);
      EXPECT_NEAR(a.v, b.v, 1e-6);
      EXPECT_NEAR(b.depth / (sp.mu * a.depth), 1.0, 1e-9);
    }
  }
}

TEST(Intrinsics, Validation) {
  EXPECT_NO_THROW(testing::vga().validate());
  EXPECT_THROW((CameraIntrinsics{0, 600, 320, 240, 640, 480}.validate()), Error);
  EXPECT_THROW((CameraIntrinsics{600, 600, 640, 240, 640, 480}.validate()), Error);
  EXPECT_THROW((CameraIntrinsics{600, 600, 320, 0, 640, 480}.validate()), Error);
  EXPECT_THROW((CuboidDims{0.1, 0.0, 0.1}.validate()), Error);
}

}  // namespace
}  // namespace depthrefine
