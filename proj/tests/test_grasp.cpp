#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <numbers>
#include <random>

#include "depthrefine/error.hpp"
#include "depthrefine/grasp.hpp"
#include "test_util.hpp"

namespace depthrefine {
namespace {

using testing::eigen_matrix;

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d expected_rotation(const UnitQuaternion& align, double alpha, double theta) {
  return eigen_matrix(align) * Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitZ()).toRotationMatrix() *
         Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()).toRotationMatrix();
}

TEST(Grasp, TopCandidateSitsAboveTheObject) {
  GraspSamplingConfig cfg;
  cfg.theta_samples = 1;
  const auto c = sample_candidates({0.1, -0.5, 0.04}, cfg);
  ASSERT_EQ(c.size(), 8u);
  for (const auto& g : c) {
    EXPECT_NEAR(g.position.x, 0.1, 1e-15);
    EXPECT_NEAR(g.position.y, -0.5, 1e-15);
    EXPECT_NEAR(g.position.z, 0.19, 1e-15);
    EXPECT_EQ(g.theta, 0.0);
    EXPECT_LT(testing::rotation_distance(g.orientation, UnitQuaternion::about_z(g.alpha)), 1e-12);
  }
}

TEST(Grasp, SideCandidateAtZeroAlpha) {
  GraspSamplingConfig cfg;
  cfg.theta_max = kPi / 2.0;
  cfg.theta_samples = 2;
  cfg.alpha_samples = 4;
  const auto c = sample_candidates({0, 0, 0.05}, cfg);
  // theta = pi/2, alpha = 0 is the fifth candidate.
  const GraspCandidate& g = c.at(4);
  EXPECT_EQ(g.alpha, 0.0);
  EXPECT_DOUBLE_EQ(g.theta, kPi / 2.0);
  EXPECT_NEAR(g.position.x, 0.0, 1e-15);
  EXPECT_NEAR(g.position.y, 0.15, 1e-15);
  EXPECT_NEAR(g.position.z, 0.05, 1e-15);
}

TEST(Grasp, CandidatesLieOnTheSphere) {
  GraspSamplingConfig cfg;
  cfg.alpha_samples = 24;
  cfg.theta_samples = 12;
  cfg.theta_max = kPi;
  cfg.table_height = -1.0;
  const Vec3 center{0.3, -0.2, 0.1};
  const auto c = sample_candidates(center, cfg);
  ASSERT_EQ(c.size(), 24u * 12u);
  for (const auto& g : c) EXPECT_NEAR((g.position - center).norm(), cfg.radius, 1e-9);
}

TEST(Grasp, OrientationMatchesMatrixProduct) {
  std::mt19937_64 rng(61);
  GraspSamplingConfig cfg;
  cfg.alpha_samples = 7;
  cfg.theta_samples = 5;
  cfg.table_height = -1.0;
  for (int i = 0; i < 20; ++i) {
    cfg.approach_alignment = testing::random_quaternion(rng);
    for (const auto& g : sample_candidates({0, 0, 0}, cfg)) {
      const Eigen::Matrix3d expected = expected_rotation(cfg.approach_alignment, g.alpha, g.theta);
      EXPECT_LT((eigen_matrix(g.orientation) - expected).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Grasp, OrderingAndAngles) {
  GraspSamplingConfig cfg;
  const auto c = sample_candidates({0, 0, 0.05}, cfg);
  ASSERT_EQ(c.size(), 32u);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 8; ++k) {
      const GraspCandidate& g = c[static_cast<std::size_t>(j * 8 + k)];
      EXPECT_DOUBLE_EQ(g.alpha, 2 * kPi * k / 8);
      EXPECT_DOUBLE_EQ(g.theta, (kPi / 3) * j / 3);
    }
  }
}

TEST(Grasp, TableFilter) {
  GraspSamplingConfig cfg;
  cfg.theta_max = kPi;
  cfg.theta_samples = 5;  // 0, 45, 90, 135, 180 degrees
  const auto c = sample_candidates({0, 0, 0.05}, cfg);
  for (const auto& g : c) EXPECT_GE(g.position.z, 0.0);
  // 135 and 180 degree rings are below the table; the 90 degree ring is at
  // z = 0.05.
  EXPECT_EQ(c.size(), 3u * 8u);
}

TEST(Grasp, NoFeasibleCandidate) {
  GraspSamplingConfig cfg;
  cfg.table_height = 1.0;
  try {
    sample_candidates({0, 0, 0.05}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFeasibleCandidate);
  }
}

TEST(Grasp, InvalidConfig) {
  GraspSamplingConfig cfg;
  cfg.radius = 0.0;
  EXPECT_THROW(sample_candidates({}, cfg), Error);
  cfg = {};
  cfg.alpha_samples = 0;
  EXPECT_THROW(sample_candidates({}, cfg), Error);
}

}  // namespace
}  // namespace depthrefine
