#pragma once

#include <numbers>
#include <vector>

#include "depthrefine/geometry.hpp"

namespace depthrefine {

struct GraspSamplingConfig {
  double radius = 0.15;  // meters
  int alpha_samples = 8;
  int theta_samples = 4;
  double theta_max = std::numbers::pi / 3.0;
  // Aligns the end-effector approach vector with world z. Robot specific.
  UnitQuaternion approach_alignment;
  double table_height = 0.0;  // candidates below this world z are dropped

  void validate() const;
};

struct GraspCandidate {
  Vec3 position;                // world frame
  UnitQuaternion orientation;   // end effector in world frame
  double alpha = 0.0;
  double theta = 0.0;
};

// Pre-grasp poses on a sphere around the object:
//   position    = center + r * (sin(theta) sin(alpha), sin(theta) cos(alpha), cos(theta))
//   orientation = approach_alignment * Qz(alpha) * Qy(theta)
// alpha_k = 2 pi k / alpha_samples, theta_j = theta_max * j / (theta_samples - 1)
// (theta_j = 0 for a single sample). Ordered by theta, then alpha.
//
// Throws NoFeasibleCandidate when the table filter removes every candidate.
std::vector<GraspCandidate> sample_candidates(const Vec3& refined_position, const GraspSamplingConfig& cfg);

}  // namespace depthrefine
