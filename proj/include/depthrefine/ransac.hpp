#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace depthrefine {

// One pixel seen by both the sensor and the renderer.
struct ResidualSample {
  std::uint32_t pixel = 0;      // row-major index
  double real_depth = 0.0;      // measured
  double virtual_depth = 0.0;   // rendered
};

struct RansacConfig {
  int iterations = 200;
  double inlier_threshold = 0.007;  // meters
  double min_inlier_fraction = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

// real ~= slope * virtual + intercept
struct LineModel {
  double slope = 1.0;
  double intercept = 0.0;
};

struct RansacResult {
  LineModel model;
  std::vector<std::uint32_t> inliers;  // sorted pixel indices
};

// Robust affine fit of real against virtual depth. Two-sample hypotheses are
// scored by the number of samples within the threshold, the best consensus
// set is refit by least squares and the final inliers are the samples within
// the threshold of the refit line. When the virtual depths of a hypothesis
// (or of the consensus set) coincide, the fit falls back to a line through
// the origin. Deterministic for a fixed seed.
//
// Throws InvalidArgument for fewer than two samples and DegenerateScene when
// the inlier fraction stays below cfg.min_inlier_fraction.
RansacResult ransac_inliers(std::span<const ResidualSample> samples, const RansacConfig& cfg);

}  // namespace depthrefine
