#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "depthrefine/depth_map.hpp"
#include "depthrefine/geometry.hpp"
#include "depthrefine/mesh.hpp"
#include "depthrefine/ransac.hpp"

namespace depthrefine {

struct RefineConfig {
  // sigma is searched in [-bound_fraction * p_z, +bound_fraction * p_z].
  double bound_fraction = 0.8;
  double sigma_tolerance = 1e-4;  // meters
  int grid_size = 33;
  RansacConfig ransac;

  void validate() const;
};

struct RefinementResult {
  double sigma_opt = 0.0;
  double mu_opt = 1.0;
  Pose refined_pose;
  CuboidDims estimated_dims;
  PixelSet inlier_mask;
  double rms_residual = 0.0;     // meters
  double objective_value = 0.0;  // meters^2
  std::size_t sample_count = 0;  // pixels valid in both maps at sigma = 0
  int evaluations = 0;           // renders performed by the sigma search
};

// Mean squared depth residual between the real map and the mesh rendered at
// apply_sigma_to_pose(pose, sigma), over pixels valid in both maps (and in
// the mask, when one is given).
class DepthObjective {
 public:
  DepthObjective(const TriangleMesh& mesh, const Pose& pose, const CameraIntrinsics& intr, const DepthMap& real,
                 std::vector<std::uint8_t> mask = {});

  // Throws NoOverlap when no pixel qualifies, InvalidArgument when
  // |sigma| >= |pose.position|.
  double operator()(double sigma) const;

 private:
  const TriangleMesh& mesh_;
  Pose pose_;
  CameraIntrinsics intr_;
  const DepthMap& real_;
  std::vector<std::uint8_t> mask_;
};

double objective(double sigma, const TriangleMesh& mesh, const Pose& pose, const CameraIntrinsics& intr,
                 const DepthMap& real, const PixelSet* inliers = nullptr);

// Searches the scale along the viewing ray of `coarse` that best explains the
// real depth map, then updates position and dimensions accordingly.
//
// Steps: render at sigma = 0, pair its support with valid real pixels, drop
// outliers with RANSAC (the inlier set stays fixed afterwards), scan a uniform
// sigma grid across the bounds and finish with golden-section search inside
// the bracket around the best grid sample.
//
// Errors: NoOverlap (support and real map disjoint), DegenerateScene (RANSAC
// failure or a single overlapping pixel), Numerical (non-finite objective),
// InvalidArgument (bad configuration, size mismatch, coarse z <= 0).
RefinementResult refine(const Pose& coarse, const TriangleMesh& mesh, const CuboidDims& cad_dims,
                        const CameraIntrinsics& intr, const DepthMap& real, const RefineConfig& cfg = {});

}  // namespace depthrefine
