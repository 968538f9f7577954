#include "depthrefine/refiner.hpp"

#include <cmath>
#include <algorithm>

#include "depthrefine/error.hpp"
#include "depthrefine/renderer.hpp"
#include "depthrefine/simd/kernels.hpp"

namespace depthrefine {

void RefineConfig::validate() const {
  if (!(bound_fraction > 0.0 && bound_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "bound_fraction must be in (0, 1)");
  }
  if (!(sigma_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma tolerance must be positive");
  if (grid_size < 3) throw Error(ErrorCode::InvalidArgument, "grid size must be at least 3");
  ransac.validate();
}

DepthObjective::DepthObjective(const TriangleMesh& mesh, const Pose& pose, const CameraIntrinsics& intr,
                               const DepthMap& real, std::vector<std::uint8_t> mask)
    : mesh_(mesh), pose_(pose), intr_(intr), real_(real), mask_(std::move(mask)) {
  if (real.width() != intr.width || real.height() != intr.height) {
    throw Error(ErrorCode::InvalidArgument, "real depth map size does not match the intrinsics");
  }
  if (!mask_.empty() && mask_.size() != real.size()) {
    throw Error(ErrorCode::InvalidArgument, "inlier mask size does not match the depth map");
  }
}

double DepthObjective::operator()(double sigma) const {
  if (!(std::fabs(sigma) < pose_.position.norm())) {
    throw Error(ErrorCode::InvalidArgument, "sigma moves the object through the camera");
  }
  const ScaledPose moved = apply_sigma_to_pose(pose_, sigma);
  const DepthMap rendered = render_depth(mesh_, moved.pose, moved.mu, intr_);
  const simd::ResidualSum r = simd::masked_residual(real_.data(), rendered.data(), mask_);
  if (r.count == 0) throw Error(ErrorCode::NoOverlap, "rendered object does not overlap valid depth pixels");
  return r.sum_sq / static_cast<double>(r.count);
}

double objective(double sigma, const TriangleMesh& mesh, const Pose& pose, const CameraIntrinsics& intr,
                 const DepthMap& real, const PixelSet* inliers) {
  return DepthObjective(mesh, pose, intr, real, inliers ? inliers->to_mask() : std::vector<std::uint8_t>{})(sigma);
}

namespace {

class CountingObjective {
 public:
  explicit CountingObjective(const DepthObjective& f) : f_(f) {}

  double operator()(double sigma) {
    ++count_;
    const double v = f_(sigma);
    if (!std::isfinite(v)) throw Error(ErrorCode::Numerical, "objective is not finite");
    return v;
  }
  int count() const { return count_; }

 private:
  const DepthObjective& f_;
  int count_ = 0;
};

// Golden-section search on [lo, hi] until the bracket is narrower than tol;
// returns the bracket midpoint.
double golden_section(CountingObjective& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

RefinementResult refine(const Pose& coarse, const TriangleMesh& mesh, const CuboidDims& cad_dims,
                        const CameraIntrinsics& intr, const DepthMap& real, const RefineConfig& cfg) {
  cfg.validate();
  intr.validate();
  cad_dims.validate();
  mesh.validate();
  if (!(coarse.position.z > 0.0)) throw Error(ErrorCode::InvalidArgument, "coarse pose must be in front of the camera");
  if (real.width() != intr.width || real.height() != intr.height) {
    throw Error(ErrorCode::InvalidArgument, "real depth map size does not match the intrinsics");
  }

  // Pair the sigma = 0 render with the measurement and reject outliers once.
  const DepthMap initial = render_depth(mesh, coarse, 1.0, intr);
  std::vector<ResidualSample> samples;
  const auto rd = real.data();
  const auto vd = initial.data();
  for (std::size_t i = 0; i < rd.size(); ++i) {
    if (rd[i] > 0.0f && vd[i] > 0.0f) samples.push_back({static_cast<std::uint32_t>(i), rd[i], vd[i]});
  }
  if (samples.empty()) throw Error(ErrorCode::NoOverlap, "rendered object does not overlap valid depth pixels");
  if (samples.size() < 2) throw Error(ErrorCode::DegenerateScene, "a single overlapping pixel cannot be fit");

  const RansacResult consensus = ransac_inliers(samples, cfg.ransac);
  PixelSet inliers{real.width(), real.height(), consensus.inliers};

  const DepthObjective f(mesh, coarse, intr, real, inliers.to_mask());
  CountingObjective counted(f);

  const double lo = -cfg.bound_fraction * coarse.position.z;
  const double hi = cfg.bound_fraction * coarse.position.z;
  const int n = cfg.grid_size;
  std::vector<double> grid(static_cast<std::size_t>(n)), values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = hi;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = counted(grid[i]);
    if (values[i] < values[best]) best = i;
  }
  const double bracket_lo = grid[best == 0 ? 0 : best - 1];
  const double bracket_hi = grid[std::min(best + 1, grid.size() - 1)];
  const double sigma_opt = golden_section(counted, bracket_lo, bracket_hi, cfg.sigma_tolerance);
  const double value = counted(sigma_opt);

  RefinementResult result;
  const ScaledPose moved = apply_sigma_to_pose(coarse, sigma_opt);
  result.sigma_opt = sigma_opt;
  result.mu_opt = moved.mu;
  result.refined_pose = moved.pose;
  result.estimated_dims = cad_dims.scaled(moved.mu);
  result.inlier_mask = std::move(inliers);
  result.objective_value = value;
  result.rms_residual = std::sqrt(value);
  result.sample_count = samples.size();
  result.evaluations = counted.count();
  return result;
}

}  // namespace depthrefine
