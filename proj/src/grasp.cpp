#include "depthrefine/grasp.hpp"

#include <cmath>

#include "depthrefine/error.hpp"

namespace depthrefine {

void GraspSamplingConfig::validate() const {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "grasp sphere radius must be positive");
  if (alpha_samples < 1 || theta_samples < 1) throw Error(ErrorCode::InvalidArgument, "sample counts must be >= 1");
  if (!(theta_max > 0.0 && theta_max <= std::numbers::pi)) {
    throw Error(ErrorCode::InvalidArgument, "theta_max must be in (0, pi]");
  }
}

std::vector<GraspCandidate> sample_candidates(const Vec3& refined_position, const GraspSamplingConfig& cfg) {
  cfg.validate();
  std::vector<GraspCandidate> out;
  out.reserve(static_cast<std::size_t>(cfg.alpha_samples) * static_cast<std::size_t>(cfg.theta_samples));
  for (int j = 0; j < cfg.theta_samples; ++j) {
    const double theta = cfg.theta_samples == 1 ? 0.0 : cfg.theta_max * j / (cfg.theta_samples - 1);
    const UnitQuaternion qy = UnitQuaternion::about_y(theta);
    for (int k = 0; k < cfg.alpha_samples; ++k) {
      const double alpha = 2.0 * std::numbers::pi * k / cfg.alpha_samples;
      const Vec3 offset{std::sin(theta) * std::sin(alpha), std::sin(theta) * std::cos(alpha), std::cos(theta)};
      const Vec3 position = refined_position + cfg.radius * offset;
      if (position.z < cfg.table_height) continue;
      const UnitQuaternion q = quat_mul(quat_mul(cfg.approach_alignment, UnitQuaternion::about_z(alpha)), qy);
      out.push_back({position, q, alpha, theta});
    }
  }
  if (out.empty()) throw Error(ErrorCode::NoFeasibleCandidate, "every grasp candidate lies below the table");
  return out;
}

}  // namespace depthrefine
