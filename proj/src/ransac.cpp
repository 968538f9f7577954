#include "depthrefine/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "depthrefine/error.hpp"
#include "depthrefine/simd/kernels.hpp"

namespace depthrefine {

void RansacConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "RANSAC needs at least one iteration");
  if (!(inlier_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "RANSAC threshold must be positive");
  if (!(min_inlier_fraction > 0.0 && min_inlier_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_inlier_fraction must be in (0, 1]");
  }
}

namespace {

constexpr double kDegenerateSpread = 1e-9;  // meters

LineModel through_two(double x0, double y0, double x1, double y1) {
  if (std::fabs(x1 - x0) <= kDegenerateSpread) return {(y0 + y1) / (x0 + x1), 0.0};
  const double slope = (y1 - y0) / (x1 - x0);
  return {slope, y0 - slope * x0};
}

LineModel least_squares(std::span<const double> xs, std::span<const double> ys,
                        const std::vector<std::size_t>& members) {
  const double n = static_cast<double>(members.size());
  double mx = 0.0, my = 0.0;
  for (auto i : members) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (auto i : members) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= n * kDegenerateSpread * kDegenerateSpread) return {my / mx, 0.0};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<std::size_t> members_within(std::span<const double> xs, std::span<const double> ys,
                                        const LineModel& m, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::fabs(ys[i] - (m.slope * xs[i] + m.intercept)) <= threshold) out.push_back(i);
  }
  return out;
}

}  // namespace

RansacResult ransac_inliers(std::span<const ResidualSample> samples, const RansacConfig& cfg) {
  cfg.validate();
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "RANSAC needs at least two samples");

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = samples[i].virtual_depth;
    ys[i] = samples[i].real_depth;
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);
  LineModel best;
  std::size_t best_count = 0;
  for (int it = 0; it < cfg.iterations && best_count < n; ++it) {
    const std::size_t i = first(rng);
    std::size_t j = second(rng);
    if (j >= i) ++j;
    const LineModel h = through_two(xs[i], ys[i], xs[j], ys[j]);
    if (!std::isfinite(h.slope) || !std::isfinite(h.intercept)) continue;
    const std::size_t count = simd::count_line_inliers(xs, ys, h.slope, h.intercept, cfg.inlier_threshold);
    if (count > best_count) {
      best_count = count;
      best = h;
    }
  }

  std::vector<std::size_t> consensus = members_within(xs, ys, best, cfg.inlier_threshold);
  RansacResult result{best, {}};
  if (!consensus.empty()) {
    const LineModel refit = least_squares(xs, ys, consensus);
    auto refined = members_within(xs, ys, refit, cfg.inlier_threshold);
    // A refit that loses support is discarded.
    if (refined.size() >= consensus.size()) {
      consensus = std::move(refined);
      result.model = refit;
    }
  }

  const double fraction = static_cast<double>(consensus.size()) / static_cast<double>(n);
  if (fraction < cfg.min_inlier_fraction) {
    throw Error(ErrorCode::DegenerateScene, "RANSAC consensus " + std::to_string(fraction) +
                                                " below the minimum inlier fraction");
  }
  result.inliers.reserve(consensus.size());
  for (auto i : consensus) result.inliers.push_back(samples[i].pixel);
  std::sort(result.inliers.begin(), result.inliers.end());
  return result;
}

}  // namespace depthrefine
