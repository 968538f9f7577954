#include <cmath>

#include "depthrefine/simd/kernels.hpp"

namespace depthrefine::simd::scalar {

void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row) {
  const double y = static_cast<double>(row);
  const double r0 = tri.b[0] * y + tri.c[0];
  const double r1 = tri.b[1] * y + tri.c[1];
  const double r2 = tri.b[2] * y + tri.c[2];
  for (int col = col_begin; col < col_end; ++col) {
    const double x = static_cast<double>(col);
    const double e0 = tri.a[0] * x + r0;
    const double e1 = tri.a[1] * x + r1;
    const double e2 = tri.a[2] * x + r2;
    const bool inside = (e0 > 0.0 || (e0 == 0.0 && tri.top_left[0])) &&
                        (e1 > 0.0 || (e1 == 0.0 && tri.top_left[1])) &&
                        (e2 > 0.0 || (e2 == 0.0 && tri.top_left[2]));
    if (!inside) continue;
    const double inv_z = (e0 * tri.inv_z[0] + e1 * tri.inv_z[1] + e2 * tri.inv_z[2]) * tri.inv_area;
    const float z = static_cast<float>(1.0 / inv_z);
    float& cell = depth_row[col];
    if (cell == 0.0f || z < cell) cell = z;
  }
}

ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask) {
  ResidualSum out;
  const bool use_mask = !mask.empty();
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (!(real[i] > 0.0f) || !(virt[i] > 0.0f)) continue;
    if (use_mask && mask[i] == 0) continue;
    const double d = static_cast<double>(real[i]) - static_cast<double>(virt[i]);
    out.sum_sq += d * d;
    ++out.count;
  }
  return out;
}

std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    if (std::fabs(r) <= threshold) ++n;
  }
  return n;
}

}  // namespace depthrefine::simd::scalar
