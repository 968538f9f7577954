#pragma once

// Data-parallel inner loops of the renderer, the objective and RANSAC.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active variant is chosen once at startup from CPUID and can be
// overridden with set_isa() or the DEPTHREFINE_SIMD environment variable
// ("scalar" or "avx2"). The rasterizer and the inlier counter are bit-exact
// across variants; the residual reduction sums in a different order and
// agrees to rounding.

#include <cstddef>
#include <cstdint>
#include <span>

namespace depthrefine::simd {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

// Best variant the CPU and the build support.
Isa detect_isa() noexcept;
// Currently selected variant.
Isa active_isa() noexcept;
// Returns false (and leaves the selection alone) when `isa` is unavailable.
bool set_isa(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;

// Screen-space triangle prepared for rasterization. Edge k is opposite vertex
// k; e_k(x, y) = a[k] * x + (b[k] * y + c[k]) is positive inside. A pixel whose
// center lies exactly on edge k is covered only when top_left[k] is set, so
// two triangles sharing an edge never both claim that pixel.
struct TriangleSetup {
  double a[3];
  double b[3];
  double c[3];
  bool top_left[3];
  double inv_z[3];   // 1 / camera z of each vertex
  double inv_area;   // 1 / e_k(vertex k), the same for every k
};

// Z-buffers the triangle into row `row` (pixel-center y == row) for columns
// [col_begin, col_end). `depth_row` points at column 0 of that row. Empty
// cells (0.0f) or farther cells receive the perspective-correct depth
// 1 / (sum_k e_k * inv_z[k] * inv_area).
void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row);

struct ResidualSum {
  double sum_sq = 0.0;
  std::size_t count = 0;
};

// Sums (real - virt)^2 over indices where both depths are valid and, when
// `mask` is non-empty, mask[i] != 0. Differences are formed in double.
ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask);

// Number of i with |y[i] - (slope * x[i] + intercept)| <= threshold.
std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold);

// Direct access to each variant, for equivalence tests.
namespace scalar {
void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row);
ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask);
std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold);
}  // namespace scalar

namespace avx2 {
void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row);
ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask);
std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold);
}  // namespace avx2

}  // namespace depthrefine::simd
