#include <atomic>
#include <cstdlib>
#include <cstring>

#include "depthrefine/simd/kernels.hpp"

namespace depthrefine::simd {

#if !defined(DEPTHREFINE_HAVE_AVX2)
// Builds without the AVX2 translation unit route everything to scalar.
namespace avx2 {
void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row) {
  scalar::raster_row(tri, row, col_begin, col_end, depth_row);
}
ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask) {
  return scalar::masked_residual(real, virt, mask);
}
std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold) {
  return scalar::count_line_inliers(x, y, slope, intercept, threshold);
}
}  // namespace avx2
#endif

namespace {

Isa initial_isa() noexcept {
  Isa isa = detect_isa();
  if (const char* env = std::getenv("DEPTHREFINE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) isa = Isa::Scalar;
  }
  return isa;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  if (isa == Isa::Scalar) return true;
#if defined(DEPTHREFINE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect_isa() noexcept { return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  selected().store(isa, std::memory_order_relaxed);
  return true;
}

void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row) {
  if (active_isa() == Isa::Avx2) {
    avx2::raster_row(tri, row, col_begin, col_end, depth_row);
  } else {
    scalar::raster_row(tri, row, col_begin, col_end, depth_row);
  }
}

ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask) {
  if (active_isa() == Isa::Avx2) return avx2::masked_residual(real, virt, mask);
  return scalar::masked_residual(real, virt, mask);
}

std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold) {
  if (active_isa() == Isa::Avx2) return avx2::count_line_inliers(x, y, slope, intercept, threshold);
  return scalar::count_line_inliers(x, y, slope, intercept, threshold);
}

}  // namespace depthrefine::simd
