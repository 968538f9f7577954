// Compiled with -mavx2; only reached after the dispatcher has checked CPUID.

#include <immintrin.h>

#include <bit>

#include "depthrefine/simd/kernels.hpp"

namespace depthrefine::simd::avx2 {

namespace {

inline __m256d covered(__m256d e, bool top_left) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d gt = _mm256_cmp_pd(e, zero, _CMP_GT_OQ);
  if (!top_left) return gt;
  return _mm256_or_pd(gt, _mm256_cmp_pd(e, zero, _CMP_EQ_OQ));
}

// Narrows four 64-bit lane masks to four 32-bit lane masks.
inline __m128 narrow_mask(__m256d m) {
  const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  const __m256i packed = _mm256_permutevar8x32_epi32(_mm256_castpd_si256(m), idx);
  return _mm_castsi128_ps(_mm256_castsi256_si128(packed));
}

}  // namespace

void raster_row(const TriangleSetup& tri, int row, int col_begin, int col_end, float* depth_row) {
  const double y = static_cast<double>(row);
  const double r0 = tri.b[0] * y + tri.c[0];
  const double r1 = tri.b[1] * y + tri.c[1];
  const double r2 = tri.b[2] * y + tri.c[2];

  const __m256d a0 = _mm256_set1_pd(tri.a[0]), a1 = _mm256_set1_pd(tri.a[1]), a2 = _mm256_set1_pd(tri.a[2]);
  const __m256d vr0 = _mm256_set1_pd(r0), vr1 = _mm256_set1_pd(r1), vr2 = _mm256_set1_pd(r2);
  const __m256d iz0 = _mm256_set1_pd(tri.inv_z[0]), iz1 = _mm256_set1_pd(tri.inv_z[1]),
                iz2 = _mm256_set1_pd(tri.inv_z[2]);
  const __m256d inv_area = _mm256_set1_pd(tri.inv_area);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d step = _mm256_set1_pd(4.0);
  const __m128 fzero = _mm_setzero_ps();

  int col = col_begin;
  __m256d x = _mm256_setr_pd(col, col + 1.0, col + 2.0, col + 3.0);
  for (; col + 4 <= col_end; col += 4, x = _mm256_add_pd(x, step)) {
    const __m256d e0 = _mm256_add_pd(_mm256_mul_pd(a0, x), vr0);
    const __m256d e1 = _mm256_add_pd(_mm256_mul_pd(a1, x), vr1);
    const __m256d e2 = _mm256_add_pd(_mm256_mul_pd(a2, x), vr2);
    const __m256d inside = _mm256_and_pd(_mm256_and_pd(covered(e0, tri.top_left[0]), covered(e1, tri.top_left[1])),
                                         covered(e2, tri.top_left[2]));
    if (_mm256_movemask_pd(inside) == 0) continue;

    const __m256d sum = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(e0, iz0), _mm256_mul_pd(e1, iz1)),
                                      _mm256_mul_pd(e2, iz2));
    const __m128 z = _mm256_cvtpd_ps(_mm256_div_pd(one, _mm256_mul_pd(sum, inv_area)));
    const __m128 cell = _mm_loadu_ps(depth_row + col);
    const __m128 closer = _mm_or_ps(_mm_cmpeq_ps(cell, fzero), _mm_cmplt_ps(z, cell));
    const __m128 write = _mm_and_ps(closer, narrow_mask(inside));
    _mm_storeu_ps(depth_row + col, _mm_blendv_ps(cell, z, write));
  }
  if (col < col_end) scalar::raster_row(tri, row, col, col_end, depth_row);
}

ResidualSum masked_residual(std::span<const float> real, std::span<const float> virt,
                            std::span<const std::uint8_t> mask) {
  const bool use_mask = !mask.empty();
  const std::size_t n = real.size();
  const __m256 fzero = _mm256_setzero_ps();
  __m256d acc_lo = _mm256_setzero_pd();
  __m256d acc_hi = _mm256_setzero_pd();
  std::size_t count = 0;

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 r = _mm256_loadu_ps(real.data() + i);
    const __m256 v = _mm256_loadu_ps(virt.data() + i);
    __m256 valid = _mm256_and_ps(_mm256_cmp_ps(r, fzero, _CMP_GT_OQ), _mm256_cmp_ps(v, fzero, _CMP_GT_OQ));
    if (use_mask) {
      const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask.data() + i));
      const __m256i wide = _mm256_cvtepu8_epi32(bytes);
      const __m256i is_zero = _mm256_cmpeq_epi32(wide, _mm256_setzero_si256());
      valid = _mm256_andnot_ps(_mm256_castsi256_ps(is_zero), valid);
    }
    const int bits = _mm256_movemask_ps(valid);
    if (bits == 0) continue;
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(bits)));

    const __m256i vi = _mm256_castps_si256(valid);
    const __m256d m_lo = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm256_castsi256_si128(vi)));
    const __m256d m_hi = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm256_extracti128_si256(vi, 1)));
    const __m256d d_lo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(r)),
                                       _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
    const __m256d d_hi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(r, 1)),
                                       _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
    acc_lo = _mm256_add_pd(acc_lo, _mm256_and_pd(m_lo, _mm256_mul_pd(d_lo, d_lo)));
    acc_hi = _mm256_add_pd(acc_hi, _mm256_and_pd(m_hi, _mm256_mul_pd(d_hi, d_hi)));
  }

  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc_lo, acc_hi));
  ResidualSum out;
  out.sum_sq = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  out.count = count;

  if (i < n) {
    const auto tail = scalar::masked_residual(real.subspan(i), virt.subspan(i),
                                              use_mask ? mask.subspan(i) : mask);
    out.sum_sq += tail.sum_sq;
    out.count += tail.count;
  }
  return out;
}

std::size_t count_line_inliers(std::span<const double> x, std::span<const double> y, double slope,
                               double intercept, double threshold) {
  const __m256d vs = _mm256_set1_pd(slope);
  const __m256d vb = _mm256_set1_pd(intercept);
  const __m256d vt = _mm256_set1_pd(threshold);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d vx = _mm256_loadu_pd(x.data() + i);
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    const __m256d r = _mm256_sub_pd(vy, _mm256_add_pd(_mm256_mul_pd(vs, vx), vb));
    const __m256d ok = _mm256_cmp_pd(_mm256_andnot_pd(sign, r), vt, _CMP_LE_OQ);
    n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(ok))));
  }
  if (i < x.size()) n += scalar::count_line_inliers(x.subspan(i), y.subspan(i), slope, intercept, threshold);
  return n;
}

}  // namespace depthrefine::simd::avx2
