#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "poledyn/kernels.hpp"

namespace poledyn::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double induced_avx2(const double* x, const double* y, const double* wr, const double* wi,
                    std::size_t n, double* vx, double* vy) {
  const double inf = std::numeric_limits<double>::infinity();
  __m256d vmin = _mm256_set1_pd(inf);
  double min_d2 = inf;
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vinf = _mm256_set1_pd(inf);
  const std::size_t n4 = n - n % 4;

  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    const __m256d yi = _mm256_set1_pd(y[i]);
    const __m256d self = _mm256_set1_pd(static_cast<double>(i));
    __m256d ax = zero;
    __m256d ay = zero;
    for (std::size_t j = 0; j < n4; j += 4) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
      const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
      const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(j)), lane);
      const __m256d is_self = _mm256_cmp_pd(idx, self, _CMP_EQ_OQ);
      vmin = _mm256_min_pd(vmin, _mm256_blendv_pd(d2, vinf, is_self));
      const __m256d inv = _mm256_blendv_pd(_mm256_div_pd(_mm256_set1_pd(1.0), d2), zero, is_self);
      const __m256d a = _mm256_loadu_pd(wr + j);
      const __m256d b = _mm256_loadu_pd(wi + j);
      const __m256d tx = _mm256_fmsub_pd(a, dx, _mm256_mul_pd(b, dy));
      const __m256d ty = _mm256_fmadd_pd(a, dy, _mm256_mul_pd(b, dx));
      ax = _mm256_fmadd_pd(tx, inv, ax);
      ay = _mm256_fmadd_pd(ty, inv, ay);
    }
    double sx = hsum(ax);
    double sy = hsum(ay);
    for (std::size_t j = n4; j < n; ++j) {
      if (j == i) continue;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double d2 = dx * dx + dy * dy;
      min_d2 = std::min(min_d2, d2);
      const double inv = 1.0 / d2;
      sx += (wr[j] * dx - wi[j] * dy) * inv;
      sy += (wr[j] * dy + wi[j] * dx) * inv;
    }
    vx[i] = sx;
    vy[i] = sy;
  }
  return std::min(min_d2, hmin(vmin));
}

double min_sep_avx2(const double* x, const double* y, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  __m256d vmin = _mm256_set1_pd(inf);
  double best = inf;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    const __m256d yi = _mm256_set1_pd(y[i]);
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
      vmin = _mm256_min_pd(vmin, _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
    }
    for (; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return std::min(best, hmin(vmin));
}

}  // namespace poledyn::kernels::detail
