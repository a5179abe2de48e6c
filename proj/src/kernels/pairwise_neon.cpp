#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "poledyn/kernels.hpp"

namespace poledyn::kernels::detail {

double induced_neon(const double* x, const double* y, const double* wr, const double* wi,
                    std::size_t n, double* vx, double* vy) {
  const double inf = std::numeric_limits<double>::infinity();
  float64x2_t vmin = vdupq_n_f64(inf);
  double min_d2 = inf;
  const std::size_t n2 = n - n % 2;
  const float64x2_t vinf = vdupq_n_f64(inf);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);

  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xi = vdupq_n_f64(x[i]);
    const float64x2_t yi = vdupq_n_f64(y[i]);
    float64x2_t ax = zero;
    float64x2_t ay = zero;
    for (std::size_t j = 0; j < n2; j += 2) {
      const float64x2_t dx = vsubq_f64(xi, vld1q_f64(x + j));
      const float64x2_t dy = vsubq_f64(yi, vld1q_f64(y + j));
      const float64x2_t d2 = vfmaq_f64(vmulq_f64(dy, dy), dx, dx);
      const uint64_t s0 = (j == i) ? ~uint64_t{0} : 0;
      const uint64_t s1 = (j + 1 == i) ? ~uint64_t{0} : 0;
      const uint64x2_t is_self = vcombine_u64(vcreate_u64(s0), vcreate_u64(s1));
      vmin = vminq_f64(vmin, vbslq_f64(is_self, vinf, d2));
      const float64x2_t inv = vbslq_f64(is_self, zero, vdivq_f64(one, d2));
      const float64x2_t a = vld1q_f64(wr + j);
      const float64x2_t b = vld1q_f64(wi + j);
      const float64x2_t tx = vfmsq_f64(vmulq_f64(a, dx), b, dy);
      const float64x2_t ty = vfmaq_f64(vmulq_f64(a, dy), b, dx);
      ax = vfmaq_f64(ax, tx, inv);
      ay = vfmaq_f64(ay, ty, inv);
    }
    double sx = vaddvq_f64(ax);
    double sy = vaddvq_f64(ay);
    for (std::size_t j = n2; j < n; ++j) {
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
  return std::min(min_d2, vminvq_f64(vmin));
}

double min_sep_neon(const double* x, const double* y, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  float64x2_t vmin = vdupq_n_f64(inf);
  double best = inf;
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xi = vdupq_n_f64(x[i]);
    const float64x2_t yi = vdupq_n_f64(y[i]);
    std::size_t j = i + 1;
    for (; j + 2 <= n; j += 2) {
      const float64x2_t dx = vsubq_f64(xi, vld1q_f64(x + j));
      const float64x2_t dy = vsubq_f64(yi, vld1q_f64(y + j));
      vmin = vminq_f64(vmin, vfmaq_f64(vmulq_f64(dy, dy), dx, dx));
    }
    for (; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return std::min(best, vminvq_f64(vmin));
}

}  // namespace poledyn::kernels::detail
