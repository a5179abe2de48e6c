#include <algorithm>
#include <limits>

#include "poledyn/kernels.hpp"

namespace poledyn::kernels::detail {

double induced_scalar(const double* x, const double* y, const double* wr, const double* wi,
                      std::size_t n, double* vx, double* vy) {
  double min_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
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
  return min_d2;
}

double min_sep_scalar(const double* x, const double* y, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return best;
}

}  // namespace poledyn::kernels::detail
