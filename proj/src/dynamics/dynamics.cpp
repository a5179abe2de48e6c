#include "poledyn/dynamics.hpp"

#include <cmath>
#include <limits>

#include "poledyn/kernels.hpp"

namespace poledyn {
namespace {

Complex ipow(Complex d, int n) {
  if (n == 0) return 1.0;
  if (n < 0) return 1.0 / ipow(d, -n);
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= d;
    d *= d;
    n >>= 1;
  }
  return result;
}

[[noreturn]] void throw_closest(std::span<const Complex> z) {
  std::size_t bi = 0;
  std::size_t bj = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double d = std::abs(z[i] - z[j]);
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  throw CollisionError(bi, bj, best);
}

}  // namespace

void check_collision(std::span<const Complex> z, double eps_coll) {
  if (z.size() < 2) return;
  const double m = kernels::min_separation_sq(z);
  if (!(m >= eps_coll * eps_coll)) throw_closest(z);
}

void velocity_weighted(std::span<const Complex> z, std::span<const Complex> mus,
                       std::span<const double> s, std::span<Complex> out, double eps_coll) {
  const std::size_t n = z.size();
  if (mus.size() != n || s.size() != n || out.size() != n) {
    throw Error("velocity inputs have mismatched sizes");
  }
  thread_local std::vector<Complex> w;
  w.resize(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = std::conj(mus[j]) * s[j];
  const double m = kernels::induced_velocity(z, w, out);
  if (n >= 2 && !(m >= eps_coll * eps_coll)) throw_closest(z);
}

VelocityField velocity_fixed(const SystemState& state, std::span<const Complex> mus,
                             double eps_coll) {
  VelocityField v(state.size());
  const std::vector<double> ones(state.size(), 1.0);
  velocity_weighted(state.positions, mus, ones, v, eps_coll);
  return v;
}

VelocityField velocity_seabed(const SystemState& state, std::span<const Complex> mus,
                              const Seabed& seabed, double eps_coll) {
  VelocityField v(state.size());
  std::vector<double> s(state.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = seabed.eval(state.positions[j]);
  velocity_weighted(state.positions, mus, s, v, eps_coll);
  return v;
}

VelocityField velocity_general(const SystemState& state, std::span<const Pole> poles,
                               double eps_coll) {
  const auto& z = state.positions;
  if (poles.size() != z.size()) throw Error("pole count does not match state size");
  VelocityField v(z.size());
  const std::vector<Complex> simple = simple_strengths(poles);
  const std::vector<double> ones(z.size(), 1.0);
  velocity_weighted(z, simple, ones, v, eps_coll);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == i) continue;
      const Complex d = z[i] - z[j];
      for (const auto& [n, mu] : poles[j].strength.coefficients) {
        if (n == -1 || mu == Complex{}) continue;
        v[i] += std::conj(mu * ipow(d, n));
      }
    }
  }
  return v;
}

}  // namespace poledyn
