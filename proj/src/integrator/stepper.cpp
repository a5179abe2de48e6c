#include <algorithm>
#include <cmath>

#include "poledyn/integrator.hpp"

namespace poledyn {
namespace {

// Dormand-Prince 5(4) tableau; the systems are autonomous so the nodes c_i are unused
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double rms_norm(std::span<const Complex> v, std::span<const Complex> y0,
                std::span<const Complex> y1, double rel, double abs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sr = abs + rel * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
    const double si = abs + rel * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
    const double er = v[i].real() / sr;
    const double ei = v[i].imag() / si;
    sum += er * er + ei * ei;
  }
  return v.empty() ? 0.0 : std::sqrt(sum / (2.0 * static_cast<double>(v.size())));
}

}  // namespace

void DenseOutput::eval(double theta, std::span<Complex> out) const {
  const double t1 = 1.0 - theta;
  for (std::size_t i = 0; i < r1_.size(); ++i) {
    out[i] = r1_[i] + theta * (r2_[i] + t1 * (r3_[i] + theta * (r4_[i] + t1 * r5_[i])));
  }
}

std::vector<Complex> DenseOutput::eval(double theta) const {
  std::vector<Complex> out(r1_.size());
  eval(theta, out);
  return out;
}

StepKernel::Result StepKernel::dopri5(const RhsFn& f, double t0, std::span<const Complex> y0,
                                      std::span<const Complex> k1, double h, double rel_tol,
                                      double abs_tol) {
  const std::size_t n = y0.size();
  std::vector<Complex> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y(n), y1(n), err(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + h * a21 * k1[i];
  f(y, k2);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(y, k3);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(y, k4);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  }
  f(y, k5);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = y0[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  }
  f(y, k6);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = y0[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  }
  f(y1, k7);
  for (std::size_t i = 0; i < n; ++i) {
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }

  Result r;
  r.error = rms_norm(err, y0, y1, rel_tol, abs_tol);
  DenseOutput& d = r.dense;
  d.t0_ = t0;
  d.h_ = h;
  d.r1_.assign(y0.begin(), y0.end());
  d.r2_.resize(n);
  d.r3_.resize(n);
  d.r4_.resize(n);
  d.r5_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex diff = y1[i] - y0[i];
    const Complex bspl = h * k1[i] - diff;
    d.r2_[i] = diff;
    d.r3_[i] = bspl;
    d.r4_[i] = diff - h * k7[i] - bspl;
    d.r5_[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
  }
  r.y1 = std::move(y1);
  r.f1 = std::move(k7);
  return r;
}

StepKernel::Result StepKernel::rk4(const RhsFn& f, double t0, std::span<const Complex> y0,
                                   std::span<const Complex> k1, double h) {
  const std::size_t n = y0.size();
  std::vector<Complex> k2(n), k3(n), k4(n), y(n), y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + 0.5 * h * k1[i];
  f(y, k2);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + 0.5 * h * k2[i];
  f(y, k3);
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + h * k3[i];
  f(y, k4);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = y0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  f(y1, f1);

  Result r;
  DenseOutput& d = r.dense;
  d.t0_ = t0;
  d.h_ = h;
  d.r1_.assign(y0.begin(), y0.end());
  d.r2_.resize(n);
  d.r3_.resize(n);
  d.r4_.resize(n);
  d.r5_.assign(n, Complex{});
  // cubic Hermite through both end values and slopes
  for (std::size_t i = 0; i < n; ++i) {
    const Complex diff = y1[i] - y0[i];
    const Complex bspl = h * k1[i] - diff;
    d.r2_[i] = diff;
    d.r3_[i] = bspl;
    d.r4_[i] = diff - h * f1[i] - bspl;
  }
  r.y1 = std::move(y1);
  r.f1 = std::move(f1);
  return r;
}

double StepKernel::initial_step(const RhsFn& f, std::span<const Complex> y0,
                                std::span<const Complex> f0, double rel_tol, double abs_tol,
                                double max_step) {
  const std::size_t n = y0.size();
  const double d0 = rms_norm(y0, y0, y0, rel_tol, abs_tol);
  const double d1n = rms_norm(f0, y0, y0, rel_tol, abs_tol);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, max_step);
  std::vector<Complex> y1(n), f1(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
  f(y1, f1);
  for (std::size_t i = 0; i < n; ++i) diff[i] = f1[i] - f0[i];
  const double d2 = rms_norm(diff, y0, y0, rel_tol, abs_tol) / h0;
  const double m = std::max(d1n, d2);
  const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, max_step});
}

}  // namespace poledyn
