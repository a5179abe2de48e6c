#include "poledyn/analytic.hpp"

#include <cmath>
#include <limits>

namespace poledyn {
namespace {

constexpr double kThetaTol = 1e-12;

double f_of(double theta, double k) { return std::sin(theta) * std::exp(-k * theta); }

// Root of f(theta) = target on [a, b] where f is monotone; empty if not bracketed.
std::optional<double> monotone_root(double a, double b, double k, double target) {
  double fa = f_of(a, k) - target;
  double fb = f_of(b, k) - target;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && std::abs(b - a) > kThetaTol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f_of(m, k) - target;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// The interior extremum of sin(theta) exp(-k theta) on (0, pi).
double peak(double k) { return std::atan2(1.0, k); }

// Other root of f(theta) = f(theta1), on the far side of the extremum.
double mirror_root(double theta1, double k) {
  const double p = peak(k);
  const double v = f_of(theta1, k);
  auto r = theta1 < p ? monotone_root(p, kPi, k, v) : monotone_root(0.0, p, k, v);
  return r ? *r : kPi - theta1;
}

}  // namespace

Complex self_similar(const SelfSimilarSpec& spec, double t) {
  const Complex Z0 = spec.Z0;
  if (Z0 == Complex{}) throw DomainError("self-similar solution needs Z0 != 0");
  const double r2 = std::norm(Z0);
  const double re = spec.M.real();
  const double im = spec.M.imag();
  if (re == 0.0) return std::polar(1.0, im * t / r2) * Z0;
  const double T2 = 1.0 + re * t / (r2 / 2.0);
  if (!(T2 > 0.0)) throw DomainError("time is at or past the collapse time");
  const double T = std::sqrt(T2);
  return T * std::polar(1.0, (im / re) * std::log(T)) * Z0;
}

std::optional<double> collapse_time(const SelfSimilarSpec& spec) {
  if (!(spec.M.real() < 0.0)) return std::nullopt;
  return -std::norm(spec.Z0) / (2.0 * spec.M.real());
}

PairReduction pair_reduction(Complex z, Complex zp, Complex mu, Complex mup) {
  PairReduction r;
  const Complex total = mu + mup;
  if (total == Complex{}) {
    r.parallel = true;
    r.velocity = std::conj(mup) / std::conj(z - zp);
    return r;
  }
  r.center = (std::conj(mu) * z + std::conj(mup) * zp) / std::conj(total);
  r.M = std::norm(mup) / total;
  return r;
}

PolygonReduction polygon_reduction(int n, Complex mu, Complex mup) {
  if (n < 2) throw DomainError("polygon needs at least 2 vertices");
  PolygonReduction r;
  r.M = 0.5 * static_cast<double>(n - 1) * std::conj(mu) + std::conj(mup);
  const double scale = 0.5 * static_cast<double>(n - 1) * std::abs(mu) + std::abs(mup);
  r.immobilized = std::abs(r.M) <= 8.0 * std::numeric_limits<double>::epsilon() * scale;
  return r;
}

Complex immobilizing_center_strength(int n, Complex mu) {
  if (n < 2) throw DomainError("polygon needs at least 2 vertices");
  return -0.5 * static_cast<double>(n - 1) * mu;
}

std::vector<Pole> regular_polygon(int n, Complex center, double radius, double phase, Complex mu,
                                  Complex mup) {
  if (n < 2) throw DomainError("polygon needs at least 2 vertices");
  std::vector<Pole> poles;
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2.0 * kPi * k / n;
    poles.push_back({center + std::polar(radius, a), StrengthSpec::simple(mu), "v" + std::to_string(k)});
  }
  poles.push_back({center, StrengthSpec::simple(mup), "c"});
  return poles;
}

std::string_view to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::Refracted: return "refracted";
    case OutcomeKind::Reflected: return "reflected";
    case OutcomeKind::Skid: return "skid";
    case OutcomeKind::Trapped: return "trapped";
    case OutcomeKind::Separated: return "separated";
  }
  return "unknown";
}

double snell_invariant(double s, double theta, Complex mu) {
  if (mu.imag() == 0.0) throw DomainError("invariant needs Im mu != 0");
  return s * f_of(theta, mu.real() / mu.imag());
}

RefractionOutcome snell(const BoundaryInteraction& b) {
  if (!(b.s1 > 0.0) || !(b.s2 > 0.0)) throw DomainError("refraction needs s1, s2 > 0");
  if (!(b.theta1 > 0.0) || b.theta1 > kPi / 2) throw DomainError("theta1 must lie in (0, pi/2]");
  const double th1 = b.theta1;
  if (b.mu.imag() == 0.0) return {OutcomeKind::Refracted, th1};

  if (b.mu.real() == 0.0) {
    const double ratio = b.s1 * std::sin(th1) / b.s2;
    if (std::abs(ratio - 1.0) <= 1e-12) return {OutcomeKind::Skid, kPi / 2};
    if (ratio < 1.0) return {OutcomeKind::Refracted, std::asin(ratio)};
    return {OutcomeKind::Reflected, kPi - th1};
  }
  if (b.s1 == b.s2) return {OutcomeKind::Refracted, th1};

  // Walk from theta1 in the direction the straddling phase turns the axis,
  // taking the first of: full transmission (s2 f = s1 f1) or return (f = f1).
  const double k = b.mu.real() / b.mu.imag();
  const double f1 = f_of(th1, k);
  const double target = b.s1 * f1 / b.s2;
  const double p = peak(k);
  if (std::abs(target - f_of(p, k)) <= 1e-12 * f1) return {OutcomeKind::Skid, p, true};

  const bool down = (b.s2 - b.s1) * b.mu.imag() > 0.0;
  std::vector<std::pair<double, double>> legs;
  if (down) {
    if (p < th1) legs.push_back({p, th1});
    legs.push_back({0.0, std::min(p, th1)});
  } else {
    if (p > th1) legs.push_back({th1, p});
    legs.push_back({std::max(p, th1), kPi});
  }
  for (auto [a, c] : legs) {
    std::optional<double> trans = monotone_root(a, c, k, target);
    std::optional<double> back;
    if (a != th1 && c != th1) back = monotone_root(a, c, k, f1);
    auto dist = [&](std::optional<double> r) {
      return r ? std::abs(*r - th1) : std::numeric_limits<double>::infinity();
    };
    if (!trans && !back) continue;
    if (dist(trans) <= dist(back)) {
      const bool nominal = *trans > 0.0 && *trans < kPi / 2;
      return {OutcomeKind::Refracted, *trans, !nominal};
    }
    return {OutcomeKind::Reflected, *back, true};
  }
  return {OutcomeKind::Reflected, mirror_root(th1, k), true};
}

RefractionOutcome reflect(const BoundaryInteraction& b) {
  if (b.theta1 < 0.0 || b.theta1 >= kPi / 2) throw DomainError("theta1 must lie in [0, pi/2)");
  const double th1 = b.theta1;
  if (b.mu.imag() == 0.0) return {OutcomeKind::Separated, th1};
  if (b.mu.real() == 0.0) {
    if (th1 == 0.0) return {OutcomeKind::Trapped, 0.0};
    return {OutcomeKind::Reflected, kPi - th1};
  }
  const double k = b.mu.real() / b.mu.imag();
  if (f_of(th1, k) == 0.0) return {OutcomeKind::Trapped, th1};
  const double th2 = mirror_root(th1, k);
  const bool nominal = th2 > kPi / 2 && th2 < kPi;
  return {OutcomeKind::Reflected, th2, !nominal};
}

double critical_angle(double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw DomainError("critical angle needs s1, s2 > 0");
  if (!(s2 < s1)) throw DomainError("no critical angle unless s2 < s1");
  return std::asin(s2 / s1);
}

Complex leapfrog_advance(double s1, double s2, Complex dz) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw DomainError("leapfrog needs s1, s2 > 0");
  return Complex{0.0, (s2 - s1) / (s2 + s1) * std::abs(dz.imag())};
}

double rainbow_angle(double r, double d) {
  if (!(r > 0.0) || !(d > 0.0)) throw DomainError("rainbow angle needs r > 0 and d > 0");
  return 2.0 * std::atan((1.0 - r) / d);
}

Complex circle_caustic(double radius, double phi) {
  const Complex hit = radius * Complex{std::sin(phi), std::cos(phi)};
  const Complex dir{-std::sin(2.0 * phi), -std::cos(2.0 * phi)};
  return hit + 0.5 * radius * std::cos(phi) * dir;
}

double reflected_axis_crossing(double radius, double x) {
  if (!(std::abs(x) < radius)) throw DomainError("ray misses the circle");
  const double s = x / radius;
  const double c = std::sqrt(1.0 - s * s);
  return radius * c - radius / (2.0 * c) * (1.0 - 2.0 * s * s);
}

}  // namespace poledyn
