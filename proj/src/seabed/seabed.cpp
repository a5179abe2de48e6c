#include "poledyn/seabed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace poledyn {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_coord(Complex n, Complex z) { return n.real() * z.real() + n.imag() * z.imag(); }

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}

bool full_circle(const seabeds::ArcMirror& m) { return m.half_angle >= kPi; }

bool in_span(const seabeds::ArcMirror& m, Complex z) {
  if (full_circle(m)) return true;
  const Complex w = z - m.center;
  if (w == Complex{}) return false;
  return std::abs(wrap_angle(std::arg(w) - m.axis)) <= m.half_angle;
}

bool arc_above(const seabeds::ArcMirror& m, Complex z) {
  return std::abs(z - m.center) >= m.radius && in_span(m, z);
}

Complex unit(Complex n, const char* what) {
  const double r = std::abs(n);
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(std::string(what) + " must be a nonzero finite direction");
  return n / r;
}

// Candidate crossing parameters of segment z0 + t (z1 - z0), t in (0, 1].
void line_hits(const Locus& l, Complex z0, Complex z1, std::vector<double>& out) {
  const Complex n = l.direction * Complex{0.0, -1.0};
  const double p0 = normal_coord(n, z0 - l.point);
  const double p1 = normal_coord(n, z1 - l.point);
  if (p0 == 0.0 || p0 == p1) return;
  const double t = p0 / (p0 - p1);
  if (t > 0.0 && t <= 1.0) out.push_back(t);
}

void circle_roots(Complex c, double r, Complex z0, Complex z1, std::vector<double>& roots) {
  const Complex d = z1 - z0;
  const Complex w = z0 - c;
  const double a = std::norm(d);
  if (a == 0.0) return;
  const double b = w.real() * d.real() + w.imag() * d.imag();
  const double cc = std::norm(w) - r * r;
  const double disc = b * b - a * cc;
  if (!(disc > 0.0)) return;
  const double sq = std::sqrt(disc);
  // stable quadratic roots
  const double q = -(b + std::copysign(sq, b));
  double t1 = q / a;
  double t2 = q != 0.0 ? cc / q : t1;
  if (t1 > t2) std::swap(t1, t2);
  if (cc == 0.0) {
    // starting on the circle: only the departure root counts, never t = 0
    for (double t : {t1, t2}) {
      if (std::abs(t) > 1e-15 && t > 0.0 && t <= 1.0) roots.push_back(t);
    }
    return;
  }
  for (double t : {t1, t2}) {
    if (t > 0.0 && t <= 1.0) roots.push_back(t);
  }
}

void locus_hits(const Locus& l, Complex z0, Complex z1, std::vector<double>& out) {
  switch (l.kind) {
    case Locus::Kind::Line:
      line_hits(l, z0, z1, out);
      return;
    case Locus::Kind::Circle:
      circle_roots(l.point, l.radius, z0, z1, out);
      return;
    case Locus::Kind::Arc: {
      std::vector<double> roots;
      circle_roots(l.point, l.radius, z0, z1, roots);
      const double mid = 0.5 * (l.angle_from + l.angle_to);
      const double half = 0.5 * (l.angle_to - l.angle_from);
      for (double t : roots) {
        const Complex z = z0 + t * (z1 - z0) - l.point;
        if (std::abs(wrap_angle(std::arg(z) - mid)) <= half) out.push_back(t);
      }
      return;
    }
    case Locus::Kind::Ray: {
      const Complex d = z1 - z0;
      const double den = cross(d, l.direction);
      if (den == 0.0) return;
      const Complex o = l.point - z0;
      const double t = cross(o, l.direction) / den;
      const double s = cross(o, d) / den;
      if (t > 0.0 && t <= 1.0 && s >= 0.0) out.push_back(t);
      return;
    }
  }
}

Complex nearest_on(const Locus& l, Complex z) {
  switch (l.kind) {
    case Locus::Kind::Line: {
      const Complex w = z - l.point;
      const double s = normal_coord(l.direction, w);
      return l.point + s * l.direction;
    }
    case Locus::Kind::Circle: {
      const Complex w = z - l.point;
      if (w == Complex{}) return l.point + l.radius;
      return l.point + l.radius * w / std::abs(w);
    }
    case Locus::Kind::Arc: {
      const Complex w = z - l.point;
      const double mid = 0.5 * (l.angle_from + l.angle_to);
      const double half = 0.5 * (l.angle_to - l.angle_from);
      double a = w == Complex{} ? mid : std::arg(w);
      const double off = wrap_angle(a - mid);
      a = mid + std::clamp(off, -half, half);
      return l.point + std::polar(l.radius, a);
    }
    case Locus::Kind::Ray: {
      const double s = std::max(0.0, normal_coord(l.direction, z - l.point));
      return l.point + s * l.direction;
    }
  }
  return z;
}

std::vector<Locus> profile_lines(const PiecewiseLinearProfile& p, Complex n) {
  std::vector<Locus> out;
  for (std::size_t k = 0; k < p.breakpoints().size(); ++k) {
    if (!p.jumps_at(k)) continue;
    out.push_back({Locus::Kind::Line, p.breakpoints()[k] * n, n * Complex{0.0, 1.0}});
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(const PiecewiseLinearProfile& p) {
  std::ostringstream os;
  os.precision(6);
  os << "pieces[";
  for (std::size_t k = 0; k < p.pieces().size(); ++k) {
    if (k) os << " | " << p.breakpoints()[k - 1] << " | ";
    os << p.pieces()[k].slope << "u+" << p.pieces()[k].intercept;
  }
  os << "]";
  return os.str();
}

}  // namespace

Seabed::Seabed(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [](seabeds::Constant& c) {
                   if (!std::isfinite(c.value)) throw Error("seabed value must be finite");
                 },
                 [](seabeds::ProfileOfIm& p) { p.normal = unit(p.normal, "profile normal"); },
                 [](seabeds::ProfileOfAbsIm&) {},
                 [](seabeds::LinearOfIm& l) {
                   l.normal = unit(l.normal, "linear seabed normal");
                   if (!std::isfinite(l.slope) || !std::isfinite(l.offset)) {
                     throw Error("linear seabed coefficients must be finite");
                   }
                 },
                 [](seabeds::RadialStep& r) {
                   if (!(r.radius > 0.0)) throw Error("radial step radius must be positive");
                 },
                 [](seabeds::RadialProfile&) {},
                 [](seabeds::ArcMirror& m) {
                   if (!(m.radius > 0.0)) throw Error("arc mirror radius must be positive");
                   if (!(m.half_angle > 0.0)) throw Error("arc mirror half-angle must be positive");
                   m.half_angle = std::min(m.half_angle, kPi);
                 },
             },
             v_);
}

Seabed Seabed::half_plane_step(double below, double above, double at) {
  return Seabed(seabeds::ProfileOfIm{PiecewiseLinearProfile::step(at, below, above), {0.0, 1.0}});
}

Seabed Seabed::linear_of_im(double slope, double offset) {
  return Seabed(seabeds::LinearOfIm{slope, offset, {0.0, 1.0}});
}

Seabed Seabed::radial_step(double radius, double inside, double outside, Complex center) {
  return Seabed(seabeds::RadialStep{radius, inside, outside, center});
}

std::string Seabed::describe() const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant& c) { return "constant " + fmt(c.value); },
          [](const seabeds::ProfileOfIm& p) { return "profile of Im z " + fmt(p.profile); },
          [](const seabeds::ProfileOfAbsIm& p) { return "profile of |Im z| " + fmt(p.profile); },
          [](const seabeds::LinearOfIm& l) {
            return "linear " + fmt(l.slope) + "*Im z + " + fmt(l.offset);
          },
          [](const seabeds::RadialStep& r) {
            return "radial step r=" + fmt(r.radius) + " inside " + fmt(r.inside) + " outside " +
                   fmt(r.outside);
          },
          [](const seabeds::RadialProfile& p) { return "radial profile of |z|^2 " + fmt(p.profile); },
          [](const seabeds::ArcMirror& m) {
            return "arc mirror r=" + fmt(m.radius) + " below " + fmt(m.below) + " above " +
                   fmt(m.above);
          },
      },
      v_);
}

double Seabed::eval(Complex z) const { return value_in(region_of(z), z); }

int Seabed::region_of(Complex z) const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant&) { return 0; },
          [&](const seabeds::ProfileOfIm& p) {
            return static_cast<int>(p.profile.piece_index(normal_coord(p.normal, z)));
          },
          [&](const seabeds::ProfileOfAbsIm& p) {
            const int side = z.imag() >= 0.0 ? 1 : 0;
            return 2 * static_cast<int>(p.profile.piece_index(std::abs(z.imag()))) + side;
          },
          [](const seabeds::LinearOfIm&) { return 0; },
          [&](const seabeds::RadialStep& r) {
            return std::abs(z - r.center) <= r.radius ? 0 : 1;
          },
          [&](const seabeds::RadialProfile& p) {
            return static_cast<int>(p.profile.piece_index(std::norm(z - p.center)));
          },
          [&](const seabeds::ArcMirror& m) { return arc_above(m, z) ? 1 : 0; },
      },
      v_);
}

double Seabed::value_in(int region, Complex z) const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant& c) { return c.value; },
          [&](const seabeds::ProfileOfIm& p) {
            return p.profile.value_in(static_cast<std::size_t>(region), normal_coord(p.normal, z));
          },
          [&](const seabeds::ProfileOfAbsIm& p) {
            const double y = (region % 2 == 1) ? z.imag() : -z.imag();
            return p.profile.value_in(static_cast<std::size_t>(region / 2), y);
          },
          [&](const seabeds::LinearOfIm& l) { return l.slope * normal_coord(l.normal, z) + l.offset; },
          [&](const seabeds::RadialStep& r) { return region == 0 ? r.inside : r.outside; },
          [&](const seabeds::RadialProfile& p) {
            return p.profile.value_in(static_cast<std::size_t>(region), std::norm(z - p.center));
          },
          [&](const seabeds::ArcMirror& m) { return region == 1 ? m.above : m.below; },
      },
      v_);
}

bool Seabed::piecewise_constant() const noexcept {
  return std::visit(overloaded{
                        [](const seabeds::Constant&) { return true; },
                        [](const seabeds::ProfileOfIm& p) { return p.profile.piecewise_constant(); },
                        [](const seabeds::ProfileOfAbsIm& p) { return p.profile.piecewise_constant(); },
                        [](const seabeds::LinearOfIm& l) { return l.slope == 0.0; },
                        [](const seabeds::RadialStep&) { return true; },
                        [](const seabeds::RadialProfile& p) { return p.profile.piecewise_constant(); },
                        [](const seabeds::ArcMirror&) { return true; },
                    },
                    v_);
}

bool Seabed::has_discontinuities() const noexcept { return !discontinuities().empty(); }

std::vector<Locus> Seabed::discontinuities() const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant&) { return std::vector<Locus>{}; },
          [](const seabeds::ProfileOfIm& p) { return profile_lines(p.profile, p.normal); },
          [](const seabeds::ProfileOfAbsIm& p) {
            std::vector<Locus> out;
            const auto& prof = p.profile;
            for (std::size_t k = 0; k < prof.breakpoints().size(); ++k) {
              const double b = prof.breakpoints()[k];
              // |Im z| >= 0, so nothing at or below the origin is reachable
              if (b <= 0.0 || !prof.jumps_at(k)) continue;
              out.push_back({Locus::Kind::Line, Complex{0.0, b}, 1.0});
              out.push_back({Locus::Kind::Line, Complex{0.0, -b}, 1.0});
            }
            return out;
          },
          [](const seabeds::LinearOfIm&) { return std::vector<Locus>{}; },
          [](const seabeds::RadialStep& r) {
            if (r.inside == r.outside) return std::vector<Locus>{};
            return std::vector<Locus>{{Locus::Kind::Circle, r.center, {}, r.radius}};
          },
          [](const seabeds::RadialProfile& p) {
            std::vector<Locus> out;
            const auto& prof = p.profile;
            for (std::size_t k = 0; k < prof.breakpoints().size(); ++k) {
              const double b = prof.breakpoints()[k];
              if (b <= 0.0 || !prof.jumps_at(k)) continue;
              out.push_back({Locus::Kind::Circle, p.center, {}, std::sqrt(b)});
            }
            return out;
          },
          [](const seabeds::ArcMirror& m) {
            if (m.above == m.below) return std::vector<Locus>{};
            if (full_circle(m)) return std::vector<Locus>{{Locus::Kind::Circle, m.center, {}, m.radius}};
            const double a0 = m.axis - m.half_angle;
            const double a1 = m.axis + m.half_angle;
            std::vector<Locus> out;
            out.push_back({Locus::Kind::Arc, m.center, {}, m.radius, a0, a1});
            for (double a : {a0, a1}) {
              const Complex u = std::polar(1.0, a);
              out.push_back({Locus::Kind::Ray, m.center + m.radius * u, u});
            }
            return out;
          },
      },
      v_);
}

Complex Seabed::project_to_locus(Complex z) const {
  Complex best = z;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& l : discontinuities()) {
    const Complex p = nearest_on(l, z);
    const double d = std::abs(p - z);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

std::optional<double> Seabed::crossing_fraction(Complex z0, Complex z1) const {
  std::vector<double> hits;
  for (const auto& l : discontinuities()) locus_hits(l, z0, z1, hits);
  if (hits.empty()) return std::nullopt;
  return *std::min_element(hits.begin(), hits.end());
}

SymmetryTag Seabed::symmetry() const {
  using K = SymmetryTag::Kind;
  return std::visit(
      overloaded{
          [](const seabeds::Constant&) { return SymmetryTag{K::Translation, 1.0, {}}; },
          [](const seabeds::ProfileOfIm& p) {
            return SymmetryTag{K::Translation, p.normal * Complex{0.0, -1.0}, {}};
          },
          [](const seabeds::ProfileOfAbsIm&) { return SymmetryTag{K::Translation, 1.0, {}}; },
          [](const seabeds::LinearOfIm& l) {
            return SymmetryTag{K::Translation, l.normal * Complex{0.0, -1.0}, {}};
          },
          [](const seabeds::RadialStep& r) { return SymmetryTag{K::Rotation, 1.0, r.center}; },
          [](const seabeds::RadialProfile& p) { return SymmetryTag{K::Rotation, 1.0, p.center}; },
          [](const seabeds::ArcMirror& m) {
            if (full_circle(m)) return SymmetryTag{K::Rotation, 1.0, m.center};
            return SymmetryTag{K::None, 1.0, {}};
          },
      },
      v_);
}

double Seabed::symmetry_coordinate(Complex z) const {
  const SymmetryTag tag = symmetry();
  switch (tag.kind) {
    case SymmetryTag::Kind::Translation:
      // the coordinate normal to the translation direction
      return normal_coord(tag.direction * Complex{0.0, 1.0}, z);
    case SymmetryTag::Kind::Rotation:
      return std::norm(z - tag.center);
    case SymmetryTag::Kind::None:
      break;
  }
  throw NoSymmetry("seabed '" + describe() + "' has no global Euclidean symmetry");
}

std::function<double(double)> Seabed::antiderivative() const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant& c) -> std::function<double(double)> {
            const double v = c.value;
            return [v](double u) { return v * u; };
          },
          [](const seabeds::ProfileOfIm& p) -> std::function<double(double)> {
            auto prof = p.profile;
            return [prof](double u) { return prof.antiderivative(u); };
          },
          [](const seabeds::ProfileOfAbsIm& p) -> std::function<double(double)> {
            auto prof = p.profile;
            return [prof](double u) { return u < 0.0 ? -prof.antiderivative(-u) : prof.antiderivative(u); };
          },
          [](const seabeds::LinearOfIm& l) -> std::function<double(double)> {
            const double a = l.slope;
            const double b = l.offset;
            return [a, b](double u) { return 0.5 * a * u * u + b * u; };
          },
          [](const seabeds::RadialStep& r) -> std::function<double(double)> {
            const double r2 = r.radius * r.radius;
            const double in = r.inside;
            const double out = r.outside;
            return [r2, in, out](double u) {
              return u <= r2 ? in * u : in * r2 + out * (u - r2);
            };
          },
          [](const seabeds::RadialProfile& p) -> std::function<double(double)> {
            auto prof = p.profile;
            return [prof](double u) { return prof.antiderivative(u); };
          },
          [this](const seabeds::ArcMirror& m) -> std::function<double(double)> {
            if (!full_circle(m)) {
              throw NoSymmetry("seabed '" + describe() + "' has no global Euclidean symmetry");
            }
            const double r2 = m.radius * m.radius;
            const double in = m.below;
            const double out = m.above;
            return [r2, in, out](double u) {
              return u <= r2 ? in * u : in * r2 + out * (u - r2);
            };
          },
      },
      v_);
}

Seabed Seabed::negated() const {
  return std::visit(
      overloaded{
          [](const seabeds::Constant& c) { return Seabed(seabeds::Constant{-c.value}); },
          [](const seabeds::ProfileOfIm& p) {
            return Seabed(seabeds::ProfileOfIm{p.profile.negated(), p.normal});
          },
          [](const seabeds::ProfileOfAbsIm& p) {
            return Seabed(seabeds::ProfileOfAbsIm{p.profile.negated()});
          },
          [](const seabeds::LinearOfIm& l) {
            return Seabed(seabeds::LinearOfIm{-l.slope, -l.offset, l.normal});
          },
          [](const seabeds::RadialStep& r) {
            return Seabed(seabeds::RadialStep{r.radius, -r.inside, -r.outside, r.center});
          },
          [](const seabeds::RadialProfile& p) {
            return Seabed(seabeds::RadialProfile{p.profile.negated(), p.center});
          },
          [](const seabeds::ArcMirror& m) {
            auto n = m;
            n.below = -m.below;
            n.above = -m.above;
            return Seabed(n);
          },
      },
      v_);
}

}  // namespace poledyn
