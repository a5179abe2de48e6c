#pragma once

// The real factor S(z) multiplying every strength: variants, regions,
// discontinuity geometry, antiderivatives and symmetry metadata.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "poledyn/types.hpp"

namespace poledyn {

/// Piecewise linear function of one real variable. Breakpoints split the
/// line into breakpoints.size() + 1 pieces; jumps are allowed at breakpoints.
class PiecewiseLinearProfile {
 public:
  struct Piece {
    double slope = 0.0;
    double intercept = 0.0;
  };
  /// Which neighbouring piece owns a breakpoint.
  enum class Closure { Upper, Lower };

  PiecewiseLinearProfile() : pieces_{Piece{}} {}
  PiecewiseLinearProfile(std::vector<double> breakpoints, std::vector<Piece> pieces,
                         Closure closure = Closure::Upper);

  static PiecewiseLinearProfile constant(double value);
  static PiecewiseLinearProfile linear(double slope, double intercept);
  static PiecewiseLinearProfile step(double at, double below, double above,
                                     Closure closure = Closure::Upper);
  /// Continuous interpolation through (u_k, v_k), constant beyond the ends.
  static PiecewiseLinearProfile interpolate(const std::vector<double>& u,
                                            const std::vector<double>& v);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  Closure closure() const noexcept { return closure_; }

  std::size_t piece_index(double u) const noexcept;
  double operator()(double u) const noexcept { return value_in(piece_index(u), u); }
  /// Linear extension of a piece beyond its interval.
  double value_in(std::size_t piece, double u) const noexcept;
  /// True when S jumps at breakpoint k (not just a kink).
  bool jumps_at(std::size_t k) const noexcept;
  bool has_jumps() const noexcept;
  bool piecewise_constant() const noexcept;

  /// Integral of the profile from a to b (signed).
  double integral(double a, double b) const noexcept;
  /// sigma(u) = integral from 0 to u, so sigma(0) = 0.
  double antiderivative(double u) const noexcept { return integral(0.0, u); }
  PiecewiseLinearProfile negated() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
  Closure closure_ = Closure::Upper;
};

struct SymmetryTag {
  enum class Kind { None, Translation, Rotation };
  Kind kind = Kind::None;
  Complex direction{1.0, 0.0};  ///< unit translation direction
  Complex center{};             ///< rotation center
};

/// A piece of discontinuity geometry, used for localization and drawing.
struct Locus {
  enum class Kind { Line, Circle, Arc, Ray };
  Kind kind = Kind::Line;
  Complex point{};      ///< line point, circle/arc center, ray origin
  Complex direction{};  ///< unit direction for lines and rays
  double radius = 0.0;
  double angle_from = 0.0;  ///< arc span, counter-clockwise
  double angle_to = 0.0;
};

namespace seabeds {

struct Constant {
  double value = 1.0;
};

/// S depends on p = Re(conj(normal) z), i.e. Im z for the default normal.
struct ProfileOfIm {
  PiecewiseLinearProfile profile;
  Complex normal{0.0, 1.0};
};

/// S depends on |Im z|.
struct ProfileOfAbsIm {
  PiecewiseLinearProfile profile;
};

/// S = slope * p + offset with p as in ProfileOfIm.
struct LinearOfIm {
  double slope = 1.0;
  double offset = 0.0;
  Complex normal{0.0, 1.0};
};

/// inside for |z - center| <= radius, outside otherwise.
struct RadialStep {
  double radius = 1.0;
  double inside = 1.0;
  double outside = 1.0;
  Complex center{};
};

/// S depends on |z - center|^2.
struct RadialProfile {
  PiecewiseLinearProfile profile;
  Complex center{};
};

/// A circular arc mirror. "above" holds outside the circle within the
/// angular span axis +- half_angle (arc included); "below" elsewhere.
struct ArcMirror {
  Complex center{};
  double radius = 1.0;
  double below = 1.0;
  double above = -1.0;
  double axis = kPi / 2;
  double half_angle = kPi / 3;
};

}  // namespace seabeds

class Seabed {
 public:
  using Variant = std::variant<seabeds::Constant, seabeds::ProfileOfIm, seabeds::ProfileOfAbsIm,
                               seabeds::LinearOfIm, seabeds::RadialStep, seabeds::RadialProfile,
                               seabeds::ArcMirror>;

  Seabed() : Seabed(seabeds::Constant{1.0}) {}
  Seabed(Variant v);  // NOLINT: implicit from any variant alternative

  static Seabed constant(double value) { return Seabed(seabeds::Constant{value}); }
  /// below for Im z < at, above for Im z >= at.
  static Seabed half_plane_step(double below, double above, double at = 0.0);
  static Seabed linear_of_im(double slope, double offset = 0.0);
  static Seabed radial_step(double radius, double inside, double outside, Complex center = {});

  const Variant& variant() const noexcept { return v_; }
  std::string describe() const;

  double eval(Complex z) const;
  double operator()(Complex z) const { return eval(z); }

  /// Region labels: S restricted to one region is smooth and extends smoothly
  /// beyond it through value_in.
  int region_of(Complex z) const;
  double value_in(int region, Complex z) const;
  /// True when S is constant on every region.
  bool piecewise_constant() const noexcept;
  /// True when S jumps somewhere (as opposed to being continuous).
  bool has_discontinuities() const noexcept;

  std::vector<Locus> discontinuities() const;
  /// Nearest point on any discontinuity locus; z itself when there is none.
  Complex project_to_locus(Complex z) const;
  std::optional<double> crossing_fraction(Complex z0, Complex z1) const;

  SymmetryTag symmetry() const;
  /// The coordinate on which sigma acts: the normal coordinate for
  /// translations, |z - center|^2 for rotations. Throws NoSymmetry.
  double symmetry_coordinate(Complex z) const;
  /// sigma with sigma' = S along symmetry_coordinate and sigma(0) = 0.
  /// Throws NoSymmetry for seabeds without a global symmetry.
  std::function<double(double)> antiderivative() const;

  Seabed negated() const;

 private:
  Variant v_;
};

}  // namespace poledyn
