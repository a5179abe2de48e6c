#pragma once

// Closed-form solutions and laws used as oracles for the integrator.
// Angles are pair-axis angles measured from the boundary normal.

#include <optional>
#include <string_view>
#include <vector>

#include "poledyn/types.hpp"

namespace poledyn {

/// dZ/dt = M / conj(Z) with Z(0) = Z0.
struct SelfSimilarSpec {
  Complex Z0{1.0, 0.0};
  Complex M{0.0, 1.0};
};

Complex self_similar(const SelfSimilarSpec& spec, double t);
/// -|Z0|^2 / (2 Re M) when Re M < 0, otherwise empty.
std::optional<double> collapse_time(const SelfSimilarSpec& spec);

struct PairReduction {
  bool parallel = false;  ///< mu + mu' = 0: rigid translation
  Complex center{};       ///< center of strength (non-parallel case)
  Complex M{};            ///< z - c obeys d/dt (z - c) = M / conj(z - c)
  Complex velocity{};     ///< common velocity (parallel case)
};

PairReduction pair_reduction(Complex z, Complex zp, Complex mu, Complex mup);

struct PolygonReduction {
  Complex M{};
  bool immobilized = false;
};

/// N poles of strength mu on a regular polygon around a center pole mup.
PolygonReduction polygon_reduction(int n, Complex mu, Complex mup);
/// The strength of the center pole that immobilizes the polygon.
Complex immobilizing_center_strength(int n, Complex mu);
/// Vertices labelled v0..v{n-1} and the center labelled "c".
std::vector<Pole> regular_polygon(int n, Complex center, double radius, double phase, Complex mu,
                                  Complex mup);

struct BoundaryInteraction {
  double theta1 = 0.0;
  double s1 = 1.0;
  double s2 = 1.0;
  Complex mu{0.0, 1.0};
};

enum class OutcomeKind { Refracted, Reflected, Skid, Trapped, Separated };
std::string_view to_string(OutcomeKind kind) noexcept;

struct RefractionOutcome {
  OutcomeKind kind = OutcomeKind::Refracted;
  double theta2 = 0.0;
  /// Set when the root came from the reflected range for a general strength,
  /// or fell outside the nominal range of its kind.
  bool fallback_branch = false;
};

/// s sin(theta) exp(-(Re mu / Im mu) theta).
double snell_invariant(double s, double theta, Complex mu);
RefractionOutcome snell(const BoundaryInteraction& b);
RefractionOutcome reflect(const BoundaryInteraction& b);
/// arcsin(s2/s1) for s2 < s1; DomainError otherwise.
double critical_angle(double s1, double s2);

/// i (s2 - s1)/(s2 + s1) |Im dz|.
Complex leapfrog_advance(double s1, double s2, Complex dz);

/// 2 arctan((1 - r)/d).
double rainbow_angle(double r, double d);

/// Envelope of vertical rays reflected inside a circle of radius R centered
/// at the origin, parametrized by the polar angle phi of the hit point from
/// the upward vertical.
Complex circle_caustic(double radius, double phi);
/// Height at which a vertical ray at abscissa x crosses the axis after one
/// reflection in the circle.
double reflected_axis_crossing(double radius, double x);

}  // namespace poledyn
