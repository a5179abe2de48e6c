#pragma once

// Shared value types for pole dynamics: strengths, poles, states,
// trajectories and the error hierarchy used across the library.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace poledyn {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Default collision threshold on pairwise separation.
inline constexpr double kDefaultCollisionEps = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two poles came closer than the collision threshold.
class CollisionError : public Error {
 public:
  CollisionError(std::size_t first, std::size_t second, double separation);
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  double separation() const noexcept { return separation_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double separation_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroTotalStrength : public Error {
 public:
  using Error::Error;
};

class ZeroSubtotalStrength : public Error {
 public:
  using Error::Error;
};

class NoSymmetry : public Error {
 public:
  using Error::Error;
};

class NonImaginaryStrength : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

bool is_finite(Complex z) noexcept;

/// Strength coefficients keyed by exponent n; the pole induces
/// conj(mu_n * (z - z_pole)^n) at z.
struct StrengthSpec {
  std::map<int, Complex> coefficients;

  static StrengthSpec homogeneous(int exponent, Complex mu);
  /// The usual n = -1 pole (vortex for imaginary mu, source/sink for real).
  static StrengthSpec simple(Complex mu) { return homogeneous(-1, mu); }

  Complex at(int exponent) const;
  bool is_homogeneous(int exponent) const;
};

struct Pole {
  Complex position;
  StrengthSpec strength;
  std::string label;
};

/// Positions of all poles at one instant; collisions are never states.
struct SystemState {
  double time = 0.0;
  std::vector<Complex> positions;

  std::size_t size() const noexcept { return positions.size(); }
};

enum class EventKind { BoundaryCrossing, Collision, ZenoTrap, Horizon, Failure };

std::string_view to_string(EventKind kind) noexcept;
EventKind event_kind_from_string(std::string_view name);

struct Event {
  EventKind kind = EventKind::Horizon;
  double time = 0.0;
  std::string pole;  ///< label; empty when the event concerns the whole system
  Complex location;
  std::string detail;
};

struct Trajectory {
  std::vector<std::string> labels;
  std::vector<SystemState> samples;
  std::vector<Event> events;

  bool empty() const noexcept { return samples.empty(); }
  const SystemState& front() const { return samples.front(); }
  const SystemState& back() const { return samples.back(); }
  std::size_t pole_index(std::string_view label) const;

  /// True when the trajectory ended on a collision, Zeno trap or failure.
  bool terminated_early() const noexcept;
  const Event* terminal_event() const noexcept;
  std::size_t count(EventKind kind) const noexcept;
};

struct SeparationEntry {
  std::string first;
  std::string second;
  double distance;
};

/// |z_i - z_j| for all i < j, keyed by label pair.
std::vector<SeparationEntry> pairwise_separations(const SystemState& state,
                                                  std::span<const std::string> labels);

double min_separation(std::span<const Complex> positions) noexcept;

/// Checks unique labels and finite positions/strengths; throws Error.
void validate_poles(std::span<const Pole> poles);

std::vector<Complex> positions_of(std::span<const Pole> poles);
std::vector<std::string> labels_of(std::span<const Pole> poles);
/// The n = -1 coefficient of every pole.
std::vector<Complex> simple_strengths(std::span<const Pole> poles);

}  // namespace poledyn
