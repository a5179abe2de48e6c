#pragma once

// Conserved quantities and their drift along trajectories.

#include <span>
#include <string>
#include <vector>

#include "poledyn/seabed.hpp"
#include "poledyn/types.hpp"

namespace poledyn {

/// Re sum_{i<j} mu_i mu_j G(z_i - z_j) with G = d^{n0+1}/(n0+1), or log d
/// for n0 = -1 (principal argument).
double hamiltonian_homogeneous(const SystemState& state, std::span<const Complex> mus, int n0,
                               double eps_coll = kDefaultCollisionEps);
/// The n0 = -1 Hamiltonian with weights S(z_i) S(z_j).
double hamiltonian_seabed(const SystemState& state, std::span<const Complex> mus,
                          const Seabed& seabed, double eps_coll = kDefaultCollisionEps);

/// sum conj(mu_i) z_i / conj(sum mu_i); ZeroTotalStrength when the sum vanishes.
Complex center_of_strength(const SystemState& state, std::span<const Complex> mus);
/// Difference of the subcenters of the index sets a and b, which must
/// partition the poles. ZeroSubtotalStrength when a subtotal vanishes.
Complex subcenter_difference(const SystemState& state, std::span<const Complex> mus,
                             std::span<const std::size_t> a, std::span<const std::size_t> b);
/// conj(mu) z - conj(mu') z'.
Complex even_degree_pair_invariant(Complex z, Complex zp, Complex mu, Complex mup);
/// -sum i mu_i sigma(p_i), p the symmetry coordinate of the seabed.
/// NoSymmetry / NonImaginaryStrength on unsupported inputs.
double noether_momentum(const SystemState& state, std::span<const Complex> mus,
                        const Seabed& seabed);

enum class Quantity {
  Hamiltonian,
  CenterOfStrength,
  SubcenterDifference,
  EvenDegreeInvariant,
  Separation,
  NoetherMomentum
};

std::string_view to_string(Quantity q) noexcept;
Quantity quantity_from_string(std::string_view name);

struct QuantitySelector {
  Quantity quantity = Quantity::Separation;
  std::vector<Complex> mus;
  Seabed seabed;
  int n0 = -1;
  std::vector<std::size_t> part_a;  ///< subcenter partition
  std::vector<std::size_t> part_b;
  std::size_t first = 0;  ///< pair for separation / even-degree invariant
  std::size_t second = 1;
};

/// Piecewise quantities (H, centers) are compared only within stretches
/// between events.
bool piecewise_conserved(Quantity q) noexcept;

struct SegmentDrift {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
  Complex start{};
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
};

struct ConservedQuantityReport {
  std::string name;
  std::vector<std::pair<double, Complex>> samples;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
  std::vector<SegmentDrift> per_segment;
};

/// Evaluates the quantity at every sample. For the log Hamiltonian the pair
/// arguments are unwrapped continuously along the samples.
ConservedQuantityReport drift_report(const Trajectory& trajectory, const QuantitySelector& sel);

}  // namespace poledyn
