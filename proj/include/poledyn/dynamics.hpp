#pragma once

// Instantaneous pole velocities: general multipole strengths, fixed simple
// strengths, and strengths modulated by a seabed at the inducing pole.

#include <span>
#include <vector>

#include "poledyn/seabed.hpp"
#include "poledyn/types.hpp"

namespace poledyn {

using VelocityField = std::vector<Complex>;

/// dz_i/dt = sum_{j != i} sum_n conj(mu_n^j (z_i - z_j)^n).
VelocityField velocity_general(const SystemState& state, std::span<const Pole> poles,
                               double eps_coll = kDefaultCollisionEps);

/// dz_i/dt = sum_{j != i} conj(mu_j) / conj(z_i - z_j).
VelocityField velocity_fixed(const SystemState& state, std::span<const Complex> mus,
                             double eps_coll = kDefaultCollisionEps);

/// As velocity_fixed with every source term scaled by S(z_j).
VelocityField velocity_seabed(const SystemState& state, std::span<const Complex> mus,
                              const Seabed& seabed, double eps_coll = kDefaultCollisionEps);

/// Core of the fixed and seabed fields with per-pole weights s_j already
/// chosen; writes into out and throws CollisionError below eps_coll.
void velocity_weighted(std::span<const Complex> z, std::span<const Complex> mus,
                       std::span<const double> s, std::span<Complex> out,
                       double eps_coll = kDefaultCollisionEps);

/// Throws CollisionError naming the closest pair if it is below eps_coll.
void check_collision(std::span<const Complex> z, double eps_coll);

}  // namespace poledyn
