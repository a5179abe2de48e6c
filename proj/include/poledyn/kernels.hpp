#pragma once

// Pairwise O(N^2) kernels behind the velocity fields: a scalar reference and
// vectorized variants chosen at runtime.

#include <cstddef>
#include <span>
#include <string_view>

#include "poledyn/types.hpp"

namespace poledyn::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view name(Isa isa) noexcept;
/// Compiled in and supported by the running CPU.
bool supported(Isa isa) noexcept;
/// Best supported variant; POLEDYN_ISA=scalar|avx2|neon overrides.
Isa detect() noexcept;
Isa active() noexcept;
/// Throws Error when the variant is not supported here.
void set_active(Isa isa);

/// out[i] = sum_{j != i} w[j] (z[i] - z[j]) / |z[i] - z[j]|^2, i.e. the
/// conj(w_j) / conj(z_i - z_j) field with w already conjugated by the caller.
/// Returns the smallest squared separation seen (infinity for N < 2).
double induced_velocity(std::span<const Complex> z, std::span<const Complex> w,
                        std::span<Complex> out);
double induced_velocity(Isa isa, std::span<const Complex> z, std::span<const Complex> w,
                        std::span<Complex> out);

/// Smallest |z_i - z_j|^2 over i < j.
double min_separation_sq(std::span<const Complex> z);
double min_separation_sq(Isa isa, std::span<const Complex> z);

// Raw structure-of-arrays entry points, one set per variant.
namespace detail {
using InducedFn = double (*)(const double* x, const double* y, const double* wr,
                             const double* wi, std::size_t n, double* vx, double* vy);
using MinSepFn = double (*)(const double* x, const double* y, std::size_t n);

double induced_scalar(const double*, const double*, const double*, const double*, std::size_t,
                      double*, double*);
double min_sep_scalar(const double*, const double*, std::size_t);
#if defined(POLEDYN_HAVE_AVX2)
double induced_avx2(const double*, const double*, const double*, const double*, std::size_t,
                    double*, double*);
double min_sep_avx2(const double*, const double*, std::size_t);
#endif
#if defined(POLEDYN_HAVE_NEON)
double induced_neon(const double*, const double*, const double*, const double*, std::size_t,
                    double*, double*);
double min_sep_neon(const double*, const double*, std::size_t);
#endif
}  // namespace detail

}  // namespace poledyn::kernels
