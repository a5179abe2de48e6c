#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#include "poledyn/kernels.hpp"

namespace poledyn::kernels {
namespace {

struct Table {
  detail::InducedFn induced;
  detail::MinSepFn min_sep;
};

Table table_for(Isa isa) {
  switch (isa) {
#if defined(POLEDYN_HAVE_AVX2)
    case Isa::Avx2: return {detail::induced_avx2, detail::min_sep_avx2};
#endif
#if defined(POLEDYN_HAVE_NEON)
    case Isa::Neon: return {detail::induced_neon, detail::min_sep_neon};
#endif
    default: return {detail::induced_scalar, detail::min_sep_scalar};
  }
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect()};
  return slot;
}

struct Soa {
  std::vector<double> x, y, wr, wi, vx, vy;
};

Soa& scratch() {
  thread_local Soa s;
  return s;
}

}  // namespace

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(POLEDYN_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(POLEDYN_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() noexcept {
  if (const char* env = std::getenv("POLEDYN_ISA")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == name(isa) && supported(isa)) return isa;
    }
  }
  if (supported(Isa::Avx2)) return Isa::Avx2;
  if (supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!supported(isa)) throw Error("kernel variant '" + std::string(name(isa)) + "' is not supported here");
  active_slot().store(isa, std::memory_order_relaxed);
}

double induced_velocity(Isa isa, std::span<const Complex> z, std::span<const Complex> w,
                        std::span<Complex> out) {
  if (isa != active() && !supported(isa)) throw Error("kernel variant '" + std::string(name(isa)) + "' is not supported here");
  const std::size_t n = z.size();
  if (w.size() != n || out.size() != n) throw Error("kernel input sizes differ");
  Soa& s = scratch();
  s.x.resize(n);
  s.y.resize(n);
  s.wr.resize(n);
  s.wi.resize(n);
  s.vx.resize(n);
  s.vy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = z[i].real();
    s.y[i] = z[i].imag();
    s.wr[i] = w[i].real();
    s.wi[i] = w[i].imag();
  }
  const double m = table_for(isa).induced(s.x.data(), s.y.data(), s.wr.data(), s.wi.data(), n,
                                          s.vx.data(), s.vy.data());
  for (std::size_t i = 0; i < n; ++i) out[i] = {s.vx[i], s.vy[i]};
  return m;
}

double induced_velocity(std::span<const Complex> z, std::span<const Complex> w,
                        std::span<Complex> out) {
  return induced_velocity(active(), z, w, out);
}

double min_separation_sq(Isa isa, std::span<const Complex> z) {
  if (isa != active() && !supported(isa)) throw Error("kernel variant '" + std::string(name(isa)) + "' is not supported here");
  Soa& s = scratch();
  s.x.resize(z.size());
  s.y.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    s.x[i] = z[i].real();
    s.y[i] = z[i].imag();
  }
  return table_for(isa).min_sep(s.x.data(), s.y.data(), z.size());
}

double min_separation_sq(std::span<const Complex> z) { return min_separation_sq(active(), z); }

}  // namespace poledyn::kernels
