#include "poledyn/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "poledyn/dynamics.hpp"

namespace poledyn {
namespace {

void require_sizes(const SystemState& state, std::span<const Complex> mus) {
  if (state.size() != mus.size()) throw Error("strength count does not match state size");
}

Complex green(Complex d, int n0) {
  if (n0 == -1) return std::log(d);
  const int e = n0 + 1;
  Complex p = 1.0;
  const Complex base = e < 0 ? 1.0 / d : d;
  for (int k = 0; k < std::abs(e); ++k) p *= base;
  return p / static_cast<double>(e);
}

double weighted_log_h(std::span<const Complex> z, std::span<const Complex> mus,
                      std::span<const double> s, std::span<const double> args) {
  double h = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j, ++m) {
      const Complex w = mus[i] * mus[j] * s[i] * s[j];
      h += w.real() * std::log(std::abs(z[i] - z[j])) - w.imag() * args[m];
    }
  }
  return h;
}

double h_scale(std::span<const Complex> z, std::span<const Complex> mus, std::span<const double> s) {
  double sc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      sc += std::abs(mus[i] * mus[j]) * std::abs(s[i] * s[j]) *
            std::max(1.0, std::abs(std::log(std::abs(z[i] - z[j]))));
    }
  }
  return sc;
}

}  // namespace

double hamiltonian_homogeneous(const SystemState& state, std::span<const Complex> mus, int n0,
                               double eps_coll) {
  require_sizes(state, mus);
  check_collision(state.positions, eps_coll);
  const auto& z = state.positions;
  Complex h{};
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) h += mus[i] * mus[j] * green(z[i] - z[j], n0);
  }
  return h.real();
}

double hamiltonian_seabed(const SystemState& state, std::span<const Complex> mus,
                          const Seabed& seabed, double eps_coll) {
  require_sizes(state, mus);
  check_collision(state.positions, eps_coll);
  const auto& z = state.positions;
  double h = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      h += (mus[i] * mus[j] * seabed.eval(z[i]) * seabed.eval(z[j]) * std::log(z[i] - z[j])).real();
    }
  }
  return h;
}

Complex center_of_strength(const SystemState& state, std::span<const Complex> mus) {
  require_sizes(state, mus);
  Complex total{};
  Complex acc{};
  for (std::size_t i = 0; i < mus.size(); ++i) {
    total += mus[i];
    acc += std::conj(mus[i]) * state.positions[i];
  }
  if (total == Complex{}) throw ZeroTotalStrength("total strength is zero; use subcenter_difference");
  return acc / std::conj(total);
}

Complex subcenter_difference(const SystemState& state, std::span<const Complex> mus,
                             std::span<const std::size_t> a, std::span<const std::size_t> b) {
  require_sizes(state, mus);
  std::set<std::size_t> seen;
  for (auto idx : {a, b}) {
    for (std::size_t i : idx) {
      if (i >= mus.size()) throw Error("partition index out of range");
      if (!seen.insert(i).second) throw Error("partition sets overlap");
    }
  }
  if (seen.size() != mus.size()) throw Error("partition does not cover every pole");
  auto sub = [&](std::span<const std::size_t> idx) {
    Complex total{};
    Complex acc{};
    for (std::size_t i : idx) {
      total += mus[i];
      acc += std::conj(mus[i]) * state.positions[i];
    }
    if (total == Complex{}) throw ZeroSubtotalStrength("a partition subtotal strength is zero");
    return acc / std::conj(total);
  };
  return sub(a) - sub(b);
}

Complex even_degree_pair_invariant(Complex z, Complex zp, Complex mu, Complex mup) {
  return std::conj(mu) * z - std::conj(mup) * zp;
}

double noether_momentum(const SystemState& state, std::span<const Complex> mus,
                        const Seabed& seabed) {
  require_sizes(state, mus);
  for (auto mu : mus) {
    if (mu.real() != 0.0) throw NonImaginaryStrength("noether momentum needs imaginary strengths");
  }
  const auto sigma = seabed.antiderivative();
  double psi = 0.0;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    // -i mu_i is real for imaginary mu_i
    psi += mus[i].imag() * sigma(seabed.symmetry_coordinate(state.positions[i]));
  }
  return psi;
}

std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::Hamiltonian: return "hamiltonian";
    case Quantity::CenterOfStrength: return "center_of_strength";
    case Quantity::SubcenterDifference: return "subcenter_difference";
    case Quantity::EvenDegreeInvariant: return "even_degree_invariant";
    case Quantity::Separation: return "separation";
    case Quantity::NoetherMomentum: return "noether_momentum";
  }
  return "unknown";
}

Quantity quantity_from_string(std::string_view name) {
  for (Quantity q : {Quantity::Hamiltonian, Quantity::CenterOfStrength, Quantity::SubcenterDifference,
                     Quantity::EvenDegreeInvariant, Quantity::Separation, Quantity::NoetherMomentum}) {
    if (to_string(q) == name) return q;
  }
  throw Error("unknown quantity '" + std::string(name) + "'");
}

bool piecewise_conserved(Quantity q) noexcept {
  return q == Quantity::Hamiltonian || q == Quantity::CenterOfStrength ||
         q == Quantity::SubcenterDifference || q == Quantity::EvenDegreeInvariant;
}

ConservedQuantityReport drift_report(const Trajectory& tr, const QuantitySelector& sel) {
  if (tr.samples.empty()) throw Error("drift report needs a non-empty trajectory");
  const std::size_t n = tr.samples.front().size();
  if (sel.mus.size() != n && sel.quantity != Quantity::Separation) {
    throw Error("selector strengths do not match the trajectory");
  }
  if ((sel.quantity == Quantity::Separation || sel.quantity == Quantity::EvenDegreeInvariant) &&
      (sel.first >= n || sel.second >= n || sel.first == sel.second)) {
    throw Error("selector pair is out of range");
  }

  ConservedQuantityReport rep;
  rep.name = std::string(to_string(sel.quantity));
  std::vector<double> scales;
  scales.reserve(tr.samples.size());

  // unwrapped pair arguments for the log Hamiltonian
  std::vector<double> args;
  std::vector<double> s(n, 1.0);

  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const SystemState& st = tr.samples[k];
    const auto& z = st.positions;
    Complex value{};
    double scale = 1.0;
    switch (sel.quantity) {
      case Quantity::Hamiltonian: {
        if (sel.n0 != -1) {
          value = hamiltonian_homogeneous(st, sel.mus, sel.n0, 0.0);
          double sc = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) sc += std::abs(sel.mus[i] * sel.mus[j] * green(z[i] - z[j], sel.n0));
          }
          scale = sc;
          break;
        }
        for (std::size_t i = 0; i < n; ++i) s[i] = sel.seabed.eval(z[i]);
        std::size_t m = 0;
        if (args.empty()) {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) args.push_back(std::arg(z[i] - z[j]));
          }
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++m) {
              const double a = std::arg(z[i] - z[j]);
              args[m] += std::remainder(a - args[m], 2.0 * kPi);
            }
          }
        }
        value = weighted_log_h(z, sel.mus, s, args);
        scale = h_scale(z, sel.mus, s);
        break;
      }
      case Quantity::CenterOfStrength: {
        value = center_of_strength(st, sel.mus);
        double acc = 0.0;
        Complex total{};
        for (std::size_t i = 0; i < n; ++i) {
          acc += std::abs(sel.mus[i]) * std::abs(z[i]);
          total += sel.mus[i];
        }
        scale = std::max(acc / std::abs(total), min_separation(z));
        break;
      }
      case Quantity::SubcenterDifference: {
        value = subcenter_difference(st, sel.mus, sel.part_a, sel.part_b);
        double acc = 0.0;
        double mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += std::abs(sel.mus[i]) * std::abs(z[i]);
          mag += std::abs(sel.mus[i]);
        }
        scale = std::max(acc / mag, min_separation(z));
        break;
      }
      case Quantity::EvenDegreeInvariant: {
        const std::size_t a = sel.first;
        const std::size_t b = sel.second;
        value = even_degree_pair_invariant(z[a], z[b], sel.mus[a], sel.mus[b]);
        scale = std::abs(sel.mus[a]) * std::abs(z[a]) + std::abs(sel.mus[b]) * std::abs(z[b]);
        break;
      }
      case Quantity::Separation:
        value = std::abs(z[sel.first] - z[sel.second]);
        scale = value.real();
        break;
      case Quantity::NoetherMomentum: {
        value = noether_momentum(st, sel.mus, sel.seabed);
        double sc = 0.0;
        for (std::size_t i = 0; i < n; ++i) sc += std::abs(sel.mus[i]) * std::abs(sel.seabed.eval(z[i]));
        scale = std::max(std::abs(value), sc * min_separation(z));
        break;
      }
    }
    rep.samples.emplace_back(st.time, value);
    scales.push_back(scale > 0.0 ? scale : 1.0);
  }

  std::vector<double> event_times;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::BoundaryCrossing || e.kind == EventKind::ZenoTrap) event_times.push_back(e.time);
  }
  std::sort(event_times.begin(), event_times.end());
  // samples this close to a crossing may sit on either side of the locus
  auto at_event = [&](double t) {
    const double guard = 1e-9 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(event_times.begin(), event_times.end(), t - guard);
    return it != event_times.end() && *it <= t + guard;
  };

  const bool piecewise = piecewise_conserved(sel.quantity);
  // segment boundaries: every event time strictly inside the sampled span
  std::vector<double> cuts;
  if (piecewise) {
    for (double t : event_times) {
      if (t > tr.samples.front().time && t < tr.samples.back().time) cuts.push_back(t);
    }
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }

  std::size_t seg = 0;
  SegmentDrift cur;
  bool open = false;
  double ref_scale = 1.0;
  auto close = [&] {
    if (open && cur.samples > 0) rep.per_segment.push_back(cur);
    open = false;
  };
  for (std::size_t k = 0; k < rep.samples.size(); ++k) {
    const double t = rep.samples[k].first;
    while (seg < cuts.size() && t >= cuts[seg]) {
      close();
      ++seg;
    }
    if (piecewise && at_event(t) && k != 0) continue;
    const Complex v = rep.samples[k].second;
    if (!open) {
      cur = SegmentDrift{};
      cur.t_begin = t;
      cur.start = v;
      ref_scale = scales[k];
      open = true;
    }
    cur.t_end = t;
    ++cur.samples;
    const double d = std::abs(v - cur.start);
    cur.max_abs_drift = std::max(cur.max_abs_drift, d);
    cur.max_rel_drift = std::max(cur.max_rel_drift, d / ref_scale);
  }
  close();
  for (const auto& sd : rep.per_segment) {
    rep.max_abs_drift = std::max(rep.max_abs_drift, sd.max_abs_drift);
    rep.max_rel_drift = std::max(rep.max_rel_drift, sd.max_rel_drift);
  }
  return rep;
}

}  // namespace poledyn
