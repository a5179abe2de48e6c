#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "poledyn/dynamics.hpp"
#include "poledyn/integrator.hpp"

namespace poledyn {
namespace {

Complex ipow(Complex d, int n) {
  if (n == 0) return 1.0;
  if (n < 0) return 1.0 / ipow(d, -n);
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= d;
    d *= d;
    n >>= 1;
  }
  return result;
}

bool all_finite(std::span<const Complex> z) {
  return std::all_of(z.begin(), z.end(), [](Complex c) { return is_finite(c); });
}

// Right-hand side with each pole's S frozen to its tracked region formula.
class FrozenRhs {
 public:
  FrozenRhs(std::span<const Pole> poles, const Seabed& seabed, const std::vector<int>& regions,
            double eps)
      : poles_(poles), seabed_(seabed), regions_(regions), eps_(eps), s_(poles.size()) {
    mus_ = simple_strengths(poles);
    for (const auto& p : poles) {
      for (const auto& [n, mu] : p.strength.coefficients) {
        if (n != -1 && mu != Complex{}) general_ = true;
      }
    }
  }

  void operator()(std::span<const Complex> z, std::span<Complex> dz) {
    for (std::size_t j = 0; j < z.size(); ++j) s_[j] = seabed_.value_in(regions_[j], z[j]);
    velocity_weighted(z, mus_, s_, dz, eps_);
    if (!general_) return;
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) continue;
        const Complex d = z[i] - z[j];
        for (const auto& [n, mu] : poles_[j].strength.coefficients) {
          if (n == -1 || mu == Complex{}) continue;
          dz[i] += std::conj(mu * s_[j] * ipow(d, n));
        }
      }
    }
  }

 private:
  std::span<const Pole> poles_;
  const Seabed& seabed_;
  const std::vector<int>& regions_;
  double eps_;
  std::vector<Complex> mus_;
  std::vector<double> s_;
  bool general_ = false;
};

struct Closest {
  std::size_t i = 0;
  std::size_t j = 0;
  double d = std::numeric_limits<double>::infinity();
};

Closest closest_pair(std::span<const Complex> z) {
  Closest c;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double d = std::abs(z[i] - z[j]);
      if (d < c.d) c = {i, j, d};
    }
  }
  return c;
}

Complex centroid(std::span<const Complex> z) {
  Complex s{};
  for (auto c : z) s += c;
  return z.empty() ? s : s / static_cast<double>(z.size());
}

bool jumps(const Seabed& seabed, int from, int to, Complex z) {
  const double a = seabed.value_in(from, z);
  const double b = seabed.value_in(to, z);
  return std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Bisection on "some tracked pole has left its region" over theta.
template <class Eval, class Changed>
double bisect(Eval&& eval, Changed&& changed, double lo, double hi, double scale, double tol) {
  for (int it = 0; it < 200 && (hi - lo) * scale > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (changed(eval(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::Rk4 ? "rk4" : "dopri5"; }

Method method_from_string(std::string_view name) {
  if (name == "dopri5") return Method::Dopri5;
  if (name == "rk4") return Method::Rk4;
  throw Error("unknown integration method '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(field) + " must be positive");
  };
  positive(rel_tol, "rel_tol");
  positive(abs_tol, "abs_tol");
  positive(max_step, "max_step");
  positive(eps_coll, "eps_coll");
  positive(event_tol, "event_tol");
  positive(zeno.per_time, "zeno_per_time");
  positive(sample_interval, "sample_interval");
  positive(fixed_step, "fixed_step");
  if (!std::isfinite(t_end)) throw Error("t_end must be finite");
  if (zeno.max_events < 2) throw Error("zeno_max_events must be at least 2");
  if (checkpoints < 1) throw Error("checkpoints must be at least 1");
  if (max_steps < 1) throw Error("max_steps must be at least 1");
}

Crossing locate_crossing(const DenseOutput& dense, std::span<const int> regions,
                         std::span<const std::string> labels, const Seabed& seabed,
                         double theta_lo, double theta_hi, double event_tol) {
  const std::size_t n = regions.size();
  std::vector<Complex> buf(n);
  auto eval = [&](double th) -> const std::vector<Complex>& {
    dense.eval(th, buf);
    return buf;
  };
  auto moved = [&](const std::vector<Complex>& z) {
    for (std::size_t i = 0; i < n; ++i) {
      if (seabed.region_of(z[i]) != regions[i]) return true;
    }
    return false;
  };
  if (!moved(eval(theta_hi))) throw Error("crossing is not bracketed");
  double hi = bisect(eval, moved, theta_lo, theta_hi, std::abs(dense.h()), event_tol);

  auto crossed_at = [&](double th) {
    std::vector<std::size_t> out;
    const auto& z = eval(th);
    for (std::size_t i = 0; i < n; ++i) {
      if (seabed.region_of(z[i]) != regions[i]) out.push_back(i);
    }
    return out;
  };
  std::vector<std::size_t> crossed = crossed_at(hi);
  // poles crossing within event_tol of the first are handled as simultaneous
  const double th2 = std::min(1.0, hi + event_tol / std::abs(dense.h()));
  if (th2 > hi) {
    std::vector<std::size_t> later = crossed_at(th2);
    if (later.size() > crossed.size() &&
        std::includes(later.begin(), later.end(), crossed.begin(), crossed.end())) {
      crossed = std::move(later);
      hi = th2;
    }
  }

  Crossing c;
  c.time = dense.t0() + hi * dense.h();
  c.state.time = c.time;
  c.state.positions = eval(hi);
  for (std::size_t i : crossed) {
    c.poles.push_back(i < labels.size() ? labels[i] : std::to_string(i));
    c.locations.push_back(seabed.project_to_locus(c.state.positions[i]));
  }
  return c;
}

Crossing locate_crossing(const SystemState& before, const SystemState& after,
                         std::span<const std::string> labels, const Seabed& seabed,
                         std::string_view pole_label, double event_tol) {
  const std::size_t n = before.size();
  if (after.size() != n || labels.size() != n) throw Error("crossing states have mismatched sizes");
  std::optional<std::size_t> only;
  if (!pole_label.empty()) {
    auto it = std::find(labels.begin(), labels.end(), pole_label);
    if (it == labels.end()) throw Error("no pole labelled '" + std::string(pole_label) + "'");
    only = static_cast<std::size_t>(it - labels.begin());
  }
  std::vector<int> regions(n);
  for (std::size_t i = 0; i < n; ++i) regions[i] = seabed.region_of(before.positions[i]);
  std::vector<Complex> buf(n);
  auto eval = [&](double th) -> const std::vector<Complex>& {
    for (std::size_t i = 0; i < n; ++i) {
      buf[i] = before.positions[i] + th * (after.positions[i] - before.positions[i]);
    }
    return buf;
  };
  auto moved = [&](const std::vector<Complex>& z) {
    for (std::size_t i = 0; i < n; ++i) {
      if (only && i != *only) continue;
      if (seabed.region_of(z[i]) != regions[i]) return true;
    }
    return false;
  };
  if (!moved(eval(1.0))) throw Error("crossing is not bracketed between the two states");
  const double span = after.time - before.time;
  const double hi = bisect(eval, moved, 0.0, 1.0, std::abs(span), event_tol);
  Crossing c;
  c.time = before.time + hi * span;
  c.state.time = c.time;
  c.state.positions = eval(hi);
  for (std::size_t i = 0; i < n; ++i) {
    if (only && i != *only) continue;
    if (seabed.region_of(c.state.positions[i]) == regions[i]) continue;
    c.poles.push_back(labels[i]);
    c.locations.push_back(seabed.project_to_locus(c.state.positions[i]));
  }
  return c;
}

Trajectory integrate(const SystemState& initial, std::span<const Pole> poles,
                     const Seabed& seabed, const IntegratorConfig& cfg) {
  cfg.validate();
  validate_poles(poles);
  if (initial.size() != poles.size()) throw Error("initial state does not match the pole count");
  if (!all_finite(initial.positions)) throw Error("initial state has non-finite positions");
  const double t0 = initial.time;
  if (!(cfg.t_end > t0)) throw Error("t_end must exceed the initial time");

  Trajectory tr;
  tr.labels = labels_of(poles);
  const std::size_t n = poles.size();

  double t = t0;
  std::vector<Complex> z = initial.positions;
  std::vector<int> regions(n);
  for (std::size_t i = 0; i < n; ++i) regions[i] = seabed.region_of(z[i]);
  FrozenRhs rhs(poles, seabed, regions, cfg.eps_coll);
  const RhsFn f = [&rhs](std::span<const Complex> y, std::span<Complex> dy) { rhs(y, dy); };

  auto push_sample = [&](double ts, std::span<const Complex> zs) {
    if (tr.samples.empty() || ts > tr.samples.back().time) {
      tr.samples.push_back({ts, std::vector<Complex>(zs.begin(), zs.end())});
    }
  };
  long grid_k = 1;
  auto grid_time = [&](long k) { return t0 + static_cast<double>(k) * cfg.sample_interval; };
  std::vector<Complex> gbuf(n);
  // grid samples with time <= upto (strictly below when open)
  auto emit_grid = [&](const DenseOutput& d, double upto, bool open) {
    for (;;) {
      const double g = grid_time(grid_k);
      if (g > cfg.t_end || g > upto || (open && g >= upto)) break;
      d.eval((g - d.t0()) / d.h(), gbuf);
      push_sample(g, gbuf);
      ++grid_k;
    }
  };
  auto finish = [&](EventKind kind, double te, std::string pole, Complex loc, std::string detail,
                    std::span<const Complex> zs) {
    push_sample(te, zs);
    tr.events.push_back({kind, te, std::move(pole), loc, std::move(detail)});
  };
  auto collision_event = [&](double te, std::span<const Complex> zs, const std::string& why) {
    const Closest c = closest_pair(zs);
    const std::string detail = why + "; closest pair " + tr.labels[c.i] + "/" + tr.labels[c.j] +
                               " at separation " + std::to_string(c.d);
    finish(EventKind::Collision, te, tr.labels[c.i], 0.5 * (zs[c.i] + zs[c.j]), detail, zs);
  };

  push_sample(t, z);
  std::vector<Complex> k1(n);
  try {
    f(z, k1);
  } catch (const CollisionError&) {
    collision_event(t, z, "initial separation below threshold");
    return tr;
  }

  double h = cfg.method == Method::Rk4
                 ? cfg.fixed_step
                 : StepKernel::initial_step(f, z, k1, cfg.rel_tol, cfg.abs_tol, cfg.max_step);
  std::deque<double> recent;
  bool last_rejected = false;
  long steps = 0;

  while (t < cfg.t_end) {
    if (++steps > cfg.max_steps) {
      finish(EventKind::Failure, t, {}, centroid(z), "step limit reached", z);
      return tr;
    }
    double hs = cfg.method == Method::Rk4 ? cfg.fixed_step : std::min(h, cfg.max_step);
    const bool final_step = t + hs >= cfg.t_end;
    if (final_step) hs = cfg.t_end - t;

    StepKernel::Result r;
    bool collided = false;
    try {
      r = cfg.method == Method::Rk4 ? StepKernel::rk4(f, t, z, k1, hs)
                                    : StepKernel::dopri5(f, t, z, k1, hs, cfg.rel_tol, cfg.abs_tol);
    } catch (const CollisionError&) {
      collided = true;
    }
    const bool bad = collided || !std::isfinite(r.error) || !all_finite(r.y1) || !all_finite(r.f1);
    if (bad || r.error > 1.0) {
      if (cfg.method == Method::Rk4) {
        if (collided || bad) {
          collision_event(t, z, "fixed step ran into a singularity");
        } else {
          finish(EventKind::Failure, t, {}, centroid(z), "fixed step failed", z);
        }
        return tr;
      }
      const double fac = bad ? 0.25 : std::max(0.2, 0.9 * std::pow(r.error, -0.2));
      h = hs * fac;
      last_rejected = true;
      const double hmin = 1e-14 * std::max(1.0, std::abs(t));
      if (h < hmin) {
        collision_event(t, z, "step size underflow");
        return tr;
      }
      continue;
    }

    // region checks along the accepted step
    std::optional<Crossing> crossing;
    {
      double prev = 0.0;
      const int kc = cfg.checkpoints;
      for (int c = 1; c <= kc && !crossing; ++c) {
        const double th = static_cast<double>(c) / kc;
        r.dense.eval(th, gbuf);
        bool moved = false;
        for (std::size_t i = 0; i < n && !moved; ++i) moved = seabed.region_of(gbuf[i]) != regions[i];
        if (moved) {
          crossing = locate_crossing(r.dense, regions, tr.labels, seabed, prev, th, cfg.event_tol);
        }
        prev = th;
      }
    }

    if (crossing) {
      emit_grid(r.dense, crossing->time, true);
      push_sample(crossing->time, crossing->state.positions);
      t = crossing->time;
      z = crossing->state.positions;
      std::string last_pole;
      Complex last_loc{};
      for (std::size_t m = 0; m < crossing->poles.size(); ++m) {
        const std::size_t i = tr.pole_index(crossing->poles[m]);
        const int from = regions[i];
        const int to = seabed.region_of(z[i]);
        regions[i] = to;
        if (!jumps(seabed, from, to, z[i])) continue;
        tr.events.push_back({EventKind::BoundaryCrossing, t, crossing->poles[m], crossing->locations[m],
                             "region " + std::to_string(from) + " -> " + std::to_string(to)});
        recent.push_back(t);
        last_pole = crossing->poles[m];
        last_loc = crossing->locations[m];
      }
      while (!recent.empty() && recent.front() <= t - cfg.zeno.per_time) recent.pop_front();
      if (static_cast<int>(recent.size()) > cfg.zeno.max_events) {
        finish(EventKind::ZenoTrap, t, last_pole, last_loc,
               std::to_string(recent.size()) + " crossings within " + std::to_string(cfg.zeno.per_time),
               z);
        return tr;
      }
      try {
        f(z, k1);
      } catch (const CollisionError&) {
        collision_event(t, z, "separation below threshold at crossing");
        return tr;
      }
      h = hs;
      continue;
    }

    const double t_new = final_step ? cfg.t_end : t + hs;
    emit_grid(r.dense, t_new, false);
    t = t_new;
    z = std::move(r.y1);
    k1 = std::move(r.f1);
    if (final_step) push_sample(t, z);
    if (cfg.method == Method::Dopri5) {
      double fac = r.error > 0.0 ? 0.9 * std::pow(r.error, -0.2) : 5.0;
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = hs * fac;
      last_rejected = false;
    }
  }

  finish(EventKind::Horizon, cfg.t_end, {}, centroid(z), {}, z);
  return tr;
}

Trajectory integrate(std::span<const Pole> poles, const Seabed& seabed,
                     const IntegratorConfig& config) {
  return integrate(SystemState{0.0, positions_of(poles)}, poles, seabed, config);
}

std::vector<Pole> time_reversed(std::span<const Pole> poles) {
  std::vector<Pole> out(poles.begin(), poles.end());
  for (auto& p : out) {
    for (auto& [n, mu] : p.strength.coefficients) mu = -mu;
  }
  return out;
}

}  // namespace poledyn
