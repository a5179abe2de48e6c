#include "poledyn/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

namespace poledyn::cli {
namespace {

constexpr double kDeg = kPi / 180.0;

void reject_unread(const Section& s) {
  auto extra = s.unread();
  if (!extra.empty()) s.fail(*extra.front(), "unknown key");
}

Complex unit_normal(const Section& s, const char* key) {
  const Complex n = s.get_complex(key, {0.0, 1.0});
  if (std::abs(n) == 0.0) s.fail(*s.find(key), "normal must be non-zero");
  return n / std::abs(n);
}

PiecewiseLinearProfile::Closure parse_closure(const Section& s) {
  const std::string c = s.get_string("closure", "upper");
  if (c == "upper") return PiecewiseLinearProfile::Closure::Upper;
  if (c == "lower") return PiecewiseLinearProfile::Closure::Lower;
  s.fail(*s.find("closure"), "expected 'upper' or 'lower'");
}

// breakpoints + pieces, or knots "u v; u v; ..."
PiecewiseLinearProfile parse_profile(const Section& s) {
  try {
    if (s.has("knots")) {
      std::vector<double> u, v;
      for (const auto& g : s.get_groups("knots")) {
        if (g.size() != 2) s.fail(*s.find("knots"), "each knot needs 'u v'");
        u.push_back(g[0]);
        v.push_back(g[1]);
      }
      return PiecewiseLinearProfile::interpolate(u, v);
    }
    std::vector<PiecewiseLinearProfile::Piece> pieces;
    for (const auto& g : s.get_groups("pieces")) {
      if (g.size() != 2) s.fail(*s.find("pieces"), "each piece needs 'slope intercept'");
      pieces.push_back({g[0], g[1]});
    }
    if (pieces.empty()) s.fail("profile needs 'pieces' or 'knots'");
    return PiecewiseLinearProfile(s.get_doubles("breakpoints"), std::move(pieces),
                                  parse_closure(s));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    s.fail(e.what());
  }
}

Complex parse_strength(const Section& s, const Entry& e) {
  std::vector<double> v;
  try {
    v = parse_doubles(e.value);
  } catch (const Error& err) {
    s.fail(e, err.what());
  }
  if (v.size() != 2) s.fail(e, "expected two numbers 're im'");
  return {v[0], v[1]};
}

Pole parse_pole(const Section& s, std::string label) {
  Pole p;
  p.label = std::move(label);
  p.position = s.require_complex("position");
  for (const auto& e : s.entries) {
    if (e.key == "strength") {
      p.strength.coefficients[-1] = parse_strength(s, e);
      s.find(e.key);
    } else if (e.key.rfind("strength.", 0) == 0) {
      long n = 0;
      try {
        n = std::lround(parse_double(e.key.substr(9)));
      } catch (const Error&) {
        s.fail(e, "exponent must be an integer");
      }
      p.strength.coefficients[static_cast<int>(n)] = parse_strength(s, e);
      s.find(e.key);
    }
  }
  if (p.strength.coefficients.empty()) s.fail("pole needs a strength");
  reject_unread(s);
  return p;
}

PairSpec parse_pair(const Section& s, std::string name) {
  PairSpec p;
  p.name = std::move(name);
  p.midpoint = s.get_complex("midpoint", {});
  if (s.has("axis_deg")) p.axis = s.require_double("axis_deg") * kDeg;
  if (s.has("heading_deg")) p.heading = s.require_double("heading_deg") * kDeg;
  if (p.axis && p.heading) s.fail("give either axis_deg or heading_deg, not both");
  if (!p.axis && !p.heading) p.axis = 0.0;
  p.separation = s.get_double("separation", 0.05);
  if (!(p.separation > 0.0)) s.fail(*s.find("separation"), "must be positive");
  p.mu = s.get_complex("mu", {0.0, 1.0});
  if (std::abs(p.mu) == 0.0) s.fail(*s.find("mu"), "must be non-zero");
  const std::string prefix = p.name.empty() ? "" : p.name + ".";
  p.minus_label = prefix + "m";
  p.plus_label = prefix + "p";
  if (const Entry* e = s.find("labels")) {
    std::istringstream ss(e->value);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra) || a == b) s.fail(*e, "expected two distinct labels");
    p.minus_label = a;
    p.plus_label = b;
  }
  reject_unread(s);
  return p;
}

EnsembleSpec parse_ensemble(const Section& s) {
  EnsembleSpec e;
  const std::string mode = s.get_string("mode", "directions");
  if (mode == "directions") {
    e.mode = EnsembleSpec::Mode::Directions;
    e.center = s.require_complex("center");
    e.from_deg = s.get_double("from_deg", 0.0);
    e.to_deg = s.get_double("to_deg", 360.0);
  } else if (mode == "line") {
    e.mode = EnsembleSpec::Mode::Line;
    e.from = s.require_complex("from");
    e.to = s.require_complex("to");
    e.heading_deg = s.get_double("heading_deg", 90.0);
  } else if (mode == "points") {
    e.mode = EnsembleSpec::Mode::Points;
    for (const auto& g : s.get_groups("midpoints")) {
      if (g.size() != 2) s.fail(*s.find("midpoints"), "each midpoint needs 'x y'");
      e.midpoints.emplace_back(g[0], g[1]);
    }
    e.headings_deg = s.get_doubles("headings_deg");
    if (e.midpoints.empty() || e.headings_deg.empty()) {
      s.fail("points mode needs 'midpoints' and 'headings_deg'");
    }
  } else {
    s.fail(*s.find("mode"), "expected directions, line or points");
  }
  if (e.mode != EnsembleSpec::Mode::Points) {
    e.count = static_cast<int>(s.get_long("count", 16));
    const int min_count = e.mode == EnsembleSpec::Mode::Line ? 2 : 1;
    if (e.count < min_count) s.fail(*s.find("count"), "too few members");
  }
  e.jitter_deg = s.get_double("jitter_deg", 0.0);
  if (e.jitter_deg < 0.0) s.fail(*s.find("jitter_deg"), "must be non-negative");
  const long seed = s.get_long("seed", 1);
  if (seed < 0) s.fail(*s.find("seed"), "must be non-negative");
  e.seed = static_cast<std::uint64_t>(seed);
  reject_unread(s);
  return e;
}

// uniform in [0, 1), identical on every platform
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Placement {
  Complex midpoint;
  double heading;
};

std::vector<Placement> ensemble_points(const EnsembleSpec& e, std::uint64_t seed) {
  std::vector<Placement> out;
  switch (e.mode) {
    case EnsembleSpec::Mode::Directions: {
      // full turns exclude the end point so no direction repeats
      const double span = e.to_deg - e.from_deg;
      const bool full = std::abs(std::abs(span) - 360.0) < 1e-12;
      const int div = full || e.count == 1 ? e.count : e.count - 1;
      for (int k = 0; k < e.count; ++k) {
        out.push_back({e.center, (e.from_deg + span * k / div) * kDeg});
      }
      break;
    }
    case EnsembleSpec::Mode::Line:
      for (int k = 0; k < e.count; ++k) {
        const double f = static_cast<double>(k) / (e.count - 1);
        out.push_back({e.from + f * (e.to - e.from), e.heading_deg * kDeg});
      }
      break;
    case EnsembleSpec::Mode::Points:
      for (Complex m : e.midpoints) {
        for (double h : e.headings_deg) out.push_back({m, h * kDeg});
      }
      break;
  }
  if (e.jitter_deg > 0.0) {
    std::mt19937_64 rng(seed);
    for (auto& p : out) p.heading += (2.0 * unit_uniform(rng) - 1.0) * e.jitter_deg * kDeg;
  }
  return out;
}

double sign_of(double s) { return s < 0.0 ? -1.0 : 1.0; }

}  // namespace

Seabed parse_seabed(const Section& s) {
  const std::string kind = s.require_string("kind");
  Seabed out;
  if (kind == "constant") {
    out = Seabed::constant(s.require_double("value"));
  } else if (kind == "step") {
    seabeds::ProfileOfIm v;
    v.profile = PiecewiseLinearProfile::step(s.get_double("at", 0.0), s.require_double("below"),
                                             s.require_double("above"), parse_closure(s));
    v.normal = unit_normal(s, "normal");
    out = Seabed(v);
  } else if (kind == "profile") {
    seabeds::ProfileOfIm v;
    v.profile = parse_profile(s);
    v.normal = unit_normal(s, "normal");
    out = Seabed(v);
  } else if (kind == "abs_profile") {
    out = Seabed(seabeds::ProfileOfAbsIm{parse_profile(s)});
  } else if (kind == "linear") {
    seabeds::LinearOfIm v;
    v.slope = s.get_double("slope", 1.0);
    v.offset = s.get_double("offset", 0.0);
    v.normal = unit_normal(s, "normal");
    out = Seabed(v);
  } else if (kind == "radial_step") {
    seabeds::RadialStep v;
    v.radius = s.require_double("radius");
    v.inside = s.require_double("inside");
    v.outside = s.require_double("outside");
    v.center = s.get_complex("center", {});
    if (!(v.radius > 0.0)) s.fail(*s.find("radius"), "must be positive");
    out = Seabed(v);
  } else if (kind == "radial_profile") {
    seabeds::RadialProfile v;
    v.profile = parse_profile(s);
    v.center = s.get_complex("center", {});
    out = Seabed(v);
  } else if (kind == "arc_mirror") {
    seabeds::ArcMirror v;
    v.center = s.get_complex("center", {});
    v.radius = s.require_double("radius");
    v.below = s.get_double("below", -1.0);
    v.above = s.get_double("above", 1.0);
    v.axis = s.get_double("axis_deg", 90.0) * kDeg;
    v.half_angle = s.get_double("half_angle_deg", 60.0) * kDeg;
    if (!(v.radius > 0.0)) s.fail(*s.find("radius"), "must be positive");
    if (!(v.half_angle > 0.0)) s.fail(*s.find("half_angle_deg"), "must be positive");
    out = Seabed(v);
  } else {
    s.fail(*s.find("kind"), "unknown seabed kind '" + kind + "'");
  }
  reject_unread(s);
  return out;
}

void apply_integrator_setting(IntegratorConfig& cfg, const std::string& key,
                              const std::string& value) {
  auto num = [&] { return parse_double(value); };
  if (key == "t_end") cfg.t_end = num();
  else if (key == "rel_tol") cfg.rel_tol = num();
  else if (key == "abs_tol") cfg.abs_tol = num();
  else if (key == "max_step") cfg.max_step = num();
  else if (key == "eps_coll") cfg.eps_coll = num();
  else if (key == "event_tol") cfg.event_tol = num();
  else if (key == "zeno_events") cfg.zeno.max_events = static_cast<int>(std::lround(num()));
  else if (key == "zeno_window") cfg.zeno.per_time = num();
  else if (key == "sample_interval") cfg.sample_interval = num();
  else if (key == "method") cfg.method = method_from_string(value);
  else if (key == "fixed_step") cfg.fixed_step = num();
  else if (key == "checkpoints") cfg.checkpoints = static_cast<int>(std::lround(num()));
  else if (key == "max_steps") cfg.max_steps = std::lround(num());
  else throw Error("unknown integrator setting '" + key + "'");
}

Scenario parse_scenario(const Document& doc) {
  Scenario sc;
  sc.source = doc.source;
  const Section& top = doc.top();
  const long version = top.get_long("schema_version", -1);
  if (version == -1) top.fail("missing required key 'schema_version'");
  if (version != kSchemaVersion) {
    top.fail(*top.find("schema_version"), "unsupported schema version " + std::to_string(version));
  }
  sc.schema_version = static_cast<int>(version);
  sc.name = top.get_string("name", std::filesystem::path(doc.source).stem().string());
  sc.description = top.get_string("description", "");
  if (const Entry* e = top.find("drift")) {
    std::string token;
    std::istringstream ss(e->value);
    while (std::getline(ss, token, ',')) {
      token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
      if (token.empty()) continue;
      try {
        sc.drift.push_back(quantity_from_string(token));
      } catch (const Error& err) {
        top.fail(*e, err.what());
      }
    }
  }
  reject_unread(top);

  std::set<std::string> labels;
  auto claim = [&](const Section& s, const std::string& label) {
    if (!labels.insert(label).second) s.fail("duplicate pole label '" + label + "'");
  };
  auto suffix = [](const Section& s, std::string_view prefix) {
    return s.name.size() > prefix.size() ? s.name.substr(prefix.size() + 1) : std::string{};
  };

  for (std::size_t k = 1; k < doc.sections.size(); ++k) {
    const Section& s = doc.sections[k];
    const std::string head = s.name.substr(0, s.name.find('.'));
    if (head == "seabed") {
      std::string name = suffix(s, "seabed");
      sc.seabeds.push_back({name.empty() ? "default" : name, parse_seabed(s)});
    } else if (head == "pole") {
      const std::string label = suffix(s, "pole");
      if (label.empty()) s.fail("pole sections are named [pole.LABEL]");
      claim(s, label);
      sc.fixed_poles.push_back(parse_pole(s, label));
    } else if (head == "pair") {
      PairSpec p = parse_pair(s, suffix(s, "pair"));
      claim(s, p.minus_label);
      claim(s, p.plus_label);
      sc.pairs.push_back(std::move(p));
    } else if (head == "ensemble") {
      if (s.name != "ensemble") s.fail("only one [ensemble] section is allowed");
      sc.ensemble = parse_ensemble(s);
    } else if (head == "integrator") {
      for (const auto& e : s.entries) {
        try {
          apply_integrator_setting(sc.integrator, e.key, e.value);
        } catch (const Error& err) {
          s.fail(e, err.what());
        }
      }
    } else if (head == "amplitude" || head == "caustic" || head == "verify") {
      // read by the experiment that needs it
    } else {
      s.fail("unknown section");
    }
  }

  if (sc.seabeds.empty()) sc.seabeds.push_back({"default", Seabed::constant(1.0)});
  {
    std::set<std::string> names;
    for (const auto& b : sc.seabeds) {
      if (!names.insert(b.name).second) top.fail("duplicate seabed '" + b.name + "'");
    }
  }
  if (sc.fixed_poles.empty() && sc.pairs.empty()) top.fail("scenario has no poles");
  if (sc.ensemble && sc.pairs.size() != 1) top.fail("an ensemble needs exactly one [pair]");
  try {
    sc.integrator.validate();
  } catch (const Error& e) {
    const Section* s = doc.find("integrator");
    (s ? *s : top).fail(e.what());
  }
  sc.document = doc;
  return sc;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(load_config(path)); }

double axis_for_heading(double heading, Complex mu, double s_sign) {
  return heading - std::arg(-std::conj(mu) * sign_of(s_sign));
}

std::vector<Pole> pair_poles(const PairSpec& pair, double axis) {
  const Complex half = std::polar(0.5 * pair.separation, axis);
  return {Pole{pair.midpoint - half, StrengthSpec::simple(-pair.mu), pair.minus_label},
          Pole{pair.midpoint + half, StrengthSpec::simple(pair.mu), pair.plus_label}};
}

double resolve_axis(const PairSpec& pair, const Seabed& seabed) {
  if (pair.heading) return axis_for_heading(*pair.heading, pair.mu, seabed.eval(pair.midpoint));
  return pair.axis.value_or(0.0);
}

std::vector<Pole> Scenario::poles() const {
  std::vector<Pole> out = fixed_poles;
  for (const auto& p : pairs) {
    auto two = pair_poles(p, resolve_axis(p, seabeds.front().seabed));
    out.insert(out.end(), two.begin(), two.end());
  }
  return out;
}

std::vector<Member> expand_members(const Scenario& sc, std::optional<std::uint64_t> seed) {
  std::vector<Member> out;
  std::vector<Placement> points;
  if (sc.ensemble) points = ensemble_points(*sc.ensemble, seed.value_or(sc.ensemble->seed));
  for (std::size_t b = 0; b < sc.seabeds.size(); ++b) {
    const Seabed& bed = sc.seabeds[b].seabed;
    std::vector<Complex> base;
    for (const auto& p : sc.fixed_poles) base.push_back(p.position);
    if (!sc.ensemble) {
      Member m;
      m.index = out.size();
      m.seabed = b;
      m.initial.positions = base;
      for (const auto& pair : sc.pairs) {
        for (const auto& p : pair_poles(pair, resolve_axis(pair, bed))) {
          m.initial.positions.push_back(p.position);
        }
      }
      if (!sc.pairs.empty()) {
        m.midpoint = sc.pairs.front().midpoint;
        const auto& z = m.initial.positions;
        m.heading = std::arg(-std::conj(sc.pairs.front().mu) * sign_of(bed.eval(m.midpoint)) *
                             (z[base.size() + 1] - z[base.size()]));
      }
      out.push_back(std::move(m));
      continue;
    }
    PairSpec pair = sc.pairs.front();
    for (const auto& pl : points) {
      pair.midpoint = pl.midpoint;
      const double axis = axis_for_heading(pl.heading, pair.mu, bed.eval(pl.midpoint));
      Member m;
      m.index = out.size();
      m.seabed = b;
      m.midpoint = pl.midpoint;
      m.heading = pl.heading;
      m.initial.positions = base;
      for (const auto& p : pair_poles(pair, axis)) m.initial.positions.push_back(p.position);
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<QuantitySelector> drift_selectors(const Scenario& sc, const Seabed& seabed) {
  const std::vector<Pole> poles = sc.poles();
  const std::vector<Complex> mus = simple_strengths(poles);
  const bool all_simple = std::all_of(poles.begin(), poles.end(), [](const Pole& p) {
    return p.strength.is_homogeneous(-1);
  });
  const bool imaginary = std::all_of(mus.begin(), mus.end(), [](Complex m) { return m.real() == 0.0; });
  Complex total{};
  for (Complex m : mus) total += m;

  std::vector<QuantitySelector> out;
  auto base = [&](Quantity q) {
    QuantitySelector s;
    s.quantity = q;
    s.mus = mus;
    s.seabed = seabed;
    return s;
  };
  auto add_pairs = [&](Quantity q) {
    for (std::size_t k = 0; k < sc.pairs.size(); ++k) {
      QuantitySelector s = base(q);
      s.first = sc.fixed_poles.size() + 2 * k;
      s.second = s.first + 1;
      out.push_back(std::move(s));
    }
  };

  if (!sc.drift.empty()) {
    for (Quantity q : sc.drift) {
      if (q == Quantity::Separation || q == Quantity::EvenDegreeInvariant) {
        add_pairs(q);
      } else {
        out.push_back(base(q));
      }
    }
    return out;
  }

  if (imaginary) add_pairs(Quantity::Separation);
  if (!all_simple) return out;
  if (imaginary && seabed.symmetry().kind != SymmetryTag::Kind::None) {
    out.push_back(base(Quantity::NoetherMomentum));
  }
  if (imaginary && seabed.piecewise_constant()) out.push_back(base(Quantity::Hamiltonian));
  if (std::holds_alternative<seabeds::Constant>(seabed.variant()) && std::abs(total) > 0.0) {
    out.push_back(base(Quantity::CenterOfStrength));
  }
  return out;
}

std::string default_preset_dir() {
  if (const char* env = std::getenv("POLEDYN_PRESET_DIR"); env && *env) return env;
#ifdef POLEDYN_DEFAULT_PRESET_DIR
  return POLEDYN_DEFAULT_PRESET_DIR;
#else
  return "presets";
#endif
}

std::string resolve_scenario(const std::string& name_or_path, const std::string& preset_dir) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(name_or_path)) return name_or_path;
  const fs::path candidate = fs::path(preset_dir) / (name_or_path + ".scn");
  if (fs::is_regular_file(candidate)) return candidate.string();
  throw Error("no scenario file or preset named '" + name_or_path + "' (preset dir " +
              preset_dir + ")");
}

std::vector<std::string> list_presets(const std::string& preset_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(preset_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scn") {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace poledyn::cli
