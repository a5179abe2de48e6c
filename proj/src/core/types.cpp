#include "poledyn/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace poledyn {

CollisionError::CollisionError(std::size_t first, std::size_t second, double separation)
    : Error("collision between poles " + std::to_string(first) + " and " +
            std::to_string(second) + " (separation " + std::to_string(separation) + ")"),
      first_(first),
      second_(second),
      separation_(separation) {}

bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

StrengthSpec StrengthSpec::homogeneous(int exponent, Complex mu) {
  StrengthSpec spec;
  spec.coefficients.emplace(exponent, mu);
  return spec;
}

Complex StrengthSpec::at(int exponent) const {
  auto it = coefficients.find(exponent);
  return it == coefficients.end() ? Complex{} : it->second;
}

bool StrengthSpec::is_homogeneous(int exponent) const {
  return std::all_of(coefficients.begin(), coefficients.end(), [exponent](const auto& kv) {
    return kv.first == exponent || kv.second == Complex{};
  });
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::BoundaryCrossing: return "boundary-crossing";
    case EventKind::Collision: return "collision";
    case EventKind::ZenoTrap: return "zeno-trap";
    case EventKind::Horizon: return "horizon";
    case EventKind::Failure: return "failure";
  }
  return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
  for (auto kind : {EventKind::BoundaryCrossing, EventKind::Collision, EventKind::ZenoTrap,
                    EventKind::Horizon, EventKind::Failure}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error("unknown event kind '" + std::string(name) + "'");
}

std::size_t Trajectory::pole_index(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error("no pole labelled '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

const Event* Trajectory::terminal_event() const noexcept {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->kind != EventKind::BoundaryCrossing) return &*it;
  }
  return nullptr;
}

bool Trajectory::terminated_early() const noexcept {
  const Event* e = terminal_event();
  return e != nullptr && e->kind != EventKind::Horizon;
}

std::size_t Trajectory::count(EventKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [kind](const Event& e) { return e.kind == kind; }));
}

std::vector<SeparationEntry> pairwise_separations(const SystemState& state,
                                                  std::span<const std::string> labels) {
  if (labels.size() != state.size()) throw Error("label count does not match state size");
  std::vector<SeparationEntry> out;
  const auto& z = state.positions;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      out.push_back({labels[i], labels[j], std::abs(z[i] - z[j])});
    }
  }
  return out;
}

double min_separation(std::span<const Complex> positions) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      best = std::min(best, std::abs(positions[i] - positions[j]));
    }
  }
  return best;
}

void validate_poles(std::span<const Pole> poles) {
  std::set<std::string> seen;
  for (const auto& p : poles) {
    if (!seen.insert(p.label).second) throw Error("duplicate pole label '" + p.label + "'");
    if (!is_finite(p.position)) throw Error("pole '" + p.label + "' has a non-finite position");
    for (const auto& [n, mu] : p.strength.coefficients) {
      if (!is_finite(mu)) throw Error("pole '" + p.label + "' has a non-finite strength");
    }
  }
}

std::vector<Complex> positions_of(std::span<const Pole> poles) {
  std::vector<Complex> out;
  out.reserve(poles.size());
  for (const auto& p : poles) out.push_back(p.position);
  return out;
}

std::vector<std::string> labels_of(std::span<const Pole> poles) {
  std::vector<std::string> out;
  out.reserve(poles.size());
  for (const auto& p : poles) out.push_back(p.label);
  return out;
}

std::vector<Complex> simple_strengths(std::span<const Pole> poles) {
  std::vector<Complex> out;
  out.reserve(poles.size());
  for (const auto& p : poles) out.push_back(p.strength.at(-1));
  return out;
}

}  // namespace poledyn
