#include <algorithm>
#include <cmath>

#include "poledyn/seabed.hpp"

namespace poledyn {

PiecewiseLinearProfile::PiecewiseLinearProfile(std::vector<double> breakpoints,
                                               std::vector<Piece> pieces, Closure closure)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), closure_(closure) {
  if (pieces_.size() != breakpoints_.size() + 1) {
    throw Error("profile needs exactly one more piece than breakpoints");
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k])) throw Error("profile breakpoint is not finite");
    if (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1])) {
      throw Error("profile breakpoints must be strictly increasing");
    }
  }
  for (const auto& p : pieces_) {
    if (!std::isfinite(p.slope) || !std::isfinite(p.intercept)) {
      throw Error("profile piece is not finite");
    }
  }
}

PiecewiseLinearProfile PiecewiseLinearProfile::constant(double value) {
  return PiecewiseLinearProfile({}, {Piece{0.0, value}});
}

PiecewiseLinearProfile PiecewiseLinearProfile::linear(double slope, double intercept) {
  return PiecewiseLinearProfile({}, {Piece{slope, intercept}});
}

PiecewiseLinearProfile PiecewiseLinearProfile::step(double at, double below, double above,
                                                    Closure closure) {
  return PiecewiseLinearProfile({at}, {Piece{0.0, below}, Piece{0.0, above}}, closure);
}

PiecewiseLinearProfile PiecewiseLinearProfile::interpolate(const std::vector<double>& u,
                                                           const std::vector<double>& v) {
  if (u.size() != v.size() || u.empty()) throw Error("interpolation needs matching knots");
  if (u.size() == 1) return constant(v[0]);
  std::vector<Piece> pieces;
  pieces.push_back({0.0, v.front()});
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double slope = (v[k + 1] - v[k]) / (u[k + 1] - u[k]);
    pieces.push_back({slope, v[k] - slope * u[k]});
  }
  pieces.push_back({0.0, v.back()});
  return PiecewiseLinearProfile(u, std::move(pieces));
}

std::size_t PiecewiseLinearProfile::piece_index(double u) const noexcept {
  auto it = closure_ == Closure::Upper
                ? std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u)
                : std::lower_bound(breakpoints_.begin(), breakpoints_.end(), u);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PiecewiseLinearProfile::value_in(std::size_t piece, double u) const noexcept {
  const Piece& p = pieces_[std::min(piece, pieces_.size() - 1)];
  return p.slope * u + p.intercept;
}

bool PiecewiseLinearProfile::jumps_at(std::size_t k) const noexcept {
  const double b = breakpoints_[k];
  const double lo = value_in(k, b);
  const double hi = value_in(k + 1, b);
  return std::abs(lo - hi) > 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

bool PiecewiseLinearProfile::has_jumps() const noexcept {
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (jumps_at(k)) return true;
  }
  return false;
}

bool PiecewiseLinearProfile::piecewise_constant() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.slope == 0.0; });
}

double PiecewiseLinearProfile::integral(double a, double b) const noexcept {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  auto piece_integral = [](const Piece& p, double lo, double hi) {
    return 0.5 * p.slope * (hi * hi - lo * lo) + p.intercept * (hi - lo);
  };
  double total = 0.0;
  double lo = a;
  for (std::size_t k = 0; k <= breakpoints_.size(); ++k) {
    const double end = k < breakpoints_.size() ? breakpoints_[k] : b;
    if (end <= lo) continue;
    const double hi = std::min(end, b);
    total += piece_integral(pieces_[k], lo, hi);
    lo = hi;
    if (lo >= b) break;
  }
  return total;
}

PiecewiseLinearProfile PiecewiseLinearProfile::negated() const {
  std::vector<Piece> pieces = pieces_;
  for (auto& p : pieces) {
    p.slope = -p.slope;
    p.intercept = -p.intercept;
  }
  return PiecewiseLinearProfile(breakpoints_, std::move(pieces), closure_);
}

}  // namespace poledyn
