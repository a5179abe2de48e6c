#include "poledyn/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace poledyn::cli {
namespace {

constexpr const char* kPalette[] = {"#1f3b73", "#b2182b", "#1b7837", "#762a83",
                                    "#e08214", "#01665e", "#8c510a", "#4d4d4d"};
constexpr const char* kLight[] = {"#6f8fcf", "#ef8a8a", "#7fbf7b", "#c2a5cf",
                                  "#fdb863", "#5ab4ac", "#d8b365", "#a0a0a0"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// negative S blue, positive S amber, zero white
std::string shade(double s, double peak) {
  const double f = peak > 0.0 ? std::clamp(s / peak, -1.0, 1.0) : 0.0;
  const double a = std::abs(f);
  auto mix = [a](int lo, int hi) { return static_cast<int>(std::lround(lo + (hi - lo) * a)); };
  char buf[8];
  if (f < 0.0) {
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(255, 120), mix(255, 160), mix(255, 220));
  } else {
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(255, 240), mix(255, 200), mix(255, 130));
  }
  return buf;
}

struct Frame {
  double xmin, xmax, ymin, ymax, scale, pad;
  double px(double x) const { return pad + (x - xmin) * scale; }
  double py(double y) const { return pad + (ymax - y) * scale; }
};

}  // namespace

std::vector<Polyline> trajectory_lines(const Trajectory& tr, std::size_t colour_index) {
  std::vector<Polyline> out;
  const std::size_t n = tr.labels.size();
  const std::size_t stride = std::max<std::size_t>(1, tr.samples.size() / 4000);
  for (std::size_t i = 0; i < n; ++i) {
    Polyline line;
    const std::size_t c = (colour_index + i / 2) % std::size(kPalette);
    line.stroke = i % 2 == 0 ? kPalette[c] : kLight[c];
    line.dashed = i % 2 == 1;
    for (std::size_t k = 0; k < tr.samples.size(); k += stride) {
      line.points.push_back(tr.samples[k].positions[i]);
    }
    if (!tr.samples.empty()) line.points.push_back(tr.samples.back().positions[i]);
    out.push_back(std::move(line));
  }
  return out;
}

std::string render_plane_svg(const PlanePlot& plot) {
  std::array<double, 4> v{};
  if (plot.view) {
    v = *plot.view;
  } else {
    double inf = std::numeric_limits<double>::infinity();
    v = {inf, -inf, inf, -inf};
    auto grow = [&v](Complex z) {
      if (!is_finite(z)) return;
      v[0] = std::min(v[0], z.real());
      v[1] = std::max(v[1], z.real());
      v[2] = std::min(v[2], z.imag());
      v[3] = std::max(v[3], z.imag());
    };
    for (const auto& l : plot.lines) std::for_each(l.points.begin(), l.points.end(), grow);
    std::for_each(plot.markers.begin(), plot.markers.end(), grow);
    if (!(v[0] <= v[1])) v = {-1.0, 1.0, -1.0, 1.0};
    const double span = std::max({v[1] - v[0], v[3] - v[2], 1e-3});
    const double margin = 0.08 * span;
    v[0] -= margin;
    v[1] += margin;
    v[2] -= margin;
    v[3] += margin;
  }
  const double w = v[1] - v[0];
  const double h = v[3] - v[2];
  Frame f{v[0], v[1], v[2], v[3], 0.0, 30.0};
  f.scale = (plot.width_px - 2 * f.pad) / w;
  // keep equal scales but cap very tall plots
  if (h * f.scale > 2.0 * plot.width_px) f.scale = 2.0 * plot.width_px / h;
  const double W = w * f.scale + 2 * f.pad;
  const double H = h * f.scale + 2 * f.pad;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H)
     << "\" viewBox=\"0 0 " << num(W) << ' ' << num(H) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<clipPath id=\"frame\"><rect x=\"" << num(f.pad) << "\" y=\"" << num(f.pad)
     << "\" width=\"" << num(w * f.scale) << "\" height=\"" << num(h * f.scale)
     << "\"/></clipPath>\n";

  if (plot.seabed && plot.shade_cells > 0) {
    const int nx = plot.shade_cells;
    const int ny = std::max(1, static_cast<int>(std::lround(nx * h / w)));
    const double cx = w / nx;
    const double cy = h / ny;
    std::vector<double> vals(static_cast<std::size_t>(nx * ny));
    double peak = 0.0;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double s = plot.seabed->eval({v[0] + (i + 0.5) * cx, v[2] + (j + 0.5) * cy});
        vals[static_cast<std::size_t>(j * nx + i)] = s;
        peak = std::max(peak, std::abs(s));
      }
    }
    os << "<g shape-rendering=\"crispEdges\" stroke=\"none\">\n";
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        os << "<rect x=\"" << num(f.px(v[0] + i * cx)) << "\" y=\"" << num(f.py(v[2] + (j + 1) * cy))
           << "\" width=\"" << num(cx * f.scale + 0.5) << "\" height=\"" << num(cy * f.scale + 0.5)
           << "\" fill=\"" << shade(vals[static_cast<std::size_t>(j * nx + i)], peak) << "\"/>\n";
      }
    }
    os << "</g>\n";

    const double far = 4.0 * std::hypot(w, h) + std::abs(Complex{v[0], v[2]});
    os << "<g clip-path=\"url(#frame)\" stroke=\"#333\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const Locus& l : plot.seabed->discontinuities()) {
      switch (l.kind) {
        case Locus::Kind::Line:
        case Locus::Kind::Ray: {
          const Complex a = l.kind == Locus::Kind::Line ? l.point - far * l.direction : l.point;
          const Complex b = l.point + far * l.direction;
          os << "<line x1=\"" << num(f.px(a.real())) << "\" y1=\"" << num(f.py(a.imag()))
             << "\" x2=\"" << num(f.px(b.real())) << "\" y2=\"" << num(f.py(b.imag())) << "\"/>\n";
          break;
        }
        case Locus::Kind::Circle:
          os << "<circle cx=\"" << num(f.px(l.point.real())) << "\" cy=\"" << num(f.py(l.point.imag()))
             << "\" r=\"" << num(l.radius * f.scale) << "\"/>\n";
          break;
        case Locus::Kind::Arc: {
          const Complex a = l.point + std::polar(l.radius, l.angle_from);
          const Complex b = l.point + std::polar(l.radius, l.angle_to);
          const int large = l.angle_to - l.angle_from > kPi ? 1 : 0;
          os << "<path d=\"M " << num(f.px(a.real())) << ' ' << num(f.py(a.imag())) << " A "
             << num(l.radius * f.scale) << ' ' << num(l.radius * f.scale) << " 0 " << large
             << " 0 " << num(f.px(b.real())) << ' ' << num(f.py(b.imag())) << "\"/>\n";
          break;
        }
      }
    }
    os << "</g>\n";
  }

  os << "<g clip-path=\"url(#frame)\" fill=\"none\" stroke-linejoin=\"round\">\n";
  for (const auto& l : plot.lines) {
    if (l.points.size() < 2) continue;
    os << "<polyline stroke=\"" << l.stroke << "\" stroke-width=\"" << num(l.width) << '"';
    if (l.dashed) os << " stroke-dasharray=\"4 2\"";
    os << " points=\"";
    for (Complex z : l.points) {
      if (!is_finite(z)) continue;
      os << num(f.px(z.real())) << ',' << num(f.py(z.imag())) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</g>\n";
  for (Complex z : plot.markers) {
    os << "<circle cx=\"" << num(f.px(z.real())) << "\" cy=\"" << num(f.py(z.imag()))
       << "\" r=\"3\" fill=\"black\"/>\n";
  }
  os << "<rect x=\"" << num(f.pad) << "\" y=\"" << num(f.pad) << "\" width=\"" << num(w * f.scale)
     << "\" height=\"" << num(h * f.scale) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(f.pad) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(plot.title) << "</text>\n";
  os << "<text x=\"" << num(f.pad) << "\" y=\"" << num(H - 8)
     << "\" font-family=\"sans-serif\" font-size=\"11\">x " << num(v[0]) << " to " << num(v[1])
     << ", y " << num(v[2]) << " to " << num(v[3]) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string render_curves_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
  const double W = 640.0, H = 420.0, L = 60.0, R = 20.0, T = 36.0, B = 50.0;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  }
  if (!(x0 < x1)) { x0 -= 1.0; x1 += 1.0; }
  y0 = std::min(y0, 0.0);
  if (!(y0 < y1)) y1 = y0 + 1.0;
  y1 += 0.05 * (y1 - y0);
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double x = x0 + (x1 - x0) * k / 5;
    const double y = y0 + (y1 - y0) * k / 5;
    os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(px(x))
       << "\" y2=\"" << num(T) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(px(x)) << "\" y=\"" << num(H - B + 14) << "\" text-anchor=\"middle\">"
       << num(x) << "</text>\n";
    os << "<line x1=\"" << num(L) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(W - R)
       << "\" y2=\"" << num(py(y)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(L - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
       << num(y) << "</text>\n";
  }
  os << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << num(H - 12)
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << num((T + H - B) / 2) << "\" transform=\"rotate(-90 14 "
     << num((T + H - B) / 2) << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  os << "<text x=\"" << num(L) << "\" y=\"22\" font-size=\"14\">" << escape(title) << "</text>\n";
  double ly = T + 12;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : s.points) {
      if (std::isfinite(p[0]) && std::isfinite(p[1])) os << num(px(p[0])) << ',' << num(py(p[1])) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << num(W - R - 150) << "\" y=\"" << num(ly) << "\" fill=\"" << s.stroke
       << "\">" << escape(s.name) << "</text>\n";
    ly += 14;
  }
  os << "<rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(W - L - R)
     << "\" height=\"" << num(H - T - B) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace poledyn::cli
