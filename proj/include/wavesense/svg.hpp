#pragma once

// Static SVG figures: the |J| heatmap and the per-mode boundary / polar panels.
// Output depends only on the inputs (fixed number formatting, no timestamps).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "wavesense/geometry.hpp"
#include "wavesense/linalg.hpp"

namespace wavesense::svg {

inline constexpr std::array<const char*, 9> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Viridis-like ramp on [0, 1].
inline std::string ramp(double t) {
  static constexpr double anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double s = t * 4.0;
  const int i = std::min(3, static_cast<int>(s));
  const double f = s - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(anchors[i][c] + f * (anchors[i + 1][c] - anchors[i][c])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

inline std::string header(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"white\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "start") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + s +
         "</text>\n";
}

/// Heatmap of a nonnegative matrix; columns are max-pooled into at most 800 bins.
/// Dashed separators mark every `block` columns (one block per incidence).
inline std::string heatmap(const DenseRealMatrix& m, std::size_t block, const std::string& title) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t bins = std::min<std::size_t>(cols, 800);
  const double left = 60, top = 40, plot_w = 800, cell_h = 22;
  const double cell_w = plot_w / static_cast<double>(bins);
  double vmax = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) vmax = std::max(vmax, m(i, j));

  std::string out = header(left + plot_w + 90, top + cell_h * rows + 50);
  out += text(left, 24, title);
  for (std::size_t i = 0; i < rows; ++i) {
    out += text(left - 8, top + cell_h * (i + 0.7), std::to_string(i + 1), "end");
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t c0 = b * cols / bins;
      const std::size_t c1 = std::max(c0 + 1, (b + 1) * cols / bins);
      double v = 0.0;
      for (std::size_t c = c0; c < c1; ++c) v = std::max(v, m(i, c));
      out += "<rect x=\"" + num(left + b * cell_w) + "\" y=\"" + num(top + i * cell_h) +
             "\" width=\"" + num(cell_w + 0.05) + "\" height=\"" + num(cell_h) + "\" fill=\"" +
             ramp(vmax > 0.0 ? v / vmax : 0.0) + "\"/>\n";
    }
  }
  if (block > 0) {
    for (std::size_t c = block; c < cols; c += block) {
      const double x = left + plot_w * static_cast<double>(c) / static_cast<double>(cols);
      out += "<line x1=\"" + num(x) + "\" y1=\"" + num(top) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(top + cell_h * rows) + "\" stroke=\"white\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  // colour bar
  const double bx = left + plot_w + 20, bh = cell_h * rows;
  for (int s = 0; s < 50; ++s) {
    out += "<rect x=\"" + num(bx) + "\" y=\"" + num(top + bh * (49 - s) / 50.0) +
           "\" width=\"14\" height=\"" + num(bh / 50.0 + 0.05) + "\" fill=\"" + ramp(s / 49.0) +
           "\"/>\n";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", vmax);
  out += text(bx, top - 6, buf);
  out += text(bx, top + bh + 14, "0");
  out += text(left + plot_w / 2, top + bh + 30, "observation index (incidence-major)", "middle");
  out += "</svg>\n";
  return out;
}

struct ModePanel {
  std::string title;
  /// |u_i| at the knots
  std::vector<double> knot_weights;
  /// sigma_i^2 |v_i|^2, one block per incidence
  std::vector<std::vector<double>> cross_sections;
  std::vector<std::string> incidence_labels;
  /// radial scale shared by panels that should be comparable
  double polar_max = 0.0;
};

/// Boundary coloured by |u_i| (normalised to [0, max] within the panel) next to a
/// polar plot of the per-incidence cross sections.
inline std::string mode_figure(const Scatterer& sc, const ModePanel& panel) {
  const double size = 320, pad = 40;
  std::string out = header(2 * size + 3 * pad + 120, size + 2 * pad + 20);
  out += text(pad, 24, panel.title);

  // boundary panel
  const std::size_t n = sc.n_spline();
  const std::size_t segments = 720;
  double rmax = 0.0;
  for (std::size_t s = 0; s < segments; ++s) rmax = std::max(rmax, sc.radius(kTwoPi * s / segments));
  double wmax = 0.0;
  for (double w : panel.knot_weights) wmax = std::max(wmax, w);
  const double cx = pad + size / 2, cy = pad + 20 + size / 2, scale = 0.45 * size / rmax;
  auto to_screen = [&](Vec2 p) { return Vec2{cx + scale * p.x, cy - scale * p.y}; };
  auto weight_at = [&](double theta) {
    const double s = theta / kTwoPi * static_cast<double>(n);
    const std::size_t j = static_cast<std::size_t>(std::floor(s)) % n;
    const double f = s - std::floor(s);
    return (1.0 - f) * panel.knot_weights[j] + f * panel.knot_weights[(j + 1) % n];
  };
  for (std::size_t s = 0; s < segments; ++s) {
    const double t0 = kTwoPi * s / segments, t1 = kTwoPi * (s + 1) / segments;
    const Vec2 a = to_screen(sc.radius(t0) * radial_unit(t0));
    const Vec2 b = to_screen(sc.radius(t1) * radial_unit(t1));
    const double w = weight_at(0.5 * (t0 + t1));
    out += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" +
           num(b.y) + "\" stroke=\"" + ramp(wmax > 0.0 ? w / wmax : 0.0) +
           "\" stroke-width=\"4\" stroke-linecap=\"round\"/>\n";
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    const Vec2 p = to_screen(sc.radius(t) * radial_unit(t));
    out += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"2.5\" fill=\"black\"/>\n";
    if (n <= 24) {
      const Vec2 l = to_screen((sc.radius(t) + 0.12 * rmax) * radial_unit(t));
      out += text(l.x, l.y + 4, std::to_string(j + 1), "middle");
    }
  }

  // polar panel
  const double px = 2 * pad + 1.5 * size, inner = 0.12 * size, outer = 0.45 * size;
  double vmax = panel.polar_max;
  if (!(vmax > 0.0)) {
    for (const auto& block : panel.cross_sections)
      for (double v : block) vmax = std::max(vmax, v);
  }
  for (double r : {inner, outer}) {
    out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
           "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"3 3\"/>\n";
  }
  for (std::size_t l = 0; l < panel.cross_sections.size(); ++l) {
    const auto& block = panel.cross_sections[l];
    std::string pts;
    for (std::size_t m = 0; m <= block.size(); ++m) {
      const std::size_t idx = m % block.size();
      const double theta = kTwoPi * idx / block.size();
      const double rho = inner + (outer - inner) * (vmax > 0.0 ? block[idx] / vmax : 0.0);
      if (m) pts += ' ';
      pts += num(px + rho * std::cos(theta)) + "," + num(cy - rho * std::sin(theta));
    }
    const char* colour = kPalette[l % kPalette.size()];
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"1.5\"/>\n";
    const double ly = pad + 30 + 18.0 * l;
    out += "<line x1=\"" + num(px + outer + 30) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(px + outer + 50) + "\" y2=\"" + num(ly) + "\" stroke=\"" + colour +
           "\" stroke-width=\"2\"/>\n";
    if (l < panel.incidence_labels.size()) out += text(px + outer + 55, ly + 4, panel.incidence_labels[l]);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace wavesense::svg
