#include "povmkit/svg.hpp"

#include <cstdio>

namespace povmkit {

namespace {

constexpr int kPanel = 360;
constexpr int kMargin = 52;
constexpr const char* kColors[3] = {"#1f77b4", "#d62728", "#2ca02c"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Maps (p, q) in [lo, 1]^2 to pixel coordinates of a panel anchored at x0.
struct PanelMap {
  double x0;
  double lo;
  double scale() const { return kPanel / (1.0 - lo); }
  double px(double p) const { return x0 + (p - lo) * scale(); }
  double py(double q) const { return kMargin + kPanel - (q - lo) * scale(); }
};

void draw_panel(std::string& out, const PanelMap& map,
                const std::vector<CompatibilityRegion>& regions,
                const std::string& title) {
  out += "<rect x=\"" + fmt(map.x0) + "\" y=\"" + fmt(kMargin) + "\" width=\"" +
         fmt(kPanel) + "\" height=\"" + fmt(kPanel) +
         "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // Axis ticks at the panel corners.
  out += "<text x=\"" + fmt(map.x0 - 6) + "\" y=\"" + fmt(kMargin + kPanel + 16) +
         "\" font-size=\"11\">" + fmt(map.lo) + "</text>\n";
  out += "<text x=\"" + fmt(map.x0 + kPanel - 12) + "\" y=\"" +
         fmt(kMargin + kPanel + 16) + "\" font-size=\"11\">1.00</text>\n";
  out += "<text x=\"" + fmt(map.x0 - 34) + "\" y=\"" + fmt(kMargin + 10) +
         "\" font-size=\"11\">1.00</text>\n";
  out += "<text x=\"" + fmt(map.x0 + kPanel / 2.0 - 6) + "\" y=\"" +
         fmt(kMargin + kPanel + 32) + "\" font-size=\"12\">p</text>\n";
  out += "<text x=\"" + fmt(map.x0 - 34) + "\" y=\"" +
         fmt(kMargin + kPanel / 2.0) + "\" font-size=\"12\">q</text>\n";
  out += "<text x=\"" + fmt(map.x0) + "\" y=\"" + fmt(kMargin - 10) +
         "\" font-size=\"13\">" + title + "</text>\n";

  for (size_t r = 0; r < regions.size() && r < 3; ++r) {
    const CompatibilityRegion& region = regions[r];
    std::string points;
    for (int pi = 0; pi < region.resolution; ++pi) {
      double p = region.grid_value(pi);
      double q = region.boundary[static_cast<size_t>(pi)];
      if (p < map.lo && q < map.lo) continue;
      double pc = p < map.lo ? map.lo : p;
      double qc = q < map.lo ? map.lo : q;
      points += fmt(map.px(pc)) + "," + fmt(map.py(qc)) + " ";
    }
    if (points.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"";
    out += kColors[r];
    out += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }
}

}  // namespace

std::string regions_to_svg(const std::vector<CompatibilityRegion>& regions,
                           bool zoom_panel) {
  const int panels = zoom_panel ? 2 : 1;
  const int width = kMargin + panels * (kPanel + kMargin) + 140;
  const int height = 2 * kMargin + kPanel + 24;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";

  draw_panel(out, PanelMap{static_cast<double>(kMargin), 0.0}, regions,
             "compatibility region boundary");
  if (zoom_panel)
    draw_panel(out, PanelMap{static_cast<double>(2 * kMargin + kPanel), 0.7},
               regions, "zoom [0.7,1]");

  // Legend.
  double lx = kMargin + panels * (kPanel + kMargin);
  double ly = kMargin + 8;
  for (size_t r = 0; r < regions.size() && r < 3; ++r) {
    out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(lx + 24) + "\" y2=\"" + fmt(ly) + "\" stroke=\"";
    out += kColors[r];
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) +
           "\" font-size=\"12\">" + to_string(regions[r].model) + "</text>\n";
    ly += 20;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace povmkit
