#include "riskavg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace riskavg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  double raw = span / std::max(target_ticks, 1);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double n = raw / mag;
  double step = (n < 1.5) ? 1.0 : (n < 3.5) ? 2.0 : (n < 7.5) ? 5.0 : 10.0;
  return step * mag;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::string& name, std::vector<double> x, std::vector<double> y,
                         Style style) {
  if (x.size() != y.size()) throw std::invalid_argument("SvgPlot: x/y size mismatch");
  series_.push_back({name, std::move(x), std::move(y), std::move(style)});
}

std::string SvgPlot::render(int width, int height) const {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin < xmax)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double ypad = 0.06 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title_ + "</text>\n";

  // axes
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(ml + pw) +
         "\" y2=\"" + num(mt + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(mt + ph) + "\" stroke=\"black\"/>\n";

  double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12; t += xstep) {
    svg += "<line x1=\"" + num(sx(t)) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(sx(t)) +
           "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + num(t) +
           "</text>\n";
  }
  double ystep = nice_step(ymax - ymin, 6);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12; t += ystep) {
    svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(sy(t)) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(sy(t)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(ml - 9) + "\" y=\"" + num(sy(t) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + num(t) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label_ +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         num(mt + ph / 2) + ")\">" + y_label_ + "</text>\n";

  // series
  for (const Series& s : series_) {
    std::string points;
    bool open = false;
    auto flush = [&]() {
      if (open && !points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + s.style.color + "\" stroke-width=\"" +
               num(s.style.width) + "\"";
        if (!s.style.dash.empty()) svg += " stroke-dasharray=\"" + s.style.dash + "\"";
        svg += " points=\"" + points + "\"/>\n";
      }
      points.clear();
      open = false;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
      open = true;
    }
    flush();
  }

  // legend (series with empty names are guide lines, not legend entries)
  double ly = mt + 12;
  for (const Series& s : series_) {
    if (s.name.empty()) continue;
    svg += "<line x1=\"" + num(ml + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(ml + 44) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + s.style.color + "\" stroke-width=\"" +
           num(s.style.width) + "\"";
    if (!s.style.dash.empty()) svg += " stroke-dasharray=\"" + s.style.dash + "\"";
    svg += "/>\n";
    svg += "<text x=\"" + num(ml + 50) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.name + "</text>\n";
    ly += 18;
  }

  svg += "</svg>\n";
  return svg;
}

void SvgPlot::write(const std::string& path, int width, int height) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("SvgPlot: cannot open " + path);
  f << render(width, height);
}

}  // namespace riskavg
