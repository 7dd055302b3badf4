#pragma once

#include <string>
#include <vector>

namespace riskavg {

/// Minimal static SVG 1.1 line plots; enough for the experiment figures.
/// Non-finite points break the polyline instead of corrupting the path.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  struct Style {
    std::string color;
    std::string dash;  // empty for solid
    double width = 1.6;
  };

  void add_series(const std::string& name, std::vector<double> x, std::vector<double> y,
                  Style style);

  std::string render(int width = 900, int height = 560) const;
  void write(const std::string& path, int width = 900, int height = 560) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    Style style;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace riskavg
