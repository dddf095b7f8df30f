#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orthokin::cli {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Minimal self-contained SVG writer mapping a world box onto a plot area
/// with margins for the axes.
class SvgCanvas {
 public:
  SvgCanvas(double x_min, double x_max, double y_min, double y_max, double width = 640.0,
            double height = 640.0);

  void polyline(const std::vector<Point2>& pts, std::string_view style);
  void circle(Point2 p, double radius_px, std::string_view style, std::string_view attributes = {});
  void rect(double x0, double y0, double x1, double y1, std::string_view fill);
  void text(Point2 p, std::string_view s, std::string_view style = "font-size:12px");
  /// Frame, ticks at the given world values and axis labels.
  void axes(const std::vector<double>& x_ticks, const std::vector<std::string>& x_labels,
            const std::vector<double>& y_ticks, const std::vector<std::string>& y_labels,
            std::string_view x_title, std::string_view y_title);
  void title(std::string_view s);
  /// Small print under the plot.
  void note(std::string_view s);
  /// Row of colour swatches under the title.
  void legend(const std::vector<std::pair<std::string, std::string>>& entries);

  std::string str() const;

  double px(double x) const;
  double py(double y) const;

 private:
  double x_min_, x_max_, y_min_, y_max_, width_, height_;
  std::string body_;
};

/// Plot coordinate with two decimals.
std::string coord(double v);
/// Escapes &, <, > and quotes.
std::string xml_escape(std::string_view s);

}  // namespace orthokin::cli
