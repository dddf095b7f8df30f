#include "svg.hpp"

#include <cstdio>

namespace orthokin::cli {

namespace {
constexpr double kMargin = 60.0;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgCanvas::SvgCanvas(double x_min, double x_max, double y_min, double y_max, double width, double height)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width), height_(height) {}

double SvgCanvas::px(double x) const {
  return kMargin + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * kMargin);
}

double SvgCanvas::py(double y) const {
  return height_ - kMargin - (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * kMargin);
}

void SvgCanvas::polyline(const std::vector<Point2>& pts, std::string_view style) {
  if (pts.size() < 2) return;
  body_ += "<polyline style=\"fill:none;" + std::string(style) + "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ += ' ';
    body_ += coord(px(pts[i].x)) + ',' + coord(py(pts[i].y));
  }
  body_ += "\"/>\n";
}

void SvgCanvas::circle(Point2 p, double radius_px, std::string_view style, std::string_view attributes) {
  body_ += "<circle cx=\"" + coord(px(p.x)) + "\" cy=\"" + coord(py(p.y)) + "\" r=\"" + coord(radius_px) +
           "\" style=\"" + std::string(style) + "\"";
  if (!attributes.empty()) body_ += ' ' + std::string(attributes);
  body_ += "/>\n";
}

void SvgCanvas::rect(double x0, double y0, double x1, double y1, std::string_view fill) {
  const double left = px(x0), right = px(x1), top = py(y1), bottom = py(y0);
  body_ += "<rect x=\"" + coord(left) + "\" y=\"" + coord(top) + "\" width=\"" + coord(right - left) +
           "\" height=\"" + coord(bottom - top) + "\" fill=\"" + std::string(fill) +
           "\" shape-rendering=\"crispEdges\"/>\n";
}

void SvgCanvas::text(Point2 p, std::string_view s, std::string_view style) {
  body_ += "<text x=\"" + coord(p.x) + "\" y=\"" + coord(p.y) + "\" style=\"" + std::string(style) + "\">" +
           xml_escape(s) + "</text>\n";
}

void SvgCanvas::axes(const std::vector<double>& x_ticks, const std::vector<std::string>& x_labels,
                     const std::vector<double>& y_ticks, const std::vector<std::string>& y_labels,
                     std::string_view x_title, std::string_view y_title) {
  const double l = px(x_min_), r = px(x_max_), t = py(y_max_), b = py(y_min_);
  body_ += "<rect x=\"" + coord(l) + "\" y=\"" + coord(t) + "\" width=\"" + coord(r - l) + "\" height=\"" +
           coord(b - t) + "\" style=\"fill:none;stroke:#000;stroke-width:1\"/>\n";
  for (std::size_t i = 0; i < x_ticks.size(); ++i) {
    const double x = px(x_ticks[i]);
    body_ += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(b) + "\" x2=\"" + coord(x) + "\" y2=\"" + coord(b + 5) +
             "\" style=\"stroke:#000\"/>\n";
    text({x - 12, b + 20}, i < x_labels.size() ? x_labels[i] : "");
  }
  for (std::size_t i = 0; i < y_ticks.size(); ++i) {
    const double y = py(y_ticks[i]);
    body_ += "<line x1=\"" + coord(l - 5) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(l) + "\" y2=\"" + coord(y) +
             "\" style=\"stroke:#000\"/>\n";
    text({l - 45, y + 4}, i < y_labels.size() ? y_labels[i] : "");
  }
  text({(l + r) / 2 - 10, b + 42}, x_title, "font-size:14px");
  text({l - 10, t - 10}, y_title, "font-size:14px");
}

void SvgCanvas::title(std::string_view s) { text({kMargin, 22}, s, "font-size:15px"); }

void SvgCanvas::note(std::string_view s) { text({kMargin, height_ - 8}, s, "font-size:11px"); }

void SvgCanvas::legend(const std::vector<std::pair<std::string, std::string>>& entries) {
  double x = kMargin;
  for (const auto& [label, colour] : entries) {
    body_ += "<rect x=\"" + coord(x) + "\" y=\"31\" width=\"10\" height=\"10\" fill=\"" + colour + "\"/>\n";
    text({x + 14, 40}, label, "font-size:11px");
    x += 22 + 7.0 * static_cast<double>(label.size());
  }
}

std::string SvgCanvas::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         coord(width_) + "\" height=\"" + coord(height_) + "\" viewBox=\"0 0 " + coord(width_) + ' ' +
         coord(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n" + body_ + "</svg>\n";
}

}  // namespace orthokin::cli
