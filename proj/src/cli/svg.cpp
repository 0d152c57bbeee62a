#include "pigan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pigan/check.hpp"

namespace pigan::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Document::Document(double width, double height)
    : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h,
                    const std::string& fill) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
           num(w) + "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
}

void Document::line(double x1, double y1, double x2, double y2,
                    const std::string& stroke, double stroke_width) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
           num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void Document::polyline(std::span<const double> xs, std::span<const double> ys,
                        const std::string& stroke, double stroke_width) {
  PIGAN_CHECK(xs.size() == ys.size(), "polyline coordinate lengths differ");
  body_ += "<polyline points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(xs[i]) + "," + num(ys[i]);
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(stroke_width) + "\"/>\n";
}

void Document::polygon(std::span<const double> xs, std::span<const double> ys,
                       const std::string& fill, double opacity) {
  PIGAN_CHECK(xs.size() == ys.size(), "polygon coordinate lengths differ");
  body_ += "<polygon points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(xs[i]) + "," + num(ys[i]);
  }
  body_ += "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) +
           "\" stroke=\"none\"/>\n";
}

void Document::circle(double cx, double cy, double r,
                      const std::string& fill) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
           num(r) + "\" fill=\"" + fill + "\"/>\n";
}

void Document::text(double x, double y, const std::string& s, double size,
                    const std::string& anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
           num(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" +
           escape(s) + "</text>\n";
}

std::string Document::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"" +
         num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " +
         num(width_) + " " + num(height_) + "\">\n" + body_ + "</svg>\n";
}

std::string heat_color(double v) {
  if (!std::isfinite(v)) return "#808080";
  // Stops borrowed from a perceptually ordered palette.
  static constexpr double stops[5][3] = {{68, 1, 84},
                                         {59, 82, 139},
                                         {33, 145, 140},
                                         {94, 201, 98},
                                         {253, 231, 37}};
  const double u = std::clamp(v, 0.0, 1.0) * 4.0;
  const std::size_t k = std::min(std::size_t(u), std::size_t(3));
  const double f = u - static_cast<double>(k);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                int(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                int(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                int(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace pigan::svg
