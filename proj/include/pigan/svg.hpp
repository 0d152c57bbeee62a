#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace pigan::svg {

// Small SVG 1.1 string builder. Coordinates are written with two fixed
// decimals so output is byte-stable across runs; no timestamps or ids.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill);
  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double stroke_width);
  void polyline(std::span<const double> xs, std::span<const double> ys,
                const std::string& stroke, double stroke_width);
  // Closed filled path: xs/ys walked forward.
  void polygon(std::span<const double> xs, std::span<const double> ys,
               const std::string& fill, double opacity);
  void circle(double cx, double cy, double r, const std::string& fill);
  // anchor: "start", "middle", or "end".
  void text(double x, double y, const std::string& s, double size,
            const std::string& anchor = "start");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

// Sequential colormap for v in [0,1] (dark violet to yellow); out-of-range
// values are clamped, non-finite values map to grey.
std::string heat_color(double v);

}  // namespace pigan::svg
