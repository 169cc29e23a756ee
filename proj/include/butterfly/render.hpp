#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "butterfly/gaplabel.hpp"

namespace butterfly {

inline constexpr double kDefaultThetaScale = 8.0;

struct Point {
  double x = 0.0;  // energy
  double y = 0.0;  // theta_scale * theta

  bool operator==(const Point&) const = default;
};

struct Polyline {
  std::vector<Point> points;

  bool operator==(const Polyline&) const = default;
};

struct EpsDocument {
  double scale = 100.0;
  double linewidth = 0.0005;
  int linecap = 1;
  double theta_scale = kDefaultThetaScale;
  // Half-width of the energy axis; the bounding box spans +-scale*x_extent.
  double x_extent = 4.0;
  std::vector<Polyline> polylines;
};

// Malformed figure text; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Four curves per segment in order: left, right, -left, -right, each with
// y = theta_scale * theta in ascending theta.
std::vector<Polyline> wings_to_polylines(const std::vector<Wing>& wings,
                                         double theta_scale = kDefaultThetaScale);

std::string emit_eps(const EpsDocument& doc);
std::vector<Polyline> parse_eps(const std::string& text);

std::string emit_svg(const EpsDocument& doc);

// Rows: polyline_id,x,y with a header line.
std::string emit_csv(const std::vector<Polyline>& polylines);
std::vector<Polyline> parse_csv(const std::string& text);

}  // namespace butterfly
