#include "butterfly/render.hpp"

#include <cmath>
#include <sstream>

#include "butterfly/format.hpp"

namespace butterfly {

namespace {

void check_document(const EpsDocument& doc) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(doc.scale)) throw std::invalid_argument("figure scale must be positive and finite");
  if (!positive(doc.linewidth)) throw std::invalid_argument("line width must be positive and finite");
  if (!positive(doc.theta_scale)) throw std::invalid_argument("theta scale must be positive and finite");
  if (!positive(doc.x_extent)) throw std::invalid_argument("x extent must be positive and finite");
  if (doc.linecap < 0 || doc.linecap > 2) throw std::invalid_argument("line cap must be 0, 1 or 2");
}

void check_polylines(const std::vector<Polyline>& polylines) {
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    if (polylines[i].points.size() < 2)
      throw std::invalid_argument("polyline " + std::to_string(i) + " has fewer than two points");
    for (const auto& pt : polylines[i].points)
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y))
        throw std::invalid_argument("polyline " + std::to_string(i) + " has a non-finite coordinate");
  }
}

std::string bounding_number(double v) {
  const double rounded = std::round(v);
  return format_shortest(rounded == 0.0 ? 0.0 : rounded);
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

double parse_coordinate(const std::string& word, std::size_t line) {
  double v = 0.0;
  try {
    v = parse_double(word);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "bad number '" + word + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, "non-finite coordinate '" + word + "'");
  return v;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::vector<Polyline> wings_to_polylines(const std::vector<Wing>& wings, double theta_scale) {
  std::vector<Polyline> out;
  for (const auto& wing : wings) {
    for (const auto& seg : wing.segments) {
      Polyline left, right, mleft, mright;
      for (std::size_t i = 0; i < seg.theta.size(); ++i) {
        const double y = theta_scale * seg.theta[i].value();
        left.points.push_back({seg.left[i], y});
        right.points.push_back({seg.right[i], y});
        mleft.points.push_back({-seg.left[i], y});
        mright.points.push_back({-seg.right[i], y});
      }
      out.push_back(std::move(left));
      out.push_back(std::move(right));
      out.push_back(std::move(mleft));
      out.push_back(std::move(mright));
    }
  }
  return out;
}

std::string emit_eps(const EpsDocument& doc) {
  check_document(doc);
  check_polylines(doc.polylines);
  std::string out;
  out += "%!PS-Adobe-3.0 EPSF-3.0\n";
  out += "%%BoundingBox: " + bounding_number(-doc.scale * doc.x_extent) + " 0 " +
         bounding_number(doc.scale * doc.x_extent) + " " +
         bounding_number(doc.scale * doc.theta_scale) + "\n";
  const std::string scale = format_ps_number(doc.scale);
  out += scale + " " + scale + " scale \n";
  out += format_ps_number(doc.linewidth) + " setlinewidth \n";
  out += std::to_string(doc.linecap) + " setlinecap \n";
  for (const auto& poly : doc.polylines) {
    out += "newpath \n";
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
      out += format_sci12(poly.points[i].x) + " " + format_sci12(poly.points[i].y);
      out += i == 0 ? " moveto \n" : " lineto \n";
    }
    out += "stroke \n";
  }
  return out;
}

std::vector<Polyline> parse_eps(const std::string& text) {
  const auto lines = split_lines(text);
  std::vector<Polyline> out;
  bool open = false;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    if (!lines[n].empty() && lines[n][0] == '%') continue;
    const auto words = split_words(lines[n]);
    if (words.empty()) continue;
    const std::string& op = words.back();
    if (op == "scale" || op == "setlinewidth" || op == "setlinecap") {
      if (open) throw ParseError(line, "'" + op + "' inside a path");
      const std::size_t want = op == "scale" ? 3 : 2;
      if (words.size() != want) throw ParseError(line, "wrong operand count for '" + op + "'");
      for (std::size_t i = 0; i + 1 < words.size(); ++i) parse_coordinate(words[i], line);
    } else if (op == "newpath") {
      if (words.size() != 1) throw ParseError(line, "'newpath' takes no operands");
      if (open) throw ParseError(line, "'newpath' before 'stroke'");
      out.emplace_back();
      open = true;
    } else if (op == "moveto" || op == "lineto") {
      if (words.size() != 3) throw ParseError(line, "'" + op + "' needs two operands");
      if (!open) throw ParseError(line, "'" + op + "' outside a path");
      const bool first = out.back().points.empty();
      if (first != (op == "moveto"))
        throw ParseError(line, first ? "path must start with 'moveto'" : "unexpected 'moveto' mid-path");
      out.back().points.push_back({parse_coordinate(words[0], line), parse_coordinate(words[1], line)});
    } else if (op == "stroke") {
      if (words.size() != 1) throw ParseError(line, "'stroke' takes no operands");
      if (!open) throw ParseError(line, "'stroke' without 'newpath'");
      if (out.back().points.size() < 2) throw ParseError(line, "path has fewer than two points");
      open = false;
    } else {
      throw ParseError(line, "unknown operator '" + op + "'");
    }
  }
  if (open) throw ParseError(lines.size(), "missing 'stroke' at end of input");
  return out;
}

std::string emit_svg(const EpsDocument& doc) {
  check_document(doc);
  check_polylines(doc.polylines);
  const double width = 2.0 * doc.scale * doc.x_extent;
  const double height = doc.scale * doc.theta_scale;
  static constexpr const char* kCaps[] = {"butt", "round", "square"};
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + format_shortest(width) +
         "\" height=\"" + format_shortest(height) + "\" viewBox=\"" +
         format_shortest(-doc.scale * doc.x_extent) + " 0 " + format_shortest(width) + " " +
         format_shortest(height) + "\">\n";
  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + format_shortest(doc.linewidth * doc.scale) +
         "\" stroke-linecap=\"" + kCaps[doc.linecap] + "\">\n";
  for (const auto& poly : doc.polylines) {
    out += "<path d=\"";
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
      const double x = doc.scale * poly.points[i].x;
      const double y = height - doc.scale * poly.points[i].y;
      out += (i == 0 ? "M" : " L") + format_shortest(x == 0.0 ? 0.0 : x) + " " +
             format_shortest(y == 0.0 ? 0.0 : y);
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string emit_csv(const std::vector<Polyline>& polylines) {
  for (std::size_t i = 0; i < polylines.size(); ++i)
    for (const auto& pt : polylines[i].points)
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y))
        throw std::invalid_argument("polyline " + std::to_string(i) + " has a non-finite coordinate");
  std::string out = "polyline_id,x,y\n";
  for (std::size_t i = 0; i < polylines.size(); ++i)
    for (const auto& pt : polylines[i].points)
      out += std::to_string(i) + "," + format_shortest(pt.x) + "," + format_shortest(pt.y) + "\n";
  return out;
}

std::vector<Polyline> parse_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "polyline_id,x,y") throw ParseError(1, "missing header 'polyline_id,x,y'");
  std::vector<Polyline> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    if (lines[n].empty()) continue;
    std::vector<std::string> fields;
    std::istringstream in(lines[n]);
    for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
    if (fields.size() != 3) throw ParseError(line, "expected 3 fields");
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(fields[0], &used);
      if (used != fields[0].size() || fields[0][0] == '-') throw std::invalid_argument("id");
      id = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ParseError(line, "bad polyline id '" + fields[0] + "'");
    }
    if (id + 1 < out.size() || id > out.size()) throw ParseError(line, "polyline ids must be consecutive");
    if (id == out.size()) out.emplace_back();
    out.back().points.push_back({parse_coordinate(fields[1], line), parse_coordinate(fields[2], line)});
  }
  return out;
}

}  // namespace butterfly
