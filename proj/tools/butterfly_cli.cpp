#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "butterfly/format.hpp"
#include "butterfly/gaplabel.hpp"
#include "butterfly/render.hpp"
#include "butterfly/report.hpp"
#include "butterfly/spectrum.hpp"

namespace bf = butterfly;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;
constexpr const char* kConfigEnv = "BUTTERFLY_CONFIG";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::int64_t q_max = 50;
  std::int64_t t_min = 1;
  std::int64_t t_max = 5;
  double lambda = bf::kDefaultLambda;
  double threshold = bf::kDefaultJumpThreshold;
  std::string format;  // empty: the command's default
  std::string out;     // empty: stdout
  std::optional<std::pair<double, double>> window;
  bool mirror = true;
  unsigned jobs = 0;
  std::optional<bf::GapLabel> label;
};

double parse_number(const std::string& text, const std::string& what) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return bf::parse_double(text);
    const double den = bf::parse_double(text.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator");
    return bf::parse_double(text.substr(0, slash)) / den;
  } catch (const std::invalid_argument&) {
    throw UsageError(what + ": cannot parse '" + text + "'");
  }
}

std::int64_t parse_integer(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e15)
    throw UsageError(what + ": expected an integer, got '" + text + "'");
  return static_cast<std::int64_t>(v);
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw UsageError(what + ": expected true or false, got '" + text + "'");
}

bf::GapLabel parse_label(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("label: expected t,s but got '" + text + "'");
  bf::GapLabel label{parse_integer(text.substr(0, comma), "label"), parse_integer(text.substr(comma + 1), "label")};
  if (!label.valid()) throw UsageError("label: (" + text + ") is not a valid gap label");
  return label;
}

std::pair<double, double> parse_window(const std::string& lo, const std::string& hi) {
  return {parse_number(lo, "window"), parse_number(hi, "window")};
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Flat key=value file; '#' starts a comment line.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

void apply_config_file(RunConfig& cfg, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "qmax") cfg.q_max = parse_integer(value, key);
    else if (key == "tmin") cfg.t_min = parse_integer(value, key);
    else if (key == "tmax") cfg.t_max = parse_integer(value, key);
    else if (key == "lambda") cfg.lambda = parse_number(value, key);
    else if (key == "threshold") cfg.threshold = parse_number(value, key);
    else if (key == "format") cfg.format = value;
    else if (key == "out") cfg.out = value;
    else if (key == "jobs") cfg.jobs = static_cast<unsigned>(parse_integer(value, key));
    else if (key == "mirror") cfg.mirror = parse_bool(value, key);
    else if (key == "label") cfg.label = parse_label(value);
    else if (key == "window") {
      std::istringstream in(value);
      std::string lo, hi, extra;
      if (!(in >> lo >> hi) || (in >> extra)) throw UsageError("window: expected 'lo hi'");
      cfg.window = parse_window(lo, hi);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.q_max < 1) throw UsageError("qmax must be >= 1");
  if (cfg.t_min > cfg.t_max) throw UsageError("tmin must not exceed tmax");
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) throw UsageError("lambda must be positive");
  if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold)) throw UsageError("threshold must be positive");
  if (cfg.window) {
    const auto [lo, hi] = *cfg.window;
    if (!(lo < hi)) throw UsageError("window requires lo < hi");
  }
}

std::string pick_format(const RunConfig& cfg, const std::string& fallback,
                        const std::vector<std::string>& allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const auto& a : allowed)
    if (a == f) return f;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  throw UsageError("format '" + f + "' not available for this command (" + list + ")");
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + cfg.out + "'");
}

std::vector<bf::GapLabel> sweep_labels(const RunConfig& cfg) {
  auto labels = bf::labels_for_slopes(std::max<std::int64_t>(cfg.t_min, 1), cfg.t_max);
  if (cfg.mirror) {
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) labels.push_back(bf::reflect_label(labels[i]));
  }
  return labels;
}

bf::EpsDocument make_document(const RunConfig& cfg, std::vector<bf::Polyline> polylines) {
  bf::EpsDocument doc;
  doc.x_extent = 2.0 + cfg.lambda;
  doc.polylines = std::move(polylines);
  return doc;
}

std::string render_figure(const std::string& format, const bf::EpsDocument& doc) {
  if (format == "eps") return bf::emit_eps(doc);
  if (format == "svg") return bf::emit_svg(doc);
  return bf::emit_csv(doc.polylines);
}

// Keeps the part of each polyline with theta in [lo, hi] and stretches that
// range over the full figure height.
std::vector<bf::Polyline> clip_to_window(const std::vector<bf::Polyline>& polylines, double lo, double hi,
                                         double theta_scale) {
  std::vector<bf::Polyline> out;
  for (const auto& poly : polylines) {
    bf::Polyline clipped;
    for (const auto& pt : poly.points) {
      const double theta = pt.y / theta_scale;
      if (theta >= lo && theta <= hi) clipped.points.push_back({pt.x, theta_scale * (theta - lo) / (hi - lo)});
    }
    if (clipped.points.size() >= 2) out.push_back(std::move(clipped));
  }
  return out;
}

int cmd_spectrum(const RunConfig& cfg) {
  pick_format(cfg, "csv", {"csv"});
  const auto [lo, hi] = cfg.window.value_or(std::pair{0.0, 1.0});
  bf::SpectrumCache cache(cfg.lambda);
  std::string text;
  for (const auto& theta : bf::farey_enumerate(cfg.q_max, bf::Rational(0, 1), bf::Rational(1, 1))) {
    const double v = theta.value();
    if (v < lo || v > hi) continue;
    text += bf::edges_csv_row(cache.get(theta)) + "\n";
  }
  write_output(cfg, text);
  return kExitOk;
}

int cmd_wing(const RunConfig& cfg) {
  if (!cfg.label) throw UsageError("wing requires --label t,s");
  const std::string format = pick_format(cfg, "csv", {"csv", "eps", "svg"});
  bf::SpectrumCache cache(cfg.lambda);
  const std::vector<bf::Wing> wings{bf::build_wing(*cfg.label, cfg.q_max, cache)};
  if (format == "csv") write_output(cfg, bf::wing_csv(wings));
  else write_output(cfg, render_figure(format, make_document(cfg, bf::wings_to_polylines(wings))));
  return kExitOk;
}

int figure_command(const RunConfig& cfg, double lo, double hi) {
  const std::string format = pick_format(cfg, "eps", {"eps", "svg", "csv"});
  bf::SpectrumCache cache(cfg.lambda);
  const auto wings = bf::build_wings(sweep_labels(cfg), cfg.q_max, cache, cfg.jobs, bf::ThetaWindow{lo, hi});
  auto polylines = bf::wings_to_polylines(wings);
  if (lo != 0.0 || hi != 1.0) polylines = clip_to_window(polylines, lo, hi, bf::kDefaultThetaScale);
  if (polylines.empty())
    std::cerr << "warning: no wing points with q <= " << cfg.q_max << " in theta window ["
              << bf::format_shortest(lo) << ", " << bf::format_shortest(hi) << "]\n";
  write_output(cfg, render_figure(format, make_document(cfg, std::move(polylines))));
  return kExitOk;
}

int cmd_butterfly(const RunConfig& cfg) { return figure_command(cfg, 0.0, 1.0); }

int cmd_zoom(const RunConfig& cfg) {
  if (!cfg.window) throw UsageError("zoom requires --window lo hi");
  return figure_command(cfg, cfg.window->first, cfg.window->second);
}

int cmd_verify(const RunConfig& cfg) {
  pick_format(cfg, "json", {"json"});
  if (cfg.t_min != 1) std::cerr << "warning: verify always sweeps from t = 1; --tmin ignored\n";
  if (cfg.t_max < 1) throw UsageError("verify requires tmax >= 1");
  const auto reports = bf::verify_conjecture(cfg.t_max, cfg.q_max, cfg.lambda, cfg.threshold, cfg.jobs);
  const bool passed = bf::verdict(reports);
  write_output(cfg, bf::reports_to_json(reports, passed));
  std::cerr << (passed ? "PASS" : "FAIL") << ": " << reports.size() << " labels, t <= " << cfg.t_max
            << ", q_max = " << cfg.q_max << ", lambda = " << bf::format_shortest(cfg.lambda) << "\n";
  return passed ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap-labelled butterflies of the Hofstadter spectrum"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string qmax, tmin, tmax, lambda, threshold, format, out, jobs, label;
  std::vector<std::string> window;
  app.add_option("--qmax", qmax, "Largest denominator q (default 50)");
  app.add_option("--tmin", tmin, "Smallest inverse slope t (default 1)");
  app.add_option("--tmax", tmax, "Largest inverse slope t (default 5)");
  app.add_option("--lambda", lambda, "Coupling constant (default 2)");
  app.add_option("--threshold", threshold, "Jump detection threshold (default 0.05)");
  app.add_option("--format", format, "Output format: eps, svg, csv or json");
  app.add_option("--out", out, "Output file (default stdout)");
  app.add_option("--window", window, "Theta window lo hi")->expected(2);
  auto* no_mirror = app.add_flag("--no-mirror", "Skip the reflected labels (-t, -s-1)");
  app.add_option("--jobs", jobs, "Worker threads (default: all cores)");
  app.add_option("--label", label, "Gap label t,s for the wing command");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"spectrum", "Band edges for every rational in the window as CSV", cmd_spectrum},
      {"wing", "One labelled wing as CSV or a figure", cmd_wing},
      {"butterfly", "All wings for t in [tmin, tmax] as a figure", cmd_butterfly},
      {"verify", "Check the discontinuity conjecture; JSON report, exit 1 on FAIL", cmd_verify},
      {"zoom", "Butterfly figure restricted to a theta window", cmd_zoom},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (const char* path = std::getenv(kConfigEnv); path && *path) apply_config_file(cfg, read_config_file(path));
    if (!qmax.empty()) cfg.q_max = parse_integer(qmax, "qmax");
    if (!tmin.empty()) cfg.t_min = parse_integer(tmin, "tmin");
    if (!tmax.empty()) cfg.t_max = parse_integer(tmax, "tmax");
    if (!lambda.empty()) cfg.lambda = parse_number(lambda, "lambda");
    if (!threshold.empty()) cfg.threshold = parse_number(threshold, "threshold");
    if (!format.empty()) cfg.format = format;
    if (!out.empty()) cfg.out = out;
    if (!jobs.empty()) {
      const auto j = parse_integer(jobs, "jobs");
      if (j < 0) throw UsageError("jobs must be >= 0");
      cfg.jobs = static_cast<unsigned>(j);
    }
    if (!label.empty()) cfg.label = parse_label(label);
    if (!window.empty()) cfg.window = parse_window(window[0], window[1]);
    if (*no_mirror) cfg.mirror = false;
    validate(cfg);

    for (const auto& c : commands)
      if (app.got_subcommand(c.name)) return c.run(cfg);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
