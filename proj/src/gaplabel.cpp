#include "butterfly/gaplabel.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "butterfly/format.hpp"

namespace butterfly {

bool GapLabel::valid() const {
  if (t > 0) return 0 <= s && s <= t - 1;
  if (t < 0) return t <= s && s <= -1;
  return false;
}

void GapLabel::validate() const {
  if (!valid()) throw std::invalid_argument("invalid gap label " + str());
}

std::string GapLabel::str() const {
  return "(" + std::to_string(t) + "," + std::to_string(s) + ")";
}

Rational GapLabel::interval_start() const {
  validate();
  return t > 0 ? Rational::reduced(s, t) : Rational::reduced(-s - 1, -t);
}

Rational GapLabel::interval_end() const {
  validate();
  return t > 0 ? Rational::reduced(s + 1, t) : Rational::reduced(-s, -t);
}

std::vector<GapLabel> labels_for_slopes(std::int64_t t_min, std::int64_t t_max) {
  std::vector<GapLabel> labels;
  for (std::int64_t t = std::max<std::int64_t>(t_min, 1); t <= t_max; ++t)
    for (std::int64_t s = 0; s < t; ++s) labels.push_back({t, s});
  return labels;
}

std::int64_t gap_index(const GapLabel& label, const Rational& theta) {
  return label.t * theta.p() - label.s * theta.q();
}

GapLabel reflect_label(const GapLabel& label) {
  label.validate();
  return {-label.t, -label.s - 1};
}

std::vector<Rational> predicted_discontinuities(const GapLabel& label) {
  label.validate();
  // The reflected label covers the same theta-interval and jumps at the same places.
  const GapLabel base = label.t > 0 ? label : reflect_label(label);
  const std::int64_t t0 = base.t;
  const std::int64_t s0 = base.s;
  const Rational lo = base.interval_start();
  const Rational hi = base.interval_end();

  std::vector<Rational> out;
  for (std::int64_t t = 1; t < t0; ++t) {
    for (std::int64_t s = 1; s <= t; ++s) {
      const Rational theta = Rational::reduced(s0 + s, t0 + t);
      if (lo < theta && theta < hi) out.push_back(theta);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Rational> pseudo_gap_theta(const GapLabel& label) {
  label.validate();
  if (label.t <= 0) throw std::invalid_argument("pseudo_gap_theta: requires t > 0");
  const Rational theta = Rational::reduced(2 * label.s + 1, 2 * label.t);
  if (label.interval_start() < theta && theta < label.interval_end()) return theta;
  return std::nullopt;
}

Wing build_wing(const GapLabel& label, std::int64_t q_max, SpectrumCache& cache,
                const ThetaWindow& window) {
  label.validate();
  if (q_max < 1) throw std::invalid_argument("build_wing: q_max must be >= 1");

  if (label.t < 0) {
    Wing mirrored = build_wing(reflect_label(label), q_max, cache, window);
    mirrored.label = label;
    for (auto& seg : mirrored.segments) {
      for (std::size_t i = 0; i < seg.theta.size(); ++i) {
        const double left = seg.left[i];
        seg.left[i] = -seg.right[i];
        seg.right[i] = -left;
      }
    }
    return mirrored;
  }

  std::vector<Rational> jumps{label.interval_start(), label.interval_end()};
  for (const auto& theta : predicted_discontinuities(label)) jumps.push_back(theta);
  std::sort(jumps.begin(), jumps.end());

  Wing wing{label, {}};
  for (std::size_t k = 0; k + 1 < jumps.size(); ++k) {
    const Rational& start = jumps[k];
    const Rational& end = jumps[k + 1];
    std::vector<Rational> thetas = farey_enumerate(q_max, start, end);
    if (thetas.empty() || thetas.front() != start) thetas.insert(thetas.begin(), start);
    if (thetas.back() != end) thetas.push_back(end);

    WingSegment seg;
    for (const auto& theta : thetas) {
      if (!window.contains(theta)) continue;
      const SpectrumEdges edges = cache.get(theta);
      const std::int64_t r = gap_index(label, theta);
      double left = 0.0;
      double right = 0.0;
      if (theta == start) {
        left = right = edges.x(2 * r + 1);
      } else if (theta == end) {
        left = right = edges.x(2 * r);
      } else {
        if (r < 1 || r > theta.q() - 1)
          throw std::logic_error("build_wing: label " + label.str() + " gives gap " +
                                 std::to_string(r) + " at interior theta " + theta.str());
        const Gap g = gap(edges, r);
        left = g.left;
        right = g.right;
      }
      seg.theta.push_back(theta);
      seg.left.push_back(left);
      seg.right.push_back(right);
    }
    if (seg.theta.size() >= 2) wing.segments.push_back(std::move(seg));
  }
  return wing;
}

Wing build_wing(const GapLabel& label, std::int64_t q_max, double lambda) {
  SpectrumCache cache(lambda);
  return build_wing(label, q_max, cache);
}

std::string wing_csv(const std::vector<Wing>& wings) {
  std::string out = "t,s,segment,p,q,left,right\n";
  for (const auto& wing : wings) {
    for (std::size_t k = 0; k < wing.segments.size(); ++k) {
      const auto& seg = wing.segments[k];
      for (std::size_t i = 0; i < seg.theta.size(); ++i) {
        out += std::to_string(wing.label.t) + "," + std::to_string(wing.label.s) + "," +
               std::to_string(k) + "," + std::to_string(seg.theta[i].p()) + "," +
               std::to_string(seg.theta[i].q()) + "," + format_shortest(seg.left[i]) + "," +
               format_shortest(seg.right[i]) + "\n";
      }
    }
  }
  return out;
}

JumpReport detect_jumps(const GapLabel& label, std::int64_t q_max, SpectrumCache& cache,
                        double threshold) {
  label.validate();
  if (label.t <= 0) throw std::invalid_argument("detect_jumps: requires t > 0");
  if (q_max < 2 * label.t) throw std::invalid_argument("detect_jumps: requires q_max >= 2t");

  JumpReport report;
  report.label = label;
  report.q_max = q_max;
  report.lambda = cache.lambda();
  report.threshold = threshold;
  report.predicted = predicted_discontinuities(label);
  report.pseudo_gap_theta = pseudo_gap_theta(label);

  const Rational lo = label.interval_start();
  const Rational hi = label.interval_end();
  std::vector<Rational> thetas;
  for (const auto& theta : farey_enumerate(q_max, lo, hi))
    if (theta != lo && theta != hi) thetas.push_back(theta);

  std::vector<double> mids;
  mids.reserve(thetas.size());
  for (const auto& theta : thetas) mids.push_back(gap(cache.get(theta), gap_index(label, theta)).midpoint());

  // Movement across each interior rational with the local trend removed. A
  // discontinuity at theta_k leaves the gap at theta_k between the two one-sided
  // limits, so it straddles k-1 .. k+1. The trend is the gentler of the slopes
  // just outside the straddle, or zero when they disagree in sign.
  const std::size_t n = thetas.size();
  std::vector<double> across(n, -1.0);
  auto slope = [&](std::size_t a, std::size_t b) {
    return (mids[b] - mids[a]) / (thetas[b].value() - thetas[a].value());
  };
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double s1 = slope(k - 2, k - 1);
    const double s2 = slope(k + 1, k + 2);
    const double trend = s1 * s2 <= 0.0 ? 0.0 : (std::abs(s1) < std::abs(s2) ? s1 : s2);
    const double span = thetas[k + 1].value() - thetas[k - 1].value();
    across[k] = std::abs(mids[k + 1] - mids[k - 1] - trend * span);
  }

  auto is_predicted = [&](const Rational& theta) {
    return std::binary_search(report.predicted.begin(), report.predicted.end(), theta);
  };
  auto is_pseudo = [&](const Rational& theta) {
    return report.pseudo_gap_theta && *report.pseudo_gap_theta == theta;
  };

  std::map<Rational, DetectedJump> located;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const bool peak = across[k] >= threshold && across[k] >= across[k - 1] && across[k] >= across[k + 1];
    if (!peak) continue;
    // Snap to a predicted (then pseudo-gap) rational inside the straddle, centre first.
    const std::array<Rational, 3> straddle{thetas[k], thetas[k - 1], thetas[k + 1]};
    Rational where = thetas[k];
    if (auto it = std::find_if(straddle.begin(), straddle.end(), is_predicted); it != straddle.end())
      where = *it;
    else if (auto ps = std::find_if(straddle.begin(), straddle.end(), is_pseudo); ps != straddle.end())
      where = *ps;

    auto it = located.find(where);
    if (it == located.end() || it->second.magnitude < across[k])
      located[where] = DetectedJump{where, across[k], thetas[k - 1], thetas[k + 1]};
  }

  for (const auto& [theta, jump] : located) {
    report.detected.push_back(jump);
    if (is_predicted(theta)) report.matches.push_back({theta, theta});
    else if (is_pseudo(theta)) report.pseudo_jumps.push_back(theta);
    else report.unmatched_detected.push_back(theta);
  }

  for (const auto& theta : report.predicted) {
    if (located.count(theta)) continue;
    double movement = 0.0;
    const auto pos = std::lower_bound(thetas.begin(), thetas.end(), theta);
    if (pos != thetas.end() && *pos == theta) movement = across[static_cast<std::size_t>(pos - thetas.begin())];
    if (movement >= threshold) report.unmatched_predicted.push_back(theta);
    else report.silent_predicted.push_back(theta);
  }
  return report;
}

JumpReport detect_jumps(const GapLabel& label, std::int64_t q_max, double lambda,
                        double threshold) {
  SpectrumCache cache(lambda);
  return detect_jumps(label, q_max, cache, threshold);
}

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads (0 = hardware
// concurrency); the first exception is rethrown after all workers finish.
template <typename Task>
void parallel_for(std::size_t count, unsigned jobs, Task task) {
  if (count == 0) return;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    } catch (...) {
      errors[id] = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < jobs; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<Wing> build_wings(const std::vector<GapLabel>& labels, std::int64_t q_max,
                              SpectrumCache& cache, unsigned jobs, const ThetaWindow& window) {
  std::vector<Wing> wings(labels.size());
  parallel_for(labels.size(), jobs,
               [&](std::size_t i) { wings[i] = build_wing(labels[i], q_max, cache, window); });
  return wings;
}

std::vector<JumpReport> verify_conjecture(std::int64_t t_range, std::int64_t q_max, double lambda,
                                          double threshold, unsigned jobs) {
  if (t_range < 1) throw std::invalid_argument("verify_conjecture: t_range must be >= 1");
  const auto labels = labels_for_slopes(1, t_range);
  std::vector<JumpReport> reports(labels.size());
  SpectrumCache cache(lambda);
  parallel_for(labels.size(), jobs,
               [&](std::size_t i) { reports[i] = detect_jumps(labels[i], q_max, cache, threshold); });
  return reports;
}

bool verdict(const std::vector<JumpReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const JumpReport& r) { return r.passed(); });
}

}  // namespace butterfly
