#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "butterfly/rational.hpp"
#include "butterfly/spectrum.hpp"

namespace butterfly {

// Gap label (t, s): at theta = p/q it names gap r = t*p - s*q. t is the
// inverse slope of the trace line x = t*theta - s.
struct GapLabel {
  std::int64_t t = 1;
  std::int64_t s = 0;

  // t > 0: 0 <= s <= t-1.  t < 0: t <= s <= -1.
  bool valid() const;
  void validate() const;  // throws std::invalid_argument
  std::string str() const;

  // theta-range of the label, [s/t, (s+1)/t] for t > 0 (identical for the reflected label).
  Rational interval_start() const;
  Rational interval_end() const;

  friend bool operator==(const GapLabel&, const GapLabel&) = default;
  friend auto operator<=>(const GapLabel&, const GapLabel&) = default;
};

// All valid labels with inverse slope in [t_min, t_max], ordered by t then s.
// Non-positive slopes are skipped; mirrored labels are added by the caller.
std::vector<GapLabel> labels_for_slopes(std::int64_t t_min, std::int64_t t_max);

// t*p - s*q, unchecked.
std::int64_t gap_index(const GapLabel& label, const Rational& theta);

// (t, s) <-> (-t, -s-1). The image label's gaps are the negated gaps of the source.
GapLabel reflect_label(const GapLabel& label);

// Conjectured discontinuities (s0+s)/(t0+t), 0 < s <= t < t0, restricted to the
// open label interval, reduced, deduplicated and sorted.
std::vector<Rational> predicted_discontinuities(const GapLabel& label);

// theta solving t*theta - s = 1/2 (the gap crossing spectral zero), if it lies
// strictly inside the label interval. Requires t > 0.
std::optional<Rational> pseudo_gap_theta(const GapLabel& label);

struct WingSegment {
  std::vector<Rational> theta;
  std::vector<double> left;
  std::vector<double> right;
};

struct Wing {
  GapLabel label;
  std::vector<WingSegment> segments;
};

// Closed theta range for wing construction; points outside are skipped.
struct ThetaWindow {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(const Rational& theta) const { return theta.value() >= lo && theta.value() <= hi; }
};

// Gap endpoints over the label interval, split at the predicted
// discontinuities, with both ends of each segment closed onto a single
// spectral edge: x(2r+1) at a segment start, x(2r) at its end. Boundary
// rationals are always included, even when their denominator exceeds q_max.
// Negative labels are built from the reflected positive label. With a window,
// only points inside it are computed and segments left with fewer than two
// points are dropped.
Wing build_wing(const GapLabel& label, std::int64_t q_max, SpectrumCache& cache,
                const ThetaWindow& window = {});
Wing build_wing(const GapLabel& label, std::int64_t q_max, double lambda = kDefaultLambda);

// build_wing for each label on `jobs` threads (0 = hardware concurrency),
// results in input order.
std::vector<Wing> build_wings(const std::vector<GapLabel>& labels, std::int64_t q_max,
                              SpectrumCache& cache, unsigned jobs = 0, const ThetaWindow& window = {});

// Rows "t,s,segment,p,q,left,right" (with header).
std::string wing_csv(const std::vector<Wing>& wings);

inline constexpr double kDefaultJumpThreshold = 0.05;

struct DetectedJump {
  Rational theta;       // located rational (snapped to a prediction when straddled)
  double magnitude = 0.0;
  Rational below;       // consecutive pair straddling the jump
  Rational above;
};

struct JumpMatch {
  Rational detected;
  Rational predicted;
};

struct JumpReport {
  GapLabel label;
  std::int64_t q_max = 0;
  double lambda = kDefaultLambda;
  double threshold = kDefaultJumpThreshold;
  std::vector<DetectedJump> detected;
  std::vector<Rational> predicted;
  std::optional<Rational> pseudo_gap_theta;
  std::vector<JumpMatch> matches;
  std::vector<Rational> pseudo_jumps;  // detections located at pseudo_gap_theta
  std::vector<Rational> unmatched_detected;
  std::vector<Rational> unmatched_predicted;  // predictions whose jump exceeds threshold but were not detected
  std::vector<Rational> silent_predicted;     // predictions with no jump above threshold

  bool passed() const { return unmatched_detected.empty() && unmatched_predicted.empty(); }
};

// Scans the open label interval in Farey order. At each rational theta_k the
// movement of the gap midpoint from theta_{k-1} to theta_{k+1} is measured with
// the local trend removed; local maxima at or above `threshold` are reported.
// Requires t > 0 and q_max >= 2t.
JumpReport detect_jumps(const GapLabel& label, std::int64_t q_max, SpectrumCache& cache,
                        double threshold = kDefaultJumpThreshold);
JumpReport detect_jumps(const GapLabel& label, std::int64_t q_max, double lambda = kDefaultLambda,
                        double threshold = kDefaultJumpThreshold);

// detect_jumps for every valid label with 1 <= t <= t_range. `jobs` worker
// threads (0 = hardware concurrency); results ordered by label.
std::vector<JumpReport> verify_conjecture(std::int64_t t_range, std::int64_t q_max, double lambda,
                                          double threshold = kDefaultJumpThreshold,
                                          unsigned jobs = 0);

bool verdict(const std::vector<JumpReport>& reports);

}  // namespace butterfly
