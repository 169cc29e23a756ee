#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "butterfly/gaplabel.hpp"
#include "butterfly/report.hpp"

namespace bf = butterfly;
using bf::GapLabel;
using bf::Rational;

namespace {

std::vector<Rational> R(std::initializer_list<std::pair<int, int>> xs) {
  std::vector<Rational> out;
  for (auto [p, q] : xs) out.emplace_back(p, q);
  return out;
}

// Intersections of the trace line of (t0, s0) with the lines x = -t*theta + s
// of every shallower slope, enumerated directly.
std::vector<Rational> brute_predictions(const GapLabel& label) {
  const GapLabel pos = label.t > 0 ? label : GapLabel{-label.t, -label.s - 1};
  std::set<Rational> found;
  for (std::int64_t t = 1; t < pos.t; ++t)
    for (std::int64_t s = 1; s <= t; ++s) {
      const std::int64_t num = pos.s + s, den = pos.t + t;
      // strictly inside (s0/t0, (s0+1)/t0)
      if (num * pos.t > pos.s * den && num * pos.t < (pos.s + 1) * den) found.insert(Rational::reduced(num, den));
    }
  return {found.begin(), found.end()};
}

}  // namespace

TEST_CASE("label validity") {
  CHECK(GapLabel{1, 0}.valid());
  CHECK(GapLabel{4, 3}.valid());
  CHECK_FALSE(GapLabel{4, 4}.valid());
  CHECK_FALSE(GapLabel{3, -1}.valid());
  CHECK_FALSE(GapLabel{0, 0}.valid());
  CHECK(GapLabel{-1, -1}.valid());
  CHECK(GapLabel{-4, -2}.valid());
  CHECK_FALSE(GapLabel{-4, 0}.valid());
  CHECK_THROWS_AS(GapLabel({2, 2}).validate(), std::invalid_argument);
}

TEST_CASE("labels for a range of slopes") {
  const std::vector<GapLabel> want{{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}};
  CHECK(bf::labels_for_slopes(1, 3) == want);
  CHECK(bf::labels_for_slopes(-2, 1) == std::vector<GapLabel>{{1, 0}});
  CHECK(bf::labels_for_slopes(1, 20).size() == 210);
}

TEST_CASE("gap index and interval") {
  CHECK(bf::gap_index({4, 1}, Rational(2, 7)) == 1);
  CHECK(bf::gap_index({4, 1}, Rational(1, 3)) == 1);
  CHECK(bf::gap_index({4, 1}, Rational(3, 8)) == 4);
  CHECK(GapLabel{4, 1}.interval_start() == Rational(1, 4));
  CHECK(GapLabel{4, 1}.interval_end() == Rational(1, 2));
  CHECK(GapLabel{-4, -2}.interval_start() == Rational(1, 4));
  CHECK(GapLabel{-4, -2}.interval_end() == Rational(1, 2));
}

TEST_CASE("reflection is an involution preserving the interval") {
  for (const auto& l : bf::labels_for_slopes(1, 8)) {
    const auto m = bf::reflect_label(l);
    CHECK(m.valid());
    CHECK(bf::reflect_label(m) == l);
    CHECK(m.interval_start() == l.interval_start());
    CHECK(m.interval_end() == l.interval_end());
    for (const auto& theta : bf::farey_enumerate(12, l.interval_start(), l.interval_end()))
      CHECK(bf::gap_index(m, theta) == theta.q() - bf::gap_index(l, theta));
  }
}

TEST_CASE("predicted discontinuity tables") {
  CHECK(bf::predicted_discontinuities({1, 0}).empty());
  CHECK(bf::predicted_discontinuities({2, 0}) == R({{1, 3}}));
  CHECK(bf::predicted_discontinuities({2, 1}) == R({{2, 3}}));
  CHECK(bf::predicted_discontinuities({3, 0}) == R({{1, 5}, {1, 4}}));
  CHECK(bf::predicted_discontinuities({3, 1}) == R({{2, 5}, {1, 2}, {3, 5}}));
  CHECK(bf::predicted_discontinuities({3, 2}) == R({{3, 4}, {4, 5}}));
  CHECK(bf::predicted_discontinuities({4, 1}) == R({{2, 7}, {1, 3}, {2, 5}, {3, 7}}));
  CHECK(bf::predicted_discontinuities({-4, -2}) == R({{2, 7}, {1, 3}, {2, 5}, {3, 7}}));
}

TEST_CASE("predictions agree with direct line intersection for all labels up to t = 12") {
  for (const auto& l : bf::labels_for_slopes(1, 12)) {
    const auto got = bf::predicted_discontinuities(l);
    CHECK(got == brute_predictions(l));
    CHECK(bf::predicted_discontinuities(bf::reflect_label(l)) == got);
    CHECK(std::is_sorted(got.begin(), got.end()));
    for (const auto& theta : got) {
      CHECK(theta > l.interval_start());
      CHECK(theta < l.interval_end());
    }
  }
}

TEST_CASE("pseudo-gap location") {
  CHECK(bf::pseudo_gap_theta({4, 1}) == Rational(3, 8));
  CHECK(bf::pseudo_gap_theta({1, 0}) == Rational(1, 2));
  CHECK(bf::pseudo_gap_theta({3, 1}) == Rational(1, 2));
  CHECK_THROWS(bf::pseudo_gap_theta({-1, -1}));
}

TEST_CASE("slope-1 wing at q_max = 1 is the straight diagonal") {
  const auto w = bf::build_wing({1, 0}, 1, 2.0);
  REQUIRE(w.segments.size() == 1);
  const auto& seg = w.segments[0];
  CHECK(seg.theta == R({{0, 1}, {1, 1}}));
  CHECK(seg.left == std::vector<double>{-4.0, 4.0});
  CHECK(seg.right == std::vector<double>{-4.0, 4.0});
}

TEST_CASE("wing segments close onto single edges and contain valid gaps") {
  bf::SpectrumCache cache(2.0);
  for (const auto& l : bf::labels_for_slopes(1, 5)) {
    const auto w = bf::build_wing(l, 30, cache);
    CHECK(w.segments.size() == bf::predicted_discontinuities(l).size() + 1);
    for (const auto& seg : w.segments) {
      REQUIRE(seg.theta.size() >= 2);
      CHECK(std::is_sorted(seg.theta.begin(), seg.theta.end()));
      const auto& start = seg.theta.front();
      const auto& end = seg.theta.back();
      CHECK(seg.left.front() == seg.right.front());
      CHECK(seg.left.back() == seg.right.back());
      CHECK(seg.left.front() == cache.get(start).x(2 * bf::gap_index(l, start) + 1));
      CHECK(seg.left.back() == cache.get(end).x(2 * bf::gap_index(l, end)));
      for (std::size_t i = 1; i + 1 < seg.theta.size(); ++i) {
        CHECK(seg.theta[i].q() <= 30);
        CHECK(seg.left[i] <= seg.right[i]);
      }
    }
  }
}

TEST_CASE("reflected wings are x-negated") {
  bf::SpectrumCache cache(2.0);
  for (const auto& l : bf::labels_for_slopes(1, 4)) {
    const auto w = bf::build_wing(l, 20, cache);
    const auto m = bf::build_wing(bf::reflect_label(l), 20, cache);
    REQUIRE(w.segments.size() == m.segments.size());
    for (std::size_t k = 0; k < w.segments.size(); ++k) {
      CHECK(w.segments[k].theta == m.segments[k].theta);
      for (std::size_t i = 0; i < w.segments[k].theta.size(); ++i) {
        CHECK(std::abs(m.segments[k].left[i] + w.segments[k].right[i]) < 1e-12);
        CHECK(std::abs(m.segments[k].right[i] + w.segments[k].left[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("parallel wing building matches serial") {
  bf::SpectrumCache a(2.0), b(2.0);
  const auto labels = bf::labels_for_slopes(1, 6);
  const auto serial = bf::build_wings(labels, 25, a, 1);
  const auto parallel = bf::build_wings(labels, 25, b, 4);
  REQUIRE(serial.size() == parallel.size());
  CHECK(bf::wing_csv(serial) == bf::wing_csv(parallel));
}

TEST_CASE("steep labels build without gap index errors") {
  CHECK_NOTHROW(bf::build_wing({20, 7}, 50, 2.0));
  CHECK_NOTHROW(bf::build_wing({-13, -5}, 50, 2.0));
  CHECK_THROWS_AS(bf::build_wing({2, 0}, 0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(bf::build_wing({2, 2}, 10, 2.0), std::invalid_argument);
}

TEST_CASE("wing CSV layout") {
  const auto csv = bf::wing_csv({bf::build_wing({1, 0}, 1, 2.0)});
  CHECK(csv == "t,s,segment,p,q,left,right\n1,0,0,0,1,-4,-4\n1,0,0,1,1,4,4\n");
}

TEST_CASE("jump detection on low slopes") {
  bf::SpectrumCache cache(2.0);
  const auto one = bf::detect_jumps({1, 0}, 50, cache);
  CHECK(one.passed());
  CHECK(one.predicted.empty());
  const auto two = bf::detect_jumps({2, 0}, 50, cache);
  CHECK(two.passed());
  REQUIRE(two.matches.size() == 1);
  CHECK(two.matches[0].predicted == Rational(1, 3));
  CHECK_THROWS_AS(bf::detect_jumps({-2, -1}, 50, cache), std::invalid_argument);
  CHECK_THROWS_AS(bf::detect_jumps({4, 1}, 7, cache), std::invalid_argument);
}

TEST_CASE("every prediction is classified exactly once") {
  bf::SpectrumCache cache(2.0);
  for (const auto& l : bf::labels_for_slopes(1, 6)) {
    const auto r = bf::detect_jumps(l, 40, cache);
    CHECK(r.matches.size() + r.unmatched_predicted.size() + r.silent_predicted.size() == r.predicted.size());
    CHECK(r.detected.size() == r.matches.size() + r.pseudo_jumps.size() + r.unmatched_detected.size());
    for (const auto& d : r.detected) {
      CHECK(d.magnitude >= r.threshold);
      CHECK(d.below < d.above);
    }
  }
}

TEST_CASE("verification is independent of the worker count") {
  const auto a = bf::verify_conjecture(4, 40, 2.0, 0.05, 1);
  const auto b = bf::verify_conjecture(4, 40, 2.0, 0.05, 3);
  CHECK(bf::reports_to_json(a, bf::verdict(a)) == bf::reports_to_json(b, bf::verdict(b)));
  CHECK(a.size() == 10);
}

TEST_CASE("JSON report schema") {
  const auto reports = bf::verify_conjecture(1, 50, 2.0);
  const auto j = nlohmann::json::parse(bf::reports_to_json(reports, bf::verdict(reports)));
  CHECK(j["verdict"] == "PASS");
  REQUIRE(j["reports"].size() == 1);
  const auto& r = j["reports"][0];
  CHECK(r["label"]["t"] == 1);
  CHECK(r["label"]["s"] == 0);
  CHECK(r["q_max"] == 50);
  CHECK(r["pseudo_gap_theta"] == "1/2");
  for (const char* key : {"predicted", "detected", "matches", "pseudo_jumps", "unmatched_detected",
                          "unmatched_predicted", "silent_predicted"})
    CHECK(r[key].is_array());
}

TEST_CASE("windowed wings keep exactly the points inside the window") {
  bf::SpectrumCache cache(2.0);
  const bf::ThetaWindow window{0.27, 0.30};
  for (const GapLabel label : {GapLabel{4, 1}, GapLabel{-4, -2}}) {
    const auto full = bf::build_wing(label, 60, cache);
    const auto part = bf::build_wing(label, 60, cache, window);
    std::vector<std::tuple<Rational, double, double>> want, got;
    for (const auto& seg : full.segments)
      for (std::size_t i = 0; i < seg.theta.size(); ++i)
        if (window.contains(seg.theta[i])) want.emplace_back(seg.theta[i], seg.left[i], seg.right[i]);
    for (const auto& seg : part.segments) {
      CHECK(seg.theta.size() >= 2);
      for (std::size_t i = 0; i < seg.theta.size(); ++i) got.emplace_back(seg.theta[i], seg.left[i], seg.right[i]);
    }
    CHECK(got == want);
    CHECK(part.segments.size() == 2);
  }
  CHECK(bf::build_wing({4, 1}, 50, cache, {0.001, 0.0011}).segments.empty());
}

TEST_CASE("(2,0) at q_max = 3 splits at 1/3 with distinct closures") {
  const auto w = bf::build_wing({2, 0}, 3, 2.0);
  REQUIRE(w.segments.size() == 2);
  const auto e = bf::band_edges(Rational(1, 3), 2.0);
  CHECK(w.segments[0].theta.back() == Rational(1, 3));
  CHECK(w.segments[0].left.back() == e.x(4));
  CHECK(w.segments[1].theta.front() == Rational(1, 3));
  CHECK(w.segments[1].left.front() == e.x(5));
  CHECK(e.x(4) != e.x(5));
  const auto four = bf::build_wing({4, 1}, 50, 2.0);
  CHECK(four.segments.size() == 5);
}

TEST_CASE("interior gap indices are valid for every label and rational up to q = 40") {
  for (const auto& l : bf::labels_for_slopes(1, 12))
    for (const auto& theta : bf::farey_enumerate(40, l.interval_start(), l.interval_end())) {
      if (theta == l.interval_start() || theta == l.interval_end()) continue;
      const auto r = bf::gap_index(l, theta);
      CHECK(r >= 1);
      CHECK(r <= theta.q() - 1);
    }
}

TEST_CASE("predicted points have an unreduced denominator strictly between t and 2t") {
  for (const auto& l : bf::labels_for_slopes(1, 15))
    for (const auto& theta : bf::predicted_discontinuities(l)) {
      bool found = false;
      for (std::int64_t den = l.t + 1; den < 2 * l.t; ++den)
        found = found || (den % theta.q() == 0 && theta.p() * (den / theta.q()) - l.s >= 1 &&
                          theta.p() * (den / theta.q()) - l.s <= den - l.t);
      CHECK(found);
    }
}
