#include "butterfly/report.hpp"

#include <json.hpp>

namespace butterfly {

namespace {

nlohmann::ordered_json rationals(const std::vector<Rational>& values) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

nlohmann::ordered_json report_json(const JumpReport& r) {
  nlohmann::ordered_json j;
  j["label"] = {{"t", r.label.t}, {"s", r.label.s}};
  j["q_max"] = r.q_max;
  j["lambda"] = r.lambda;
  j["threshold"] = r.threshold;
  j["passed"] = r.passed();
  j["predicted"] = rationals(r.predicted);
  j["pseudo_gap_theta"] = r.pseudo_gap_theta ? nlohmann::ordered_json(r.pseudo_gap_theta->str()) : nullptr;
  auto detected = nlohmann::ordered_json::array();
  for (const auto& d : r.detected)
    detected.push_back({{"theta", d.theta.str()},
                        {"magnitude", d.magnitude},
                        {"below", d.below.str()},
                        {"above", d.above.str()}});
  j["detected"] = detected;
  auto matches = nlohmann::ordered_json::array();
  for (const auto& m : r.matches) matches.push_back({{"detected", m.detected.str()}, {"predicted", m.predicted.str()}});
  j["matches"] = matches;
  j["pseudo_jumps"] = rationals(r.pseudo_jumps);
  j["unmatched_detected"] = rationals(r.unmatched_detected);
  j["unmatched_predicted"] = rationals(r.unmatched_predicted);
  j["silent_predicted"] = rationals(r.silent_predicted);
  return j;
}

}  // namespace

std::string reports_to_json(const std::vector<JumpReport>& reports, bool passed) {
  nlohmann::ordered_json root;
  root["verdict"] = passed ? "PASS" : "FAIL";
  auto list = nlohmann::ordered_json::array();
  for (const auto& r : reports) list.push_back(report_json(r));
  root["reports"] = list;
  return root.dump(2) + "\n";
}

}  // namespace butterfly
