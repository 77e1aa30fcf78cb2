// Copyright 2026 The sbcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbcert/report.hpp"

namespace sbcert {

using nlohmann::json;

json to_json(const ProbabilityEstimate& e) {
  return json{{"point", e.point},
              {"ci_low", e.ci_low},
              {"ci_high", e.ci_high},
              {"confidence_level", e.confidence_level},
              {"shots", e.shots}};
}

namespace {

json grid_json(const EstimateGrid& g) {
  json out = json::object();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out["outcome" + std::to_string(i) + "_prepared" + std::to_string(j)] = to_json(g[i][j]);
  return out;
}

json setting_json(const SwapSetting& s) {
  return json{{"00", to_json(s.p00)},          {"01", to_json(s.p01)},
              {"10", to_json(s.p10)},          {"11", to_json(s.p11)},
              {"leaked", to_json(s.leaked)},   {"off_effective", to_json(s.off_effective)},
              {"diagonal", to_json(s.diagonal)}};
}

}  // namespace

json to_json(const NotStatistics& s) {
  json out{{"p", grid_json(s.p)},
           {"p_leak", json::array({to_json(s.p_leak[0]), to_json(s.p_leak[1])})}};
  if (s.r) {
    out["r"] = grid_json(*s.r);
    out["r_leak"] = json::array({to_json((*s.r_leak)[0]), to_json((*s.r_leak)[1])});
  }
  return out;
}

json to_json(const SwapStatistics& s) {
  json out;
  const char* names[2] = {"01", "10"};
  for (std::size_t j = 0; j < 2; ++j) {
    out["t"][names[j]] = setting_json(s.gate[j]);
    out["t_half"][names[j]] = setting_json(s.half[j]);
  }
  return out;
}

json to_json(const DerivedRatios& d) {
  json out{{"q_0^1", d.q01},
           {"q_1^0", d.q10},
           {"s", {{"s_0^0", d.s[0][0]}, {"s_1^0", d.s[1][0]}, {"s_0^1", d.s[0][1]}, {"s_1^1", d.s[1][1]}}},
           {"delta_s", {{"ds_0^0", d.ds[0][0]}, {"ds_1^0", d.ds[1][0]}, {"ds_0^1", d.ds[0][1]}, {"ds_1^1", d.ds[1][1]}}},
           {"delta_s0_abs_max", d.ds0_abs_max},
           {"p_deficit", d.p_deficit},
           {"r_deficit", d.r_deficit},
           {"one_minus_eps_prime", d.one_minus_eps_prime},
           {"eps_prime", d.eps_prime},
           {"cap_offset", d.cap_offset}};
  out["delta"] = d.delta ? json(*d.delta) : json(nullptr);
  if (!d.delta_reason.empty()) out["delta_reason"] = d.delta_reason;
  return out;
}

json to_json(const StatisticalCorrection& c) {
  return json{{"policy", to_string(c.policy)},
              {"method", "bonferroni"},
              {"estimates_used", c.estimates_used},
              {"per_estimate_level", c.per_estimate_level},
              {"joint_level", c.joint_level}};
}

json to_json(const SuperpositionCertificate& c) {
  json out{{"mode", to_string(c.mode)},
           {"cap_formula", to_string(c.cap_formula)},
           {"distance_upper_bound", c.distance_upper_bound},
           {"distance_lower_bound", c.distance_lower_bound},
           {"fidelity_lower_bound", c.fidelity_lower_bound},
           {"per_state_distance", c.per_state_distance},
           {"statistical_policy", to_json(c.correction)},
           {"valid", c.valid},
           {"vacuous", c.vacuous},
           {"fires", c.fires()},
           {"reason", c.reason}};
  out["derived"] = c.derived ? to_json(*c.derived) : json(nullptr);
  return out;
}

json to_json(const EntanglementCertificate& c) {
  return json{{"fidelity_lower_bound", c.fidelity_lower_bound},
              {"entangled", c.entangled},
              {"subspace_weight_floor", c.subspace_weight_floor},
              {"subspace_weight_ratio", c.subspace_weight_ratio},
              {"effective_qubit_certificate", to_json(c.effective_qubit_certificate)},
              {"statistical_policy", to_json(c.correction)},
              {"valid", c.valid},
              {"reason", c.reason}};
}

}  // namespace sbcert
