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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "sbcert/error.hpp"
#include "sbcert/experiment.hpp"
#include "support.hpp"

using namespace sbcert;
using nlohmann::json;
using sbcert::testing::kPi;

namespace {

std::string config_error(const std::string& text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

ExperimentConfig noiseless_exact() {
  return ExperimentConfig::parse(R"({"gate": "NOT", "statistics": "exact",
                                     "certificate": {"mode": "exact", "policy": "point"}})");
}

}  // namespace

TEST(Config, Defaults) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "NOT"})");
  EXPECT_EQ(c.scenario.leakage.levels, 2u);
  EXPECT_DOUBLE_EQ(c.gate_time, kPi);
  EXPECT_DOUBLE_EQ(c.half_time, kPi / 2);
  EXPECT_EQ(c.shots, 10000u);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.statistics, StatisticsSource::kSampled);
  EXPECT_EQ(c.mode, CertificateMode::kApproximate);
  EXPECT_EQ(c.certify.policy, StatisticalPolicy::kConservativeCi);
  EXPECT_EQ(c.certify.cap_formula, CapFormula::kVerticalSeparation);
  EXPECT_DOUBLE_EQ(c.confidence_level, 0.95);
  EXPECT_FALSE(c.pathology_schedule);
  EXPECT_EQ(c.prepared()[1], "1");

  const ExperimentConfig s = ExperimentConfig::parse(R"({"gate": "SWAP", "rate": 2.0})");
  EXPECT_DOUBLE_EQ(s.gate_time, kPi / 2);
  EXPECT_EQ(s.layout().subsystems, 2u);
  EXPECT_EQ(s.prepared()[0], "01");
}

TEST(Config, ErrorsCarryFieldPaths) {
  EXPECT_EQ(config_error(R"({"gate": "NOT", "noise": {"dephasng": 0.1}})"), "noise.dephasng: unknown key");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "extra": 1})"), "extra: unknown key");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "noise": {"dephasing": "big"}})"), "noise.dephasing: expected a number");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "noise": {"dephasing": -1}})"), "noise.dephasing: must be >= 0");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "plan": {"shots": 1.5}})"),
            "plan.shots: expected a non-negative integer");
  EXPECT_EQ(config_error(R"({"rate": 1})"), "gate: required");
  EXPECT_EQ(config_error(R"({"gate": "CNOT"})"), "gate: expected one of NOT, SWAP");
  EXPECT_EQ(config_error(R"({"schema_version": 2, "gate": "NOT"})"), "schema_version: unsupported version 2");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "plan": {"half_time": 4.0}})"),
            "plan.half_time: must lie in (0, gate_time)");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "leakage": {"levels": 4, "detunings": [1.0]}})"),
            "leakage.detunings: expected levels - 2 entries");
  EXPECT_EQ(config_error(R"({"gate": "SWAP", "certificate": {"mode": "exact"}})"),
            "certificate.mode: SWAP certificates use the approximate effective-qubit bound");
  EXPECT_EQ(config_error(R"({"gate": "NOT", "verify": {"cap_grid": 10}})"), "verify.cap_grid: must be >= 1000");
  EXPECT_EQ(config_error("[1, 2]"), "config: expected an object");
  EXPECT_NE(config_error("{").find("not valid JSON"), std::string::npos);
}

TEST(Config, RoundTrip) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({
    "gate": "NOT", "rate": 1.5,
    "noise": {"dephasing": 0.01, "leakage_coupling": 0.05},
    "leakage": {"levels": 4, "detunings": [8.0, 16.0]},
    "plan": {"shots": 500, "seed": 9, "half_time": 1.0},
    "pathology": {"schedule": [{"start": 0.1, "duration": 0.2}]},
    "output": {"path": "out.json"}})");
  const json once = c.to_json();
  const json twice = ExperimentConfig::parse(once.dump()).to_json();
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once["plan"]["half_time"], 1.0);
  EXPECT_EQ(once["output"]["path"], "out.json");
}

TEST(Certify, NoiselessExactCertifies) {
  const RunResult r = certify(noiseless_exact(), std::nullopt, RunOptions{true});
  EXPECT_EQ(r.status, 0);
  const json j = json::parse(r.output);
  EXPECT_EQ(j["verdict"], "certified");
  EXPECT_EQ(j["data"]["source"], "exact");
  EXPECT_NEAR(j["certificate"]["fidelity_lower_bound"].get<double>(), 1.0, 1e-9);
  EXPECT_FALSE(j.contains("generated_at"));
  EXPECT_TRUE(json::parse(certify(noiseless_exact(), std::nullopt, RunOptions{false}).output).contains("generated_at"));
}

TEST(Certify, HeavyDepolarizingIsVacuous) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "NOT", "noise": {"depolarizing": 1.0},
                                                          "plan": {"shots": 10000, "seed": 3}})");
  const RunResult r = certify(c, std::nullopt, RunOptions{true});
  EXPECT_EQ(r.status, 2);
  const json j = json::parse(r.output);
  EXPECT_EQ(j["verdict"], "vacuous");
  EXPECT_EQ(j["certificate"]["reason"].get<std::string>().rfind("vacuous bound", 0), 0u);
}

TEST(Certify, CsvMatchesInlineAndIsDeterministic) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "NOT", "noise": {"dephasing": 0.01},
      "leakage": {"levels": 3}, "plan": {"shots": 2000, "seed": 4}})");
  const std::string csv = simulate(c).output;
  EXPECT_EQ(csv, simulate(c).output);
  EXPECT_EQ(csv.substr(0, CountTable::kCsvHeader.size()), CountTable::kCsvHeader);
  const RunResult inline_run = certify(c, std::nullopt, RunOptions{true});
  const RunResult csv_run = certify(c, csv, RunOptions{true});
  EXPECT_EQ(inline_run.output, csv_run.output);
  EXPECT_EQ(inline_run.status, csv_run.status);
  const json j = json::parse(csv_run.output);
  EXPECT_EQ(j["data"]["shots"], 2000);
  EXPECT_EQ(j["data"]["seed"], 4);

  std::string broken = csv;
  broken.replace(broken.find(",2000,"), 6, ",1999,");
  try {
    certify(c, broken, RunOptions{true});
    ADD_FAILURE() << "inconsistent table accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCsv);
  }
}

TEST(Certify, SwapFromCounts) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "SWAP", "noise": {"dephasing": 0.002},
      "plan": {"shots": 100000, "seed": 2}})");
  const RunResult r = certify(c, std::nullopt, RunOptions{true});
  const json j = json::parse(r.output);
  EXPECT_EQ(r.status, 0) << j["certificate"].dump();
  EXPECT_EQ(j["verdict"], "certified");
  EXPECT_GT(j["certificate"]["fidelity_lower_bound"].get<double>(), 0.5);
}

TEST(ScanTimes, FindsHalfAndGateTimes) {
  ExperimentConfig c = noiseless_exact();
  const RunResult r = scan_times(c, RunOptions{true});
  EXPECT_EQ(r.status, 0);
  const json j = json::parse(r.output);
  EXPECT_EQ(j["grid"].size(), 401u);
  const double dt = 2 * kPi / 400;
  // Linear interpolation of sin^2 near its inflection point.
  EXPECT_NEAR(j["estimate"]["half_time"].get<double>(), kPi / 2, 1e-4);
  EXPECT_NEAR(j["estimate"]["gate_time"].get<double>(), kPi, 0.5 * dt + 1e-12);
  EXPECT_NEAR(j["estimate"]["peak_probability"].get<double>(), 1.0, 1e-9);

  // Strong decay back to |0> keeps the population below one half.
  c.scenario.noise.amplitude_damping_rate = 10.0;
  EXPECT_EQ(scan_times(c, RunOptions{true}).status, 2);
}

TEST(Verify, SmallRunPasses) {
  ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "NOT",
      "verify": {"trials": 10, "inequality_pairs": 200, "cap_draws": 20, "cap_grid": 1000}})");
  const RunResult r = verify(c, RunOptions{true});
  const json j = json::parse(r.output);
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["suites"].size(), 9u);
  EXPECT_EQ(r.output, verify(c, RunOptions{true}).output);
}

TEST(Pathology, DefaultScheduleReport) {
  const ExperimentConfig c = ExperimentConfig::parse(R"({"gate": "NOT"})");
  const RunResult r = pathology(c, RunOptions{true});
  const json j = json::parse(r.output);
  EXPECT_EQ(j["kind"], "pathology");
  EXPECT_TRUE(j["report"]["certificate_fires"].get<bool>());
  EXPECT_TRUE(j["report"]["superposition_on_hidden_qubit"].get<bool>());
}
