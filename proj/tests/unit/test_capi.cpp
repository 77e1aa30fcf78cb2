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

#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "sbcert/sbcert.h"

namespace {

std::string read_config(const std::string& name) {
  std::ifstream in(std::string(SBCERT_CONFIG_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Experiment {
  explicit Experiment(const std::string& json) { status = sbcert_experiment_from_json(json.c_str(), &handle); }
  ~Experiment() { sbcert_experiment_free(handle); }
  sbcert_experiment* handle = nullptr;
  sbcert_status status;
};

std::string take(char* text) {
  std::string out = text ? text : "";
  sbcert_string_free(text);
  return out;
}

}  // namespace

TEST(CApi, Version) { EXPECT_STRNE(sbcert_version(), ""); }

TEST(CApi, ConfigErrorsReportThePath) {
  Experiment e(R"({"gate": "NOT", "noise": {"dephasng": 0.1}})");
  EXPECT_EQ(e.status, SBCERT_ERR_CONFIG);
  EXPECT_EQ(e.handle, nullptr);
  EXPECT_STREQ(sbcert_last_error(), "noise.dephasng: unknown key");
}

TEST(CApi, NullArguments) {
  sbcert_experiment* handle = nullptr;
  EXPECT_EQ(sbcert_experiment_from_json(nullptr, &handle), SBCERT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sbcert_experiment_from_json("{}", nullptr), SBCERT_ERR_INVALID_ARGUMENT);
  char* out = nullptr;
  int verdict = -1;
  EXPECT_EQ(sbcert_certify(nullptr, nullptr, &out, &verdict), SBCERT_ERR_INVALID_ARGUMENT);
  Experiment e(read_config("not_noiseless.json"));
  ASSERT_EQ(e.status, SBCERT_OK);
  EXPECT_EQ(sbcert_certify(e.handle, nullptr, nullptr, &verdict), SBCERT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sbcert_experiment_set_policy(e.handle, "optimistic"), SBCERT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sbcert_experiment_set_shots(e.handle, 0), SBCERT_ERR_INVALID_ARGUMENT);
  sbcert_experiment_free(nullptr);
  sbcert_string_free(nullptr);
}

TEST(CApi, CertifyNoiseless) {
  Experiment e(read_config("not_noiseless.json"));
  ASSERT_EQ(e.status, SBCERT_OK) << sbcert_last_error();
  ASSERT_EQ(sbcert_experiment_set_deterministic(e.handle, 1), SBCERT_OK);
  char* out = nullptr;
  int verdict = -1;
  ASSERT_EQ(sbcert_certify(e.handle, nullptr, &out, &verdict), SBCERT_OK) << sbcert_last_error();
  const std::string report = take(out);
  EXPECT_EQ(verdict, SBCERT_VERDICT_OK);
  EXPECT_NE(report.find("\"verdict\": \"certified\""), std::string::npos);
  EXPECT_EQ(report.find("generated_at"), std::string::npos);
}

TEST(CApi, CsvRoundTripAndBadCsv) {
  Experiment e(read_config("not_leaky.json"));
  ASSERT_EQ(e.status, SBCERT_OK) << sbcert_last_error();
  sbcert_experiment_set_deterministic(e.handle, 1);
  sbcert_experiment_set_shots(e.handle, 5000);
  char* csv = nullptr;
  ASSERT_EQ(sbcert_simulate_csv(e.handle, &csv), SBCERT_OK);
  const std::string table = take(csv);

  char* a = nullptr;
  char* b = nullptr;
  int va = -1, vb = -1;
  ASSERT_EQ(sbcert_certify(e.handle, table.c_str(), &a, &va), SBCERT_OK);
  ASSERT_EQ(sbcert_certify(e.handle, nullptr, &b, &vb), SBCERT_OK);
  EXPECT_EQ(take(a), take(b));
  EXPECT_EQ(va, vb);

  char* out = nullptr;
  EXPECT_EQ(sbcert_certify(e.handle, "prepared,time_tag\n", &out, &va), SBCERT_ERR_CSV);
  EXPECT_EQ(out, nullptr);
  EXPECT_STRNE(sbcert_last_error(), "");
}

TEST(CApi, SettersShowInResolvedConfig) {
  Experiment e(read_config("not_leaky.json"));
  ASSERT_EQ(e.status, SBCERT_OK);
  sbcert_experiment_set_seed(e.handle, 123);
  sbcert_experiment_set_policy(e.handle, "point");
  char* cfg = nullptr;
  ASSERT_EQ(sbcert_experiment_to_json(e.handle, &cfg), SBCERT_OK);
  const std::string text = take(cfg);
  EXPECT_NE(text.find("\"seed\": 123"), std::string::npos) << text;
  EXPECT_NE(text.find("\"policy\": \"point\""), std::string::npos) << text;
  EXPECT_STREQ(sbcert_experiment_output_path(e.handle), "");
}

TEST(CApi, VacuousVerdict) {
  Experiment e(read_config("not_heavy_depolarizing.json"));
  ASSERT_EQ(e.status, SBCERT_OK);
  char* out = nullptr;
  int verdict = -1;
  ASSERT_EQ(sbcert_certify(e.handle, nullptr, &out, &verdict), SBCERT_OK);
  const std::string report = take(out);
  EXPECT_EQ(verdict, SBCERT_VERDICT_NEGATIVE);
  EXPECT_NE(report.find("vacuous bound"), std::string::npos);
}

TEST(CApi, PathologyAndScan) {
  Experiment e(read_config("pathology.json"));
  ASSERT_EQ(e.status, SBCERT_OK) << sbcert_last_error();
  char* out = nullptr;
  int verdict = -1;
  ASSERT_EQ(sbcert_pathology(e.handle, &out, &verdict), SBCERT_OK);
  EXPECT_NE(take(out).find("\"superposition_on_hidden_qubit\": true"), std::string::npos);
  ASSERT_EQ(sbcert_scan_times(e.handle, &out, &verdict), SBCERT_OK);
  EXPECT_NE(take(out).find("\"kind\": \"time_scan\""), std::string::npos);
  EXPECT_EQ(verdict, SBCERT_VERDICT_OK);
}
