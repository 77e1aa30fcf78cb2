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

// Experiment configuration and the simulate / certify / scan-times / verify /
// pathology pipelines behind the command line tool.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sbcert/certify.hpp"
#include "sbcert/evolution.hpp"
#include "sbcert/measurement.hpp"

namespace sbcert {

inline constexpr int kConfigSchemaVersion = 1;

enum class StatisticsSource { kSampled, kExact };

struct ScanSettings {
  std::size_t points = 401;
  double periods = 1.0;  // grid covers [0, periods * 2 pi / rate]
};

struct VerifySettings {
  std::size_t trials = 1000;
  std::size_t inequality_pairs = 10000;
  std::size_t cap_draws = 1000;
  std::size_t cap_grid = 1000;
};

struct ExperimentConfig {
  Scenario scenario;
  double gate_time = 0.0;  // resolved: pi / rate unless given
  double half_time = 0.0;  // resolved: gate_time / 2 unless given
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  StatisticsSource statistics = StatisticsSource::kSampled;
  CertificateMode mode = CertificateMode::kApproximate;
  CertifyOptions certify;
  double confidence_level = 0.95;
  ScanSettings scan;
  VerifySettings verify;
  std::optional<std::vector<SwapEvent>> pathology_schedule;  // empty optional: default schedule
  std::string output_path;

  /// Parses the JSON config. Unknown keys and type errors are reported with
  /// their field path, e.g. "noise.dephasing: expected a number".
  static ExperimentConfig parse(std::string_view text);
  void validate() const;
  nlohmann::json to_json() const;

  SystemLayout layout() const;
  std::array<std::string, 2> prepared() const;  // "0","1" or "01","10"
};

struct RunResult {
  std::string output;
  int status = 0;  // 0 success, 2 vacuous / invalid / failed check
};

struct RunOptions {
  bool deterministic = false;  // omit generated_at
};

CountTable simulate_counts(const ExperimentConfig& config);
RunResult simulate(const ExperimentConfig& config);
/// Certifies from `csv` when given, else from inline statistics.
RunResult certify(const ExperimentConfig& config, const std::optional<std::string>& csv, const RunOptions& options);
RunResult scan_times(const ExperimentConfig& config, const RunOptions& options);
RunResult verify(const ExperimentConfig& config, const RunOptions& options);
RunResult pathology(const ExperimentConfig& config, const RunOptions& options);

}  // namespace sbcert
