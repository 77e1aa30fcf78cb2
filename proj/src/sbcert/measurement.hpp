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

// Computational-basis measurement: exact outcome distributions, seeded
// finite-shot sampling, count tables and Wilson score estimates.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbcert/channel.hpp"
#include "sbcert/quantum.hpp"

namespace sbcert {

enum class TimeTag { kGate, kHalf };

std::string_view to_string(TimeTag tag);  // "t" / "t_half"
TimeTag parse_time_tag(std::string_view text);

/// How outcomes are labelled. One subsystem: "0", "1", "leaked". Two
/// subsystems: one character per subsystem from {0, 1, L}, e.g. "01", "0L".
struct SystemLayout {
  std::size_t subsystems = 1;
  std::size_t levels = 2;

  std::size_t dim() const;
  std::vector<std::string> outcome_labels() const;
  std::string outcome_label(std::size_t basis_index) const;
  /// Basis index of a prepared computational state such as "1" or "01".
  std::size_t prepared_index(std::string_view label) const;
};

struct MeasurementPlan {
  double gate_time = 0.0;
  double half_time = 0.0;
  std::uint64_t shots_per_setting = 1;
  std::vector<std::string> prepared_states;
  std::uint64_t seed = 0;

  void validate() const;
};

using OutcomeDistribution = std::vector<std::pair<std::string, double>>;

/// Diagonal of rho aggregated into the layout's outcome labels.
OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const SystemLayout& layout);

/// <i| E(|prepared><prepared|) |i>, aggregated per outcome label.
OutcomeDistribution exact_probabilities(const QuantumChannel& channel, const PureState& prepared,
                                        const SystemLayout& layout);

// --- random numbers -------------------------------------------------------

/// Seed for the independent stream `stream` of a run seeded with `seed`
/// (SplitMix64 finalizer over both words).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

/// mt19937_64 with a portable uniform double; std distributions are avoided
/// because their output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_stream_seed(seed, stream)) {}

  double uniform();  // [0, 1) with 53 random bits
  double normal();   // Box-Muller
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Multinomial draw of `shots` outcomes. Deterministic in (seed, stream).
std::vector<std::uint64_t> sample_counts(const OutcomeDistribution& probabilities, std::uint64_t shots,
                                         std::uint64_t seed, std::uint64_t stream);

// --- count tables ---------------------------------------------------------

struct CountRow {
  std::string prepared;
  TimeTag time_tag = TimeTag::kGate;
  std::string outcome;
  std::uint64_t count = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

class CountTable {
 public:
  static constexpr std::string_view kCsvHeader = "prepared,time_tag,outcome,count,shots,seed";

  void add(CountRow row);
  const std::vector<CountRow>& rows() const { return rows_; }

  /// Count for a (prepared, time, outcome) triple; zero if absent.
  std::uint64_t count(std::string_view prepared, TimeTag tag, std::string_view outcome) const;
  /// Shots recorded for a setting; throws if the setting is missing.
  std::uint64_t shots(std::string_view prepared, TimeTag tag) const;
  bool has_setting(std::string_view prepared, TimeTag tag) const;

  /// Per-setting counts must sum to that setting's shots and every row of a
  /// setting must agree on shots and seed.
  void validate() const;

  std::string to_csv() const;
  static CountTable from_csv(std::string_view text);

 private:
  std::vector<CountRow> rows_;
};

/// Simulated rows for one setting, with every outcome label of the layout
/// present (zero counts included) in layout order.
std::vector<CountRow> sample_setting(const QuantumChannel& channel, std::string_view prepared,
                                     const SystemLayout& layout, TimeTag tag, std::uint64_t shots,
                                     std::uint64_t seed, std::uint64_t stream);

/// Rows for every (time tag, prepared state) setting from already evolved
/// states. Streams are numbered gate settings first, then half-time
/// settings, each in prepared order.
CountTable sample_experiment(const std::vector<std::string>& prepared, const std::vector<DensityMatrix>& gate_states,
                             const std::vector<DensityMatrix>& half_states, const SystemLayout& layout,
                             std::uint64_t shots, std::uint64_t seed);

// --- estimates ------------------------------------------------------------

struct ProbabilityEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence_level = 1.0;
  std::uint64_t shots = 0;  // 0 marks an exact (infinite-shot) value

  /// Zero-width interval around a known probability.
  static ProbabilityEstimate exact(double p);
  double width() const { return ci_high - ci_low; }
};

/// Wilson score interval for count/shots at the given two-sided level.
ProbabilityEstimate estimate(std::uint64_t count, std::uint64_t shots, double confidence_level);

/// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_quantile_two_sided(double level);

/// Per-estimate level for a joint Bonferroni level over `m` estimates.
double bonferroni_level(double joint_level, std::size_t m);

}  // namespace sbcert
