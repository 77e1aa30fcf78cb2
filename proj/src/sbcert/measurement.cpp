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

#include "sbcert/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "sbcert/error.hpp"

namespace sbcert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

char level_char(std::size_t level) {
  if (level == 0) return '0';
  if (level == 1) return '1';
  return 'L';
}

std::uint64_t parse_u64(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kCsv, "line " + std::to_string(line) + ": expected an unsigned integer, got '" +
                                     std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = line.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

}  // namespace

std::string_view to_string(TimeTag tag) { return tag == TimeTag::kGate ? "t" : "t_half"; }

TimeTag parse_time_tag(std::string_view text) {
  if (text == "t") return TimeTag::kGate;
  if (text == "t_half") return TimeTag::kHalf;
  throw Error(ErrorCode::kCsv, "unknown time tag '" + std::string(text) + "'");
}

std::size_t SystemLayout::dim() const { return subsystems == 1 ? levels : levels * levels; }

std::vector<std::string> SystemLayout::outcome_labels() const {
  if (subsystems == 1) {
    if (levels == 2) return {"0", "1"};
    return {"0", "1", "leaked"};
  }
  std::vector<std::string> labels;
  const std::string symbols = levels == 2 ? "01" : "01L";
  for (char a : symbols)
    for (char b : symbols) labels.push_back(std::string{a, b});
  return labels;
}

std::string SystemLayout::outcome_label(std::size_t basis_index) const {
  if (basis_index >= dim()) throw Error(ErrorCode::kInvalidArgument, "basis index out of range");
  if (subsystems == 1) return basis_index < 2 ? std::to_string(basis_index) : "leaked";
  return std::string{level_char(basis_index / levels), level_char(basis_index % levels)};
}

std::size_t SystemLayout::prepared_index(std::string_view label) const {
  if (label.size() != subsystems) {
    throw Error(ErrorCode::kInvalidArgument, "prepared label '" + std::string(label) + "' has wrong length");
  }
  std::size_t index = 0;
  for (char c : label) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kInvalidArgument, "prepared states must be computational qubit labels");
    }
    index = index * levels + static_cast<std::size_t>(c - '0');
  }
  return index;
}

void MeasurementPlan::validate() const {
  if (!(half_time > 0.0) || !(half_time < gate_time)) {
    throw Error(ErrorCode::kInvalidArgument, "measurement plan needs 0 < t_half < t");
  }
  if (shots_per_setting < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be at least 1");
  if (prepared_states.empty()) throw Error(ErrorCode::kInvalidArgument, "no prepared states");
}

OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const SystemLayout& layout) {
  if (rho.dim() != layout.dim()) throw Error(ErrorCode::kDimensionMismatch, "state does not match layout");
  const auto labels = layout.outcome_labels();
  OutcomeDistribution dist;
  dist.reserve(labels.size());
  for (const auto& l : labels) dist.emplace_back(l, 0.0);
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const std::string label = layout.outcome_label(i);
    auto it = std::find_if(dist.begin(), dist.end(), [&](const auto& e) { return e.first == label; });
    it->second += std::max(rho.population(i), 0.0);
  }
  return dist;
}

OutcomeDistribution exact_probabilities(const QuantumChannel& channel, const PureState& prepared,
                                        const SystemLayout& layout) {
  if (prepared.dim() != channel.dim_in()) {
    throw Error(ErrorCode::kDimensionMismatch, "prepared state does not match channel input");
  }
  return outcome_distribution(channel.apply(DensityMatrix(prepared)), layout);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::uint64_t> sample_counts(const OutcomeDistribution& probabilities, std::uint64_t shots,
                                         std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [label, p] : probabilities) {
    acc += std::max(p, 0.0);
    cdf.push_back(acc);
  }
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  if (cdf.empty()) return counts;
  Rng rng(seed, stream);
  const double total = acc;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    if (k >= counts.size()) {
      // u rounded up to the total: take the last outcome with support.
      k = counts.size() - 1;
      while (k > 0 && probabilities[k].second <= 0.0) --k;
    }
    ++counts[k];
  }
  return counts;
}

void CountTable::add(CountRow row) { rows_.push_back(std::move(row)); }

std::uint64_t CountTable::count(std::string_view prepared, TimeTag tag, std::string_view outcome) const {
  std::uint64_t total = 0;
  for (const auto& r : rows_) {
    if (r.prepared == prepared && r.time_tag == tag && r.outcome == outcome) total += r.count;
  }
  return total;
}

bool CountTable::has_setting(std::string_view prepared, TimeTag tag) const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [&](const CountRow& r) { return r.prepared == prepared && r.time_tag == tag; });
}

std::uint64_t CountTable::shots(std::string_view prepared, TimeTag tag) const {
  for (const auto& r : rows_) {
    if (r.prepared == prepared && r.time_tag == tag) return r.shots;
  }
  throw Error(ErrorCode::kCsv, "missing setting prepared=" + std::string(prepared) + " time_tag=" +
                                   std::string(to_string(tag)));
}

void CountTable::validate() const {
  std::map<std::pair<std::string, TimeTag>, std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> settings;
  std::map<std::tuple<std::string, TimeTag, std::string>, int> seen;
  for (const auto& r : rows_) {
    if (++seen[{r.prepared, r.time_tag, r.outcome}] > 1) {
      throw Error(ErrorCode::kCsv, "duplicate row for prepared=" + r.prepared + " time_tag=" +
                                       std::string(to_string(r.time_tag)) + " outcome=" + r.outcome);
    }
    auto [it, inserted] = settings.try_emplace({r.prepared, r.time_tag}, 0, r.shots, r.seed);
    auto& [sum, shots, seed] = it->second;
    if (!inserted && (shots != r.shots || seed != r.seed)) {
      throw Error(ErrorCode::kCsv, "inconsistent shots or seed within setting prepared=" + r.prepared);
    }
    sum += r.count;
  }
  for (const auto& [key, value] : settings) {
    const auto& [sum, shots, seed] = value;
    if (shots == 0) throw Error(ErrorCode::kCsv, "setting with zero shots: prepared=" + key.first);
    if (sum != shots) {
      throw Error(ErrorCode::kCsv, "counts for prepared=" + key.first + " time_tag=" +
                                       std::string(to_string(key.second)) + " sum to " + std::to_string(sum) +
                                       ", expected " + std::to_string(shots));
    }
  }
}

std::string CountTable::to_csv() const {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows_) {
    os << r.prepared << ',' << to_string(r.time_tag) << ',' << r.outcome << ',' << r.count << ',' << r.shots
       << ',' << r.seed << '\n';
  }
  return os.str();
}

CountTable CountTable::from_csv(std::string_view text) {
  CountTable table;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::kCsv, "expected header '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kCsv, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    CountRow row;
    row.prepared = std::string(fields[0]);
    row.time_tag = parse_time_tag(fields[1]);
    row.outcome = std::string(fields[2]);
    row.count = parse_u64(fields[3], line_no);
    row.shots = parse_u64(fields[4], line_no);
    row.seed = parse_u64(fields[5], line_no);
    table.add(std::move(row));
  }
  if (!header_seen) throw Error(ErrorCode::kCsv, "empty CSV");
  table.validate();
  return table;
}

std::vector<CountRow> sample_setting(const QuantumChannel& channel, std::string_view prepared,
                                     const SystemLayout& layout, TimeTag tag, std::uint64_t shots,
                                     std::uint64_t seed, std::uint64_t stream) {
  const PureState psi = PureState::basis(layout.dim(), layout.prepared_index(prepared));
  const OutcomeDistribution dist = exact_probabilities(channel, psi, layout);
  const auto counts = sample_counts(dist, shots, seed, stream);
  std::vector<CountRow> rows;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    rows.push_back(CountRow{std::string(prepared), tag, dist[k].first, counts[k], shots, seed});
  }
  return rows;
}

CountTable sample_experiment(const std::vector<std::string>& prepared, const std::vector<DensityMatrix>& gate_states,
                             const std::vector<DensityMatrix>& half_states, const SystemLayout& layout,
                             std::uint64_t shots, std::uint64_t seed) {
  if (gate_states.size() != prepared.size() || half_states.size() != prepared.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one evolved state per prepared state and time");
  }
  CountTable table;
  std::uint64_t stream = 0;
  for (TimeTag tag : {TimeTag::kGate, TimeTag::kHalf}) {
    const auto& states = tag == TimeTag::kGate ? gate_states : half_states;
    for (std::size_t j = 0; j < prepared.size(); ++j) {
      const OutcomeDistribution dist = outcome_distribution(states[j], layout);
      const auto counts = sample_counts(dist, shots, seed, stream++);
      for (std::size_t k = 0; k < dist.size(); ++k) {
        table.add(CountRow{prepared[j], tag, dist[k].first, counts[k], shots, seed});
      }
    }
  }
  return table;
}

ProbabilityEstimate ProbabilityEstimate::exact(double p) {
  const double q = std::clamp(p, 0.0, 1.0);
  return ProbabilityEstimate{q, q, q, 1.0, 0};
}

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence level must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

ProbabilityEstimate estimate(std::uint64_t count, std::uint64_t shots, double confidence_level) {
  if (shots == 0) throw Error(ErrorCode::kInvalidArgument, "cannot estimate a probability from zero shots");
  if (count > shots) throw Error(ErrorCode::kInvalidArgument, "count exceeds shots");
  const double z = normal_quantile_two_sided(confidence_level);
  const double n = static_cast<double>(shots);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ProbabilityEstimate e;
  e.point = p;
  e.ci_low = count == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  e.ci_high = count == shots ? 1.0 : std::clamp(center + half, p, 1.0);
  e.confidence_level = confidence_level;
  e.shots = shots;
  return e;
}

double bonferroni_level(double joint_level, std::size_t m) {
  if (!(joint_level > 0.0 && joint_level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence level must lie in (0, 1)");
  }
  if (m == 0) return joint_level;
  return 1.0 - (1.0 - joint_level) / static_cast<double>(m);
}

}  // namespace sbcert
