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
#include <set>

#include <gtest/gtest.h>

#include "sbcert/error.hpp"
#include "sbcert/evolution.hpp"
#include "sbcert/measurement.hpp"

using namespace sbcert;

namespace {

// Wilson score interval written out from its textbook form.
std::pair<double, double> wilson(double k, double n, double z) {
  const double p = k / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

ErrorCode csv_error(const std::string& text) {
  try {
    CountTable::from_csv(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(Layout, LabelsAndPreparedIndices) {
  EXPECT_EQ((SystemLayout{1, 2}.outcome_labels()), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ((SystemLayout{1, 4}.outcome_labels()), (std::vector<std::string>{"0", "1", "leaked"}));
  const SystemLayout two{2, 3};
  EXPECT_EQ(two.dim(), 9u);
  EXPECT_EQ(two.outcome_label(1 * 3 + 2), "1L");
  EXPECT_EQ(two.outcome_label(2 * 3 + 0), "L0");
  EXPECT_EQ(two.prepared_index("10"), 3u);
  EXPECT_EQ(two.outcome_labels().size(), 9u);
  EXPECT_THROW(two.prepared_index("2"), Error);
}

TEST(Layout, OutcomeDistributionAggregatesLeakage) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << 0.5, 0.2, 0.2, 0.1;
  const OutcomeDistribution d = outcome_distribution(DensityMatrix(m), SystemLayout{1, 4});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[2].first, "leaked");
  EXPECT_NEAR(d[2].second, 0.3, 1e-15);
}

TEST(TimeTags, RoundTrip) {
  EXPECT_EQ(to_string(TimeTag::kHalf), "t_half");
  EXPECT_EQ(parse_time_tag("t"), TimeTag::kGate);
  EXPECT_THROW(parse_time_tag("T"), Error);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.insert(derive_stream_seed(42, s));
  EXPECT_EQ(seeds.size(), 100u);
  Rng a(7, 3), b(7, 3);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  // Moments of the uniform and normal generators.
  Rng c(1);
  double sum = 0.0, sum_n = 0.0, sum_n2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    sum += c.uniform();
    const double g = c.normal();
    sum_n += g;
    sum_n2 += g * g;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum_n / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sum_n2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Sampling, MultinomialCounts) {
  const OutcomeDistribution p{{"0", 0.7}, {"1", 0.0}, {"leaked", 0.3}};
  const auto a = sample_counts(p, 100000, 9, 0);
  const auto b = sample_counts(p, 100000, 9, 0);
  const auto c = sample_counts(p, 100000, 9, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a[0] + a[1] + a[2], 100000u);
  EXPECT_EQ(a[1], 0u);
  const double sigma = std::sqrt(100000 * 0.7 * 0.3);
  EXPECT_NEAR(static_cast<double>(a[0]), 70000.0, 5.0 * sigma);
  EXPECT_EQ(sample_counts({{"0", 0.0}, {"1", 1.0}}, 50, 1, 0), (std::vector<std::uint64_t>{0, 50}));
}

TEST(Sampling, SettingRowsFromChannel) {
  const auto rows = sample_setting(ideal_not_channel(3.14159265358979), "0", SystemLayout{1, 2}, TimeTag::kGate, 1000, 4, 0);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].outcome, "1");
  EXPECT_EQ(rows[1].count, 1000u);
  EXPECT_EQ(rows[0].seed, 4u);
}

TEST(Wilson, ReferenceValues) {
  const ProbabilityEstimate e = estimate(50, 100, 0.95);
  EXPECT_NEAR(e.ci_low, 0.40383, 1e-5);
  EXPECT_NEAR(e.ci_high, 0.59617, 1e-5);
  EXPECT_EQ(e.point, 0.5);
  EXPECT_EQ(estimate(0, 20, 0.95).ci_low, 0.0);
  EXPECT_EQ(estimate(20, 20, 0.95).ci_high, 1.0);
  const double z = 1.959963984540054;
  EXPECT_NEAR(normal_quantile_two_sided(0.95), z, 1e-12);
  for (std::uint64_t k : {0u, 1u, 7u, 333u, 999u, 1000u}) {
    const auto [lo, hi] = wilson(static_cast<double>(k), 1000.0, z);
    const ProbabilityEstimate w = estimate(k, 1000, 0.95);
    EXPECT_NEAR(w.ci_low, lo, 1e-12);
    EXPECT_NEAR(w.ci_high, hi, 1e-12);
  }
  EXPECT_THROW(estimate(3, 2, 0.95), Error);
  EXPECT_THROW(estimate(0, 0, 0.95), Error);
  EXPECT_THROW(normal_quantile_two_sided(1.0), Error);
}

TEST(Wilson, BonferroniLevel) {
  EXPECT_NEAR(bonferroni_level(0.95, 10), 0.995, 1e-15);
  EXPECT_NEAR(bonferroni_level(0.95, 1), 0.95, 1e-15);
  EXPECT_NEAR(bonferroni_level(0.95, 0), 0.95, 1e-15);
  EXPECT_THROW(bonferroni_level(1.5, 3), Error);
}

TEST(Wilson, CoverageAtNominalLevel) {
  // Empirical coverage of the 95% interval for p = 0.3, n = 500.
  const double p = 0.3;
  int covered = 0;
  const int trials = 4000;
  for (int k = 0; k < trials; ++k) {
    const auto counts = sample_counts({{"a", p}, {"b", 1.0 - p}}, 500, 77, static_cast<std::uint64_t>(k));
    const ProbabilityEstimate e = estimate(counts[0], 500, 0.95);
    if (e.ci_low <= p && p <= e.ci_high) ++covered;
  }
  EXPECT_GT(static_cast<double>(covered) / trials, 0.93);
}

TEST(CountTable, CsvRoundTripAndQueries) {
  CountTable t;
  t.add({"0", TimeTag::kGate, "0", 3, 10, 5});
  t.add({"0", TimeTag::kGate, "1", 7, 10, 5});
  t.add({"1", TimeTag::kHalf, "leaked", 10, 10, 5});
  t.validate();
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), CountTable::kCsvHeader);
  const CountTable back = CountTable::from_csv(csv);
  EXPECT_EQ(back.to_csv(), csv);
  EXPECT_EQ(back.count("0", TimeTag::kGate, "1"), 7u);
  EXPECT_EQ(back.count("0", TimeTag::kGate, "leaked"), 0u);
  EXPECT_EQ(back.shots("1", TimeTag::kHalf), 10u);
  EXPECT_FALSE(back.has_setting("1", TimeTag::kGate));
  EXPECT_THROW(back.shots("1", TimeTag::kGate), Error);
}

TEST(CountTable, RejectsInconsistentCsv) {
  const std::string h = "prepared,time_tag,outcome,count,shots,seed\n";
  EXPECT_EQ(csv_error("prepared,time,outcome,count,shots,seed\n"), ErrorCode::kCsv);
  EXPECT_EQ(csv_error(h + "0,t,0,3,10\n"), ErrorCode::kCsv);
  EXPECT_EQ(csv_error(h + "0,t,0,-3,10,1\n"), ErrorCode::kCsv);
  EXPECT_EQ(csv_error(h + "0,t,0,3,10,1\n0,t,1,3,10,1\n"), ErrorCode::kCsv);   // sums to 6 of 10
  EXPECT_EQ(csv_error(h + "0,t,0,3,10,1\n0,t,1,7,11,1\n"), ErrorCode::kCsv);   // shots disagree
  EXPECT_EQ(csv_error(h + "0,t,0,3,10,1\n0,t,1,7,10,2\n"), ErrorCode::kCsv);   // seeds disagree
  EXPECT_EQ(csv_error(h + "0,later,0,10,10,1\n"), ErrorCode::kCsv);
  EXPECT_EQ(csv_error(h + "0,t,0,5,10,1\n0,t,0,5,10,1\n"), ErrorCode::kCsv);   // duplicate row
}
