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

#include "sbcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbcert/error.hpp"

namespace sbcert {

namespace {

// Deficits 1 - p0 - p1 below -kDeficitSlack mean the data are inconsistent.
constexpr double kDeficitSlack = 1e-9;

constexpr double kRoundOffDeficit = 16.0 * std::numeric_limits<double>::epsilon();

struct Interval {
  double lo;
  double hi;
};

Interval bounds(const ProbabilityEstimate& e, StatisticalPolicy policy) {
  if (policy == StatisticalPolicy::kPoint) return {e.point, e.point};
  return {e.ci_low, e.ci_high};
}

// Lower / upper limits of a / (a + b) over the box.
double ratio_lo(Interval a, Interval b) {
  const double d = a.lo + b.hi;
  return d > 0.0 ? a.lo / d : 0.0;
}
double ratio_hi(Interval a, Interval b) {
  const double d = a.hi + b.lo;
  return d > 0.0 ? a.hi / d : 1.0;
}

double deficit(const ProbabilityEstimate& a, const ProbabilityEstimate& b, const ProbabilityEstimate& leak,
               StatisticalPolicy policy) {
  double d = 1.0 - a.point - b.point;
  if (d < -kDeficitSlack) {
    throw Error(ErrorCode::kInvalidArgument, "outcome probabilities sum above 1: inconsistent data");
  }
  // A few ulps of 1 - a - b are summation round-off, whose square root would
  // otherwise show up at the 1e-8 level.
  if (d <= kRoundOffDeficit) d = 0.0;
  if (policy == StatisticalPolicy::kConservativeCi) d = std::max(d, leak.ci_high);
  return d;
}

void require_weight(const ProbabilityEstimate& a, const ProbabilityEstimate& b, const char* what) {
  if (a.point + b.point <= 0.0) {
    throw Error(ErrorCode::kLeftSubspace, std::string("zero subspace weight in ") + what);
  }
}

StatisticalCorrection make_correction(const NotStatistics& stats, StatisticalPolicy policy, std::size_t m) {
  StatisticalCorrection c;
  c.policy = policy;
  c.estimates_used = m;
  if (policy == StatisticalPolicy::kConservativeCi && !stats.zero_width()) {
    c.per_estimate_level = stats.p[0][0].confidence_level;
    c.joint_level = std::max(0.0, 1.0 - static_cast<double>(m) * (1.0 - c.per_estimate_level));
  }
  return c;
}

double lookup(const OutcomeDistribution& dist, const std::string& label) {
  for (const auto& [l, p] : dist) {
    if (l == label) return p;
  }
  return 0.0;
}

SwapSetting exact_setting(const OutcomeDistribution& dist) {
  SwapSetting s;
  const double p00 = lookup(dist, "00");
  const double p01 = lookup(dist, "01");
  const double p10 = lookup(dist, "10");
  const double p11 = lookup(dist, "11");
  s.p00 = ProbabilityEstimate::exact(p00);
  s.p01 = ProbabilityEstimate::exact(p01);
  s.p10 = ProbabilityEstimate::exact(p10);
  s.p11 = ProbabilityEstimate::exact(p11);
  s.leaked = ProbabilityEstimate::exact(1.0 - p00 - p01 - p10 - p11);
  s.off_effective = ProbabilityEstimate::exact(1.0 - p01 - p10);
  s.diagonal = ProbabilityEstimate::exact(p00 + p11);
  return s;
}

SwapSetting counted_setting(const CountTable& table, const std::string& prepared, TimeTag tag, double level) {
  const std::uint64_t shots = table.shots(prepared, tag);
  const std::uint64_t c00 = table.count(prepared, tag, "00");
  const std::uint64_t c01 = table.count(prepared, tag, "01");
  const std::uint64_t c10 = table.count(prepared, tag, "10");
  const std::uint64_t c11 = table.count(prepared, tag, "11");
  SwapSetting s;
  s.p00 = estimate(c00, shots, level);
  s.p01 = estimate(c01, shots, level);
  s.p10 = estimate(c10, shots, level);
  s.p11 = estimate(c11, shots, level);
  s.leaked = estimate(shots - c00 - c01 - c10 - c11, shots, level);
  s.off_effective = estimate(shots - c01 - c10, shots, level);
  s.diagonal = estimate(c00 + c11, shots, level);
  return s;
}

}  // namespace

std::string to_string(StatisticalPolicy policy) {
  return policy == StatisticalPolicy::kPoint ? "point" : "conservative";
}

std::string to_string(CertificateMode mode) { return mode == CertificateMode::kExact ? "exact" : "approximate"; }

std::string to_string(CapFormula formula) {
  return formula == CapFormula::kVerticalSeparation ? "vertical_separation" : "same_prepared_sum";
}

NotStatistics NotStatistics::exact(const std::array<OutcomeDistribution, 2>& gate,
                                   const std::optional<std::array<OutcomeDistribution, 2>>& half,
                                   const std::array<std::string, 2>& outcome_labels) {
  NotStatistics s;
  auto fill = [&](const std::array<OutcomeDistribution, 2>& dists, EstimateGrid& grid,
                  std::array<ProbabilityEstimate, 2>& leak) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double a = lookup(dists[j], outcome_labels[0]);
      const double b = lookup(dists[j], outcome_labels[1]);
      grid[0][j] = ProbabilityEstimate::exact(a);
      grid[1][j] = ProbabilityEstimate::exact(b);
      leak[j] = ProbabilityEstimate::exact(1.0 - a - b);
    }
  };
  fill(gate, s.p, s.p_leak);
  if (half) {
    s.r.emplace();
    s.r_leak.emplace();
    fill(*half, *s.r, *s.r_leak);
  }
  return s;
}

NotStatistics NotStatistics::from_counts(const CountTable& table, const std::array<std::string, 2>& prepared,
                                         const std::array<std::string, 2>& outcomes, double per_estimate_level,
                                         bool with_half) {
  NotStatistics s;
  auto fill = [&](TimeTag tag, EstimateGrid& grid, std::array<ProbabilityEstimate, 2>& leak) {
    for (std::size_t j = 0; j < 2; ++j) {
      const std::uint64_t shots = table.shots(prepared[j], tag);
      const std::uint64_t a = table.count(prepared[j], tag, outcomes[0]);
      const std::uint64_t b = table.count(prepared[j], tag, outcomes[1]);
      grid[0][j] = estimate(a, shots, per_estimate_level);
      grid[1][j] = estimate(b, shots, per_estimate_level);
      leak[j] = estimate(shots - a - b, shots, per_estimate_level);
    }
  };
  fill(TimeTag::kGate, s.p, s.p_leak);
  if (with_half) {
    s.r.emplace();
    s.r_leak.emplace();
    fill(TimeTag::kHalf, *s.r, *s.r_leak);
  }
  return s;
}

bool NotStatistics::zero_width() const {
  auto grid_zero = [](const EstimateGrid& g) {
    for (const auto& row : g)
      for (const auto& e : row)
        if (e.width() > 0.0) return false;
    return true;
  };
  bool zero = grid_zero(p) && p_leak[0].width() == 0.0 && p_leak[1].width() == 0.0;
  if (r) zero = zero && grid_zero(*r) && (*r_leak)[0].width() == 0.0 && (*r_leak)[1].width() == 0.0;
  return zero;
}

std::size_t estimates_used(CertificateMode mode) { return mode == CertificateMode::kExact ? 2 : 12; }
std::size_t estimates_used_swap() { return 14; }

DerivedRatios compute_derived(const NotStatistics& stats, const CertifyOptions& options) {
  if (!stats.r || !stats.r_leak) {
    throw Error(ErrorCode::kPrecondition, "half-time statistics are required for the approximate-qubit bound");
  }
  const auto& p = stats.p;
  const auto& r = *stats.r;
  const auto policy = options.policy;
  for (std::size_t j = 0; j < 2; ++j) {
    require_weight(p[0][j], p[1][j], "gate-time statistics");
    require_weight(r[0][j], r[1][j], "half-time statistics");
  }

  DerivedRatios d;
  d.q01 = ratio_lo(bounds(p[0][1], policy), bounds(p[1][1], policy));
  d.q10 = ratio_lo(bounds(p[1][0], policy), bounds(p[0][0], policy));

  std::array<Interval, 2> ds0;  // ds_0^i over the box
  std::array<Interval, 2> ds1;  // ds_1^i over the box
  for (std::size_t i = 0; i < 2; ++i) {
    const Interval r0 = bounds(r[0][i], policy);
    const Interval r1 = bounds(r[1][i], policy);
    const double sum = r[0][i].point + r[1][i].point;
    d.s[0][i] = r[0][i].point / sum;
    d.s[1][i] = r[1][i].point / sum;
    d.ds[0][i] = d.s[0][i] - 0.5;
    d.ds[1][i] = d.s[1][i] - 0.5;
    ds0[i] = {ratio_lo(r0, r1) - 0.5, ratio_hi(r0, r1) - 0.5};
    ds1[i] = {ratio_lo(r1, r0) - 0.5, ratio_hi(r1, r0) - 0.5};
    d.ds0_abs_max[i] = std::max(std::abs(ds0[i].lo), std::abs(ds0[i].hi));
    d.p_deficit[i] = deficit(p[0][i], p[1][i], stats.p_leak[i], policy);
    d.r_deficit[i] = deficit(r[0][i], r[1][i], (*stats.r_leak)[i], policy);
  }

  d.one_minus_eps_prime = (d.q01 + d.q10 - 1.0) - std::sqrt(d.p_deficit[0]) - std::sqrt(d.p_deficit[1]) -
                          std::sqrt(d.r_deficit[0]) - std::sqrt(d.r_deficit[1]);
  // Exact cancellation leaves a few ulps of either sign.
  if (std::abs(d.one_minus_eps_prime) <= kRoundOffDeficit) d.one_minus_eps_prime = 0.0;
  d.eps_prime = 1.0 - d.one_minus_eps_prime;

  Interval g{};
  if (options.cap_formula == CapFormula::kVerticalSeparation) {
    // ds_0^1 + ds_1^0 = ds_0^1 - ds_0^0
    g = {ds0[1].lo - ds0[0].hi, ds0[1].hi - ds0[0].lo};
    if (policy == StatisticalPolicy::kPoint) g.lo = g.hi = d.ds[0][1] + d.ds[1][0];
  } else {
    g = {ds0[1].lo + ds1[1].lo, ds0[1].hi + ds1[1].hi};
    if (policy == StatisticalPolicy::kPoint) g.lo = g.hi = d.ds[0][1] + d.ds[1][1];
  }
  d.cap_offset = std::max(std::abs(g.lo), std::abs(g.hi));

  if (d.one_minus_eps_prime <= 0.0) {
    d.delta_reason = "no certified separation: 1 - eps' <= 0";
  } else {
    const double radicand = d.one_minus_eps_prime * d.one_minus_eps_prime - d.cap_offset * d.cap_offset;
    if (radicand < 0.0) {
      d.delta_reason = "delta undefined: (1 - eps')^2 < cap offset^2";
    } else {
      d.delta = 1.0 - std::sqrt(radicand);
    }
  }
  return d;
}

SuperpositionCertificate certify_exact_not(const NotStatistics& stats, const CertifyOptions& options) {
  for (std::size_t j = 0; j < 2; ++j) {
    // The leaked fraction must be statistically consistent with zero.
    const double leak_floor =
        options.policy == StatisticalPolicy::kPoint ? stats.p_leak[j].point : stats.p_leak[j].ci_low;
    if (leak_floor > kDeficitSlack) {
      throw Error(ErrorCode::kPrecondition,
                  "exact-qubit precondition violated (p_0 + p_1 != 1); use approximate mode");
    }
  }
  SuperpositionCertificate c;
  c.mode = CertificateMode::kExact;
  c.cap_formula = options.cap_formula;
  c.correction = make_correction(stats, options.policy, estimates_used(CertificateMode::kExact));
  const double p01 = bounds(stats.p[0][1], options.policy).lo;
  const double p10 = bounds(stats.p[1][0], options.policy).lo;
  c.distance_lower_bound = std::clamp(p01 + p10 - 1.0, 0.0, 1.0);
  c.fidelity_lower_bound = std::clamp(0.5 * (p01 + p10), 0.0, 1.0);
  c.distance_upper_bound = 1.0;
  c.valid = true;
  c.vacuous = p01 + p10 <= 1.0 + kRoundOffDeficit;
  if (c.vacuous) c.reason = "vacuous bound: p_0^1 + p_1^0 <= 1";
  return c;
}

DistanceLowerBound approx_distance_lower_bound(const NotStatistics& stats, const CertifyOptions& options) {
  const auto& p = stats.p;
  const auto policy = options.policy;
  for (std::size_t j = 0; j < 2; ++j) require_weight(p[0][j], p[1][j], "gate-time statistics");
  const double q01 = ratio_lo(bounds(p[0][1], policy), bounds(p[1][1], policy));
  const double q10 = ratio_lo(bounds(p[1][0], policy), bounds(p[0][0], policy));
  DistanceLowerBound b;
  b.raw = (q01 + q10 - 1.0) - std::sqrt(deficit(p[0][0], p[1][0], stats.p_leak[0], policy)) -
          std::sqrt(deficit(p[0][1], p[1][1], stats.p_leak[1], policy));
  b.value = std::max(b.raw, 0.0);
  return b;
}

SuperpositionCertificate certify_approx_not(const NotStatistics& stats, const CertifyOptions& options) {
  SuperpositionCertificate c;
  c.mode = CertificateMode::kApproximate;
  c.cap_formula = options.cap_formula;
  c.correction = make_correction(stats, options.policy, estimates_used(CertificateMode::kApproximate));
  c.derived = compute_derived(stats, options);
  c.distance_lower_bound = approx_distance_lower_bound(stats, options).value;
  const DerivedRatios& d = *c.derived;

  if (d.one_minus_eps_prime <= 0.0) {
    c.valid = true;
    c.vacuous = true;
    c.fidelity_lower_bound = 0.0;
    c.reason = "vacuous bound: " + d.delta_reason;
    return c;
  }
  if (!d.delta) {
    c.valid = false;
    c.vacuous = true;
    c.reason = d.delta_reason;
    return c;
  }
  const double delta = *d.delta;
  for (std::size_t j = 0; j < 2; ++j) {
    c.per_state_distance[j] =
        std::sqrt(d.r_deficit[j]) + std::sqrt(delta * delta / 4.0 + d.ds0_abs_max[j] * d.ds0_abs_max[j]);
  }
  c.distance_upper_bound = std::min(1.0, std::max(c.per_state_distance[0], c.per_state_distance[1]));
  c.fidelity_lower_bound = std::clamp(1.0 - c.distance_upper_bound, 0.0, 1.0);
  c.valid = true;
  c.vacuous = c.fidelity_lower_bound <= 0.5;
  if (c.vacuous) c.reason = "vacuous bound: fidelity lower bound <= 1/2";
  return c;
}

SwapStatistics SwapStatistics::exact(const std::array<OutcomeDistribution, 2>& gate,
                                     const std::array<OutcomeDistribution, 2>& half) {
  SwapStatistics s;
  for (std::size_t j = 0; j < 2; ++j) {
    s.gate[j] = exact_setting(gate[j]);
    s.half[j] = exact_setting(half[j]);
  }
  return s;
}

SwapStatistics SwapStatistics::from_counts(const CountTable& table, double per_estimate_level) {
  SwapStatistics s;
  const std::array<std::string, 2> prepared{"01", "10"};
  for (std::size_t j = 0; j < 2; ++j) {
    s.gate[j] = counted_setting(table, prepared[j], TimeTag::kGate, per_estimate_level);
    s.half[j] = counted_setting(table, prepared[j], TimeTag::kHalf, per_estimate_level);
  }
  return s;
}

NotStatistics SwapStatistics::effective() const {
  NotStatistics n;
  n.r.emplace();
  n.r_leak.emplace();
  for (std::size_t j = 0; j < 2; ++j) {
    n.p[0][j] = gate[j].p01;
    n.p[1][j] = gate[j].p10;
    n.p_leak[j] = gate[j].off_effective;
    (*n.r)[0][j] = half[j].p01;
    (*n.r)[1][j] = half[j].p10;
    (*n.r_leak)[j] = half[j].off_effective;
  }
  return n;
}

double entanglement_fidelity_bound(double subspace_weight_floor, double effective_fidelity_bound) {
  return std::clamp(subspace_weight_floor * effective_fidelity_bound, 0.0, 1.0);
}

EntanglementCertificate certify_swap_entanglement(const SwapStatistics& stats, const CertifyOptions& options) {
  EntanglementCertificate c;
  const NotStatistics eff = stats.effective();
  c.correction = make_correction(eff, options.policy, estimates_used_swap());
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& h = stats.half[j];
    if (h.p00.point + h.p01.point + h.p10.point + h.p11.point <= 0.0) {
      throw Error(ErrorCode::kLeftSubspace, "zero two-qubit weight at the half time");
    }
    const Interval in_effective = options.policy == StatisticalPolicy::kPoint
                                      ? Interval{h.p01.point + h.p10.point, h.p01.point + h.p10.point}
                                      : Interval{1.0 - h.off_effective.ci_high, 1.0 - h.off_effective.ci_low};
    c.subspace_weight_ratio[j] = ratio_lo(in_effective, bounds(h.diagonal, options.policy));
  }
  c.subspace_weight_floor = std::min(c.subspace_weight_ratio[0], c.subspace_weight_ratio[1]);

  c.effective_qubit_certificate = certify_approx_not(eff, options);
  const auto& e = c.effective_qubit_certificate;
  if (!e.valid) {
    c.valid = false;
    c.reason = "effective-qubit certificate invalid: " + e.reason;
    return c;
  }
  c.valid = true;
  c.fidelity_lower_bound = entanglement_fidelity_bound(c.subspace_weight_floor, e.fidelity_lower_bound);
  c.entangled = c.fidelity_lower_bound > 0.5;
  if (!c.entangled) c.reason = "vacuous bound: entanglement fidelity bound <= 1/2";
  return c;
}

}  // namespace sbcert
