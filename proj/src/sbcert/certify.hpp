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

// Certified bounds on superposition and entanglement fidelity computed from
// computational-basis statistics only.
//
// Notation follows the measurement tables: p[i][j] is the probability of
// outcome i at the gate time t for prepared state j, r[i][j] the same at
// t_half. For the NOT gate:
//
//   q_0^1 = p_0^1 / (p_0^1 + p_1^1),   q_1^0 = p_1^0 / (p_0^0 + p_1^0)
//   s_j^i = r_j^i / (r_0^i + r_1^i),   ds_j^i = s_j^i - 1/2
//   1 - eps' = (q_0^1 + q_1^0 - 1) - sum of sqrt(1 - p-sum) and sqrt(1 - r-sum)
//   delta = 1 - sqrt((1 - eps')^2 - g^2)
//   D(sigma_i, psi_M) <= max_j { sqrt(1 - r_0^j - r_1^j) + sqrt(delta^2 / 4 + (ds_0^j)^2) }
//
// where g is half the vertical Bloch separation of the projected half-time
// states (see CapFormula).
//
// Every bound is evaluated over the confidence box of its inputs: each term
// takes the corner of the intervals that makes the certificate weakest. With
// zero-width (exact) estimates this reduces to plain substitution.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "sbcert/measurement.hpp"

namespace sbcert {

enum class StatisticalPolicy { kPoint, kConservativeCi };
enum class CertificateMode { kExact, kApproximate };

/// Which combination of ds values enters the cap height delta.
enum class CapFormula {
  /// ds_0^1 + ds_1^0, half the height difference of the two projected
  /// half-time Bloch vectors.
  kVerticalSeparation,
  /// ds_0^1 + ds_1^1. Because s_0^1 + s_1^1 = 1 this is identically zero;
  /// kept for the cap verifier.
  kSamePreparedSum,
};

std::string to_string(StatisticalPolicy policy);
std::string to_string(CertificateMode mode);
std::string to_string(CapFormula formula);

struct CertifyOptions {
  StatisticalPolicy policy = StatisticalPolicy::kConservativeCi;
  CapFormula cap_formula = CapFormula::kVerticalSeparation;
};

using EstimateGrid = std::array<std::array<ProbabilityEstimate, 2>, 2>;  // [outcome][prepared]

struct NotStatistics {
  EstimateGrid p;
  std::array<ProbabilityEstimate, 2> p_leak;  // outside {0, 1} at t, per prepared
  std::optional<EstimateGrid> r;
  std::optional<std::array<ProbabilityEstimate, 2>> r_leak;

  /// Zero-width statistics from exact outcome distributions. `half` may be
  /// empty for exact-qubit certification.
  static NotStatistics exact(const std::array<OutcomeDistribution, 2>& gate,
                             const std::optional<std::array<OutcomeDistribution, 2>>& half,
                             const std::array<std::string, 2>& outcome_labels = {"0", "1"});

  /// Wilson estimates from a count table; prepared[j] and outcome[i] name
  /// the rows that play the roles of j and i.
  static NotStatistics from_counts(const CountTable& table, const std::array<std::string, 2>& prepared,
                                   const std::array<std::string, 2>& outcomes, double per_estimate_level,
                                   bool with_half);

  bool zero_width() const;
};

struct DerivedRatios {
  double q01 = 0.0;
  double q10 = 0.0;
  std::array<std::array<double, 2>, 2> s{};   // [outcome][prepared], point values
  std::array<std::array<double, 2>, 2> ds{};  // s - 1/2
  std::array<double, 2> ds0_abs_max{};        // worst |ds_0^i| over the confidence box
  std::array<double, 2> p_deficit{};          // 1 - p_0^j - p_1^j
  std::array<double, 2> r_deficit{};          // 1 - r_0^j - r_1^j
  double one_minus_eps_prime = 0.0;
  double eps_prime = 0.0;
  double cap_offset = 0.0;  // |g|
  std::optional<double> delta;
  std::string delta_reason;  // set when delta is undefined
};

struct StatisticalCorrection {
  StatisticalPolicy policy = StatisticalPolicy::kPoint;
  std::size_t estimates_used = 0;
  double per_estimate_level = 1.0;
  double joint_level = 1.0;  // Bonferroni: 1 - m (1 - per_estimate_level)
};

struct SuperpositionCertificate {
  CertificateMode mode = CertificateMode::kApproximate;
  CapFormula cap_formula = CapFormula::kVerticalSeparation;
  /// Approximate mode: upper bound on D(sigma_i, psi_M) for some i and phase.
  double distance_upper_bound = 1.0;
  /// Certified lower bound on D(E_t(rho_1), E_t(rho_0)).
  double distance_lower_bound = 0.0;
  double fidelity_lower_bound = 0.0;
  std::array<double, 2> per_state_distance{1.0, 1.0};
  std::optional<DerivedRatios> derived;
  StatisticalCorrection correction;
  bool valid = false;
  bool vacuous = true;
  std::string reason;

  bool fires() const { return valid && !vacuous; }
};

struct DistanceLowerBound {
  double raw = 0.0;    // may be negative
  double value = 0.0;  // clamped at 0
};

struct SwapSetting {
  ProbabilityEstimate p00, p01, p10, p11;
  ProbabilityEstimate leaked;         // any subsystem outside {0, 1}
  ProbabilityEstimate off_effective;  // everything except 01 and 10
  ProbabilityEstimate diagonal;       // 00 and 11
};

/// Index 0 is prepared |0>|1>, index 1 is prepared |1>|0>.
struct SwapStatistics {
  std::array<SwapSetting, 2> gate;
  std::array<SwapSetting, 2> half;

  static SwapStatistics exact(const std::array<OutcomeDistribution, 2>& gate,
                              const std::array<OutcomeDistribution, 2>& half);
  static SwapStatistics from_counts(const CountTable& table, double per_estimate_level);

  /// The two-qubit data seen as a NOT experiment on span{|01>, |10>}.
  NotStatistics effective() const;
};

struct EntanglementCertificate {
  double fidelity_lower_bound = 0.0;
  bool entangled = false;
  double subspace_weight_floor = 0.0;
  std::array<double, 2> subspace_weight_ratio{};
  SuperpositionCertificate effective_qubit_certificate;
  StatisticalCorrection correction;
  bool valid = false;
  std::string reason;
};

/// Number of probability estimates entering each certificate, for the
/// Bonferroni correction.
std::size_t estimates_used(CertificateMode mode);
std::size_t estimates_used_swap();

DerivedRatios compute_derived(const NotStatistics& stats, const CertifyOptions& options = {});

SuperpositionCertificate certify_exact_not(const NotStatistics& stats, const CertifyOptions& options = {});
SuperpositionCertificate certify_approx_not(const NotStatistics& stats, const CertifyOptions& options = {});
DistanceLowerBound approx_distance_lower_bound(const NotStatistics& stats, const CertifyOptions& options = {});

double entanglement_fidelity_bound(double subspace_weight_floor, double effective_fidelity_bound);
EntanglementCertificate certify_swap_entanglement(const SwapStatistics& stats, const CertifyOptions& options = {});

}  // namespace sbcert
