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

// Brute-force ground truth and randomized scans that check the certificates.
//
// Nothing here calls into certify for its reference values: phase
// maximization is a grid search, entanglement is decided by the partial
// transpose and the cap geometry is searched directly on Bloch-ball grids.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbcert/certify.hpp"
#include "sbcert/evolution.hpp"
#include "sbcert/measurement.hpp"

namespace sbcert {

// --- random ensembles -----------------------------------------------------

/// Hilbert-Schmidt distributed mixed state (Ginibre construction).
DensityMatrix random_density(std::size_t dim, Rng& rng);
PureState random_pure(std::size_t dim, Rng& rng);
/// Random channel from a Haar-like Stinespring isometry with environment
/// dimension 2 * dim.
QuantumChannel random_channel(std::size_t dim, Rng& rng);

struct ScenarioRanges {
  std::size_t min_levels = 2;
  std::size_t max_levels = 4;
  double zero_rate_probability = 0.3;
  double min_rate_fraction = 1e-4;  // log-uniform noise rates, relative to the Hamiltonian rate
  double max_rate_fraction = 0.2;
  double heavy_probability = 0.1;   // trials drawn with rates up to 2x the Hamiltonian rate
  double max_leakage_coupling = 0.2;
  double time_jitter = 0.1;         // t = (pi / rate) (1 + U(-jitter, jitter))
  double half_min = 0.4;            // t_half = t * U(half_min, half_max)
  double half_max = 0.6;
};

struct RandomExperiment {
  Scenario scenario;
  double gate_time = 0.0;
  double half_time = 0.0;
};

RandomExperiment random_experiment(GateKind kind, Rng& rng, const ScenarioRanges& ranges = {});

// --- entanglement and phase search ----------------------------------------

/// Partial transpose on the second factor of a dim_a x dim_b system.
Matrix partial_transpose(const Matrix& rho, std::size_t dim_a, std::size_t dim_b);
/// Smallest eigenvalue of the partial transpose of a two-qubit state.
/// Negative iff the state is entangled.
double ppt_min_eigenvalue(const DensityMatrix& rho);

struct PhaseSearch {
  double fidelity;
  double phase;
};

/// max over phi of <psi|rho|psi> with psi = (|a> + e^{i phi}|b>)/sqrt(2),
/// by a phase grid of step 1e-4 refined with golden-section search to 1e-8.
PhaseSearch max_phase_fidelity(const DensityMatrix& rho, std::size_t level_a, std::size_t level_b);

/// Normalized restriction of a two-system state to the qubit levels of both
/// subsystems, as a 4x4 state on |00>, |01>, |10>, |11>.
DensityMatrix two_qubit_block(const DensityMatrix& rho, std::size_t levels);

// --- ground truth ---------------------------------------------------------

struct GroundTruth {
  std::vector<double> times;
  std::vector<std::string> prepared;
  /// trajectory[j][k]: state evolved from prepared[j] at times[k].
  std::vector<std::vector<DensityMatrix>> trajectory;
  /// Max over phi of the fidelity to the maximal superposition: levels {0, 1}
  /// for NOT, |01>, |10> of the two-qubit block sigma^Q for SWAP.
  std::vector<std::vector<double>> max_superposition_fidelity;
  /// SWAP only: smallest partial-transpose eigenvalue of sigma^Q.
  std::vector<std::vector<double>> ppt_min_eigenvalue;
};

GroundTruth ground_truth(const Scenario& scenario, const std::vector<std::string>& prepared,
                         const std::vector<double>& time_grid);

// --- scans ----------------------------------------------------------------

struct ScanReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Smallest (reference - claim) over checked trials; negative means a
  /// violation.
  double worst_margin = std::numeric_limits<double>::infinity();
  nlohmann::json worst_case;
  std::map<std::string, std::size_t> counters;
  std::vector<nlohmann::json> counterexamples;

  void record(double margin, const nlohmann::json& details, double tolerance);
};

nlohmann::json to_json(const ScanReport& report);

struct SoundnessOptions {
  GateKind kind = GateKind::kNot;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  ScenarioRanges ranges;
  CertifyOptions certify{StatisticalPolicy::kPoint, CapFormula::kVerticalSeparation};
  /// 0 selects infinite-shot statistics.
  std::uint64_t shots = 0;
  double confidence_level = 0.95;
  double tolerance = 1e-9;
};

/// Per trial: random noisy experiment, certificate from its statistics,
/// comparison with the brute-force truth at the half time. For SWAP, every
/// witness firing is also checked against the partial transpose.
ScanReport soundness_scan(const SoundnessOptions& options);

enum class FidelityConvention { kTraceProduct, kUhlmann };

struct InequalityReport {
  FidelityConvention convention = FidelityConvention::kTraceProduct;
  ScanReport pure_lower;   // 1 - F <= D, pure first argument
  ScanReport mixed_lower;  // 1 - F^2 <= D
  ScanReport upper;        // D <= sqrt(1 - F)
};

InequalityReport inequality_scan(FidelityConvention convention, std::size_t n_pairs, std::uint64_t seed);
nlohmann::json to_json(const InequalityReport& report);

/// Searches Bloch-ball grids for two qubit states at heights fixed by the
/// ds values, separated by at least 2 (1 - eps') in Euclidean distance, with
/// both horizontal radii below 1 - delta. Any such pair contradicts the cap
/// claim and is stored verbatim.
ScanReport bloch_cap_verify(std::size_t n_grid, std::size_t n_trials, std::uint64_t seed,
                            CapFormula formula = CapFormula::kVerticalSeparation);

struct CapCheck {
  bool defined = false;
  double delta = 0.0;
  std::size_t counterexamples = 0;
};

/// One cap check for explicit (eps', ds_0^0, ds_0^1).
CapCheck bloch_cap_check(double eps_prime, double ds00, double ds01, std::size_t n_grid, CapFormula formula);

struct PathologyReport {
  std::vector<SwapEvent> schedule;
  double gate_time = 0.0;
  double half_time = 0.0;
  SuperpositionCertificate system_certificate;
  SuperpositionCertificate exact_mode_certificate;
  /// Gate-time statistics compared with an ideal NOT on the system qubit.
  double max_deviation_from_ideal_not = 0.0;
  double system_truth_fidelity = 0.0;  // max_j, phi at t_half, system qubit
  double hidden_truth_fidelity = 0.0;  // same for the hidden qubit
  bool certificate_fires = false;
  bool superposition_on_hidden_qubit = false;
  std::string narrative;
};

PathologyReport pathology_demo(const std::vector<SwapEvent>& schedule, double rate = 1.0);
nlohmann::json to_json(const PathologyReport& report);

}  // namespace sbcert
