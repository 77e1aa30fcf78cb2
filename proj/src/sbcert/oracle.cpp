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

#include "sbcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sbcert/error.hpp"
#include "sbcert/report.hpp"

namespace sbcert {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhaseGridStep = 1e-4;
constexpr double kPhaseRefineTol = 1e-8;
constexpr std::size_t kMaxStoredCounterexamples = 20;

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

double superposition_overlap(const Matrix& rho, Eigen::Index a, Eigen::Index b, double phase) {
  // <psi|rho|psi>, psi = (|a> + e^{i phase}|b>) / sqrt(2)
  const Complex amp[2] = {Complex(std::numbers::sqrt2 / 2.0, 0.0), std::polar(std::numbers::sqrt2 / 2.0, phase)};
  const Eigen::Index idx[2] = {a, b};
  Complex acc = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) acc += std::conj(amp[x]) * rho(idx[x], idx[y]) * amp[y];
  return acc.real();
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json experiment_json(const RandomExperiment& e) {
  const auto& s = e.scenario;
  json detunings = json::array();
  for (std::size_t k = 2; k < s.leakage.levels; ++k) detunings.push_back(s.leakage.detuning(k));
  return json{{"gate", s.hamiltonian.kind == GateKind::kNot ? "NOT" : "SWAP"},
              {"rate", s.hamiltonian.rate},
              {"noise",
               {{"dephasing", s.noise.dephasing_rate},
                {"amplitude_damping", s.noise.amplitude_damping_rate},
                {"leakage_coupling", s.noise.leakage_coupling},
                {"depolarizing", s.noise.depolarizing_rate}}},
              {"leakage", {{"levels", s.leakage.levels}, {"detunings", detunings}}},
              {"gate_time", e.gate_time},
              {"half_time", e.half_time}};
}

}  // namespace

// --- random ensembles -----------------------------------------------------

DensityMatrix random_density(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  const Matrix g = gaussian_matrix(n, n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

PureState random_pure(std::size_t dim, Rng& rng) {
  Vector v = gaussian_matrix(static_cast<Eigen::Index>(dim), 1, rng).col(0);
  v.normalize();
  return PureState(v);
}

QuantumChannel random_channel(std::size_t dim, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::Index env = 2 * d;
  const Matrix g = gaussian_matrix(env * d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix v = qr.householderQ() * Matrix::Identity(env * d, d);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < env; ++k) kraus.push_back(v.block(k * d, 0, d, d));
  return QuantumChannel(std::move(kraus));
}

RandomExperiment random_experiment(GateKind kind, Rng& rng, const ScenarioRanges& ranges) {
  RandomExperiment e;
  auto& s = e.scenario;
  const double rate = uniform(rng, 0.5, 2.0);
  s.hamiltonian = HamiltonianSpec{kind, rate};
  const std::size_t span = ranges.max_levels - ranges.min_levels + 1;
  s.leakage.levels = ranges.min_levels + static_cast<std::size_t>(rng.uniform() * static_cast<double>(span));
  for (std::size_t k = 2; k < s.leakage.levels; ++k) {
    s.leakage.detunings.push_back(uniform(rng, 3.0, 15.0) * static_cast<double>(k - 1));
  }
  const bool heavy = rng.uniform() < ranges.heavy_probability;
  const double hi = heavy ? 2.0 : ranges.max_rate_fraction;
  auto draw_rate = [&]() {
    if (rng.uniform() < ranges.zero_rate_probability) return 0.0;
    return rate * log_uniform(rng, ranges.min_rate_fraction, hi);
  };
  s.noise.dephasing_rate = draw_rate();
  s.noise.amplitude_damping_rate = draw_rate();
  s.noise.depolarizing_rate = draw_rate();
  if (s.leakage.levels > 2 && rng.uniform() >= ranges.zero_rate_probability) {
    s.noise.leakage_coupling = uniform(rng, 0.0, ranges.max_leakage_coupling);
  }
  e.gate_time = (kPi / rate) * (1.0 + uniform(rng, -ranges.time_jitter, ranges.time_jitter));
  e.half_time = e.gate_time * uniform(rng, ranges.half_min, ranges.half_max);
  return e;
}

// --- entanglement and phase search ----------------------------------------

Matrix partial_transpose(const Matrix& rho, std::size_t dim_a, std::size_t dim_b) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (rho.rows() != da * db || rho.cols() != da * db) {
    throw Error(ErrorCode::kDimensionMismatch, "partial transpose dimensions");
  }
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index a1 = 0; a1 < da; ++a1)
    for (Eigen::Index b1 = 0; b1 < db; ++b1)
      for (Eigen::Index a2 = 0; a2 < da; ++a2)
        for (Eigen::Index b2 = 0; b2 < db; ++b2) out(a1 * db + b1, a2 * db + b2) = rho(a1 * db + b2, a2 * db + b1);
  return out;
}

double ppt_min_eigenvalue(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::kDimensionMismatch, "PPT test is exact only for two qubits");
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho.matrix(), 2, 2), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PhaseSearch max_phase_fidelity(const DensityMatrix& rho, std::size_t level_a, std::size_t level_b) {
  const auto a = static_cast<Eigen::Index>(level_a);
  const auto b = static_cast<Eigen::Index>(level_b);
  const Matrix& m = rho.matrix();
  const auto steps = static_cast<std::size_t>(std::ceil(2.0 * kPi / kPhaseGridStep));
  double best_phase = 0.0;
  double best = -1.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double phase = kPhaseGridStep * static_cast<double>(k);
    const double f = superposition_overlap(m, a, b, phase);
    if (f > best) {
      best = f;
      best_phase = phase;
    }
  }
  // Golden-section refinement on the bracketing grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_phase - kPhaseGridStep;
  double hi = best_phase + kPhaseGridStep;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = superposition_overlap(m, a, b, x1);
  double f2 = superposition_overlap(m, a, b, x2);
  while (hi - lo > kPhaseRefineTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = superposition_overlap(m, a, b, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = superposition_overlap(m, a, b, x1);
    }
  }
  double phase = 0.5 * (lo + hi);
  const double refined = superposition_overlap(m, a, b, phase);
  if (refined < best) phase = best_phase;
  phase = std::fmod(phase, 2.0 * kPi);
  if (phase < 0.0) phase += 2.0 * kPi;
  return PhaseSearch{std::max(refined, best), phase};
}

DensityMatrix two_qubit_block(const DensityMatrix& rho, std::size_t levels) {
  const std::vector<std::size_t> idx{0, 1, levels, levels + 1};
  return project_and_renormalize(rho, Projector(levels * levels, idx)).state;
}

// --- ground truth ---------------------------------------------------------

GroundTruth ground_truth(const Scenario& scenario, const std::vector<std::string>& prepared,
                         const std::vector<double>& time_grid) {
  scenario.validate();
  const SystemLayout layout{scenario.subsystems(), scenario.leakage.levels};
  GroundTruth truth;
  truth.times = time_grid;
  truth.prepared = prepared;
  truth.trajectory.resize(prepared.size());
  truth.max_superposition_fidelity.resize(prepared.size());
  if (scenario.subsystems() == 2) truth.ppt_min_eigenvalue.resize(prepared.size());

  for (double t : time_grid) {
    const SuperOperator s = propagator(scenario, t);
    for (std::size_t j = 0; j < prepared.size(); ++j) {
      const DensityMatrix rho = s.apply(DensityMatrix::basis(layout.dim(), layout.prepared_index(prepared[j])));
      if (scenario.subsystems() == 1) {
        truth.max_superposition_fidelity[j].push_back(max_phase_fidelity(rho, 0, 1).fidelity);
      } else {
        const DensityMatrix block = two_qubit_block(rho, scenario.leakage.levels);
        truth.max_superposition_fidelity[j].push_back(max_phase_fidelity(block, 1, 2).fidelity);
        truth.ppt_min_eigenvalue[j].push_back(ppt_min_eigenvalue(block));
      }
      truth.trajectory[j].push_back(rho);
    }
  }
  return truth;
}

// --- scans ----------------------------------------------------------------

void ScanReport::record(double margin, const json& details, double tolerance) {
  if (margin < worst_margin) {
    worst_margin = margin;
    worst_case = details;
  }
  if (margin < -tolerance) {
    ++violations;
    if (counterexamples.size() < kMaxStoredCounterexamples) counterexamples.push_back(details);
  }
}

json to_json(const ScanReport& r) {
  json out{{"name", r.name},
           {"trials", r.trials},
           {"violations", r.violations},
           {"counters", r.counters},
           {"counterexamples", r.counterexamples}};
  out["worst_margin"] = std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(nullptr);
  out["worst_case"] = r.worst_case.is_null() ? json(nullptr) : r.worst_case;
  return out;
}

namespace {

struct TrialStates {
  std::array<DensityMatrix, 2> half;
  std::array<DensityMatrix, 2> gate;
};

TrialStates evolve_trial(const RandomExperiment& e, const std::array<std::size_t, 2>& prepared_index) {
  const SuperOperator to_half = propagator(e.scenario, e.half_time);
  const SuperOperator rest = propagator(e.scenario, e.gate_time - e.half_time);
  const std::size_t dim = e.scenario.dim();
  auto evolve = [&](std::size_t j) {
    const DensityMatrix half = to_half.apply(DensityMatrix::basis(dim, prepared_index[j]));
    return std::pair{half, rest.apply(half)};
  };
  auto [h0, g0] = evolve(0);
  auto [h1, g1] = evolve(1);
  return TrialStates{{h0, h1}, {g0, g1}};
}

CountTable sample_table(const std::array<std::string, 2>& prepared, const TrialStates& states,
                        const SystemLayout& layout, std::uint64_t shots, std::uint64_t seed) {
  return sample_experiment({prepared[0], prepared[1]}, {states.gate[0], states.gate[1]},
                           {states.half[0], states.half[1]}, layout, shots, seed);
}

}  // namespace

ScanReport soundness_scan(const SoundnessOptions& options) {
  ScanReport report;
  const bool is_not = options.kind == GateKind::kNot;
  report.name = std::string("soundness_") + (is_not ? "not" : "swap") + (options.shots ? "_finite_shot" : "");
  report.counters = {{"valid", 0}, {"fired", 0}, {"invalid", 0}, {"errors", 0}};
  if (!is_not) {
    report.counters["witness_fired"] = 0;
    report.counters["ppt_confirmed"] = 0;
    report.counters["witness_false_positives"] = 0;
  }
  const std::array<std::string, 2> prepared = is_not ? std::array<std::string, 2>{"0", "1"}
                                                     : std::array<std::string, 2>{"01", "10"};
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    Rng rng(options.seed, trial);
    const RandomExperiment e = random_experiment(options.kind, rng, options.ranges);
    const SystemLayout layout{e.scenario.subsystems(), e.scenario.leakage.levels};
    ++report.trials;
    TrialStates states = evolve_trial(e, {layout.prepared_index(prepared[0]), layout.prepared_index(prepared[1])});

    // Reference values.
    std::array<double, 2> truth{};
    std::array<double, 2> ppt{};
    for (std::size_t j = 0; j < 2; ++j) {
      if (is_not) {
        truth[j] = max_phase_fidelity(states.half[j], 0, 1).fidelity;
      } else {
        const DensityMatrix block = two_qubit_block(states.half[j], layout.levels);
        truth[j] = max_phase_fidelity(block, 1, 2).fidelity;
        ppt[j] = ppt_min_eigenvalue(block);
      }
    }
    const double best_truth = std::max(truth[0], truth[1]);

    json details = experiment_json(e);
    details["trial"] = trial;
    details["truth"] = truth;
    try {
      const double level = options.shots
                               ? bonferroni_level(options.confidence_level, is_not ? estimates_used(CertificateMode::kApproximate)
                                                                                   : estimates_used_swap())
                               : 1.0;
      double bound = 0.0;
      bool valid = false;
      bool fires = false;
      if (is_not) {
        NotStatistics stats;
        if (options.shots) {
          const CountTable table = sample_table(prepared, states, layout, options.shots, derive_stream_seed(options.seed, trial));
          const std::string leak_free[2] = {"0", "1"};
          stats = NotStatistics::from_counts(table, prepared, {leak_free[0], leak_free[1]}, level, true);
        } else {
          stats = NotStatistics::exact({outcome_distribution(states.gate[0], layout), outcome_distribution(states.gate[1], layout)},
                                       std::array<OutcomeDistribution, 2>{outcome_distribution(states.half[0], layout),
                                                                          outcome_distribution(states.half[1], layout)});
        }
        const SuperpositionCertificate cert = certify_approx_not(stats, options.certify);
        valid = cert.valid;
        fires = cert.fires();
        bound = cert.fidelity_lower_bound;
        details["certificate"] = to_json(cert);
      } else {
        SwapStatistics stats;
        if (options.shots) {
          const CountTable table = sample_table(prepared, states, layout, options.shots, derive_stream_seed(options.seed, trial));
          stats = SwapStatistics::from_counts(table, level);
        } else {
          stats = SwapStatistics::exact({outcome_distribution(states.gate[0], layout), outcome_distribution(states.gate[1], layout)},
                                        {outcome_distribution(states.half[0], layout), outcome_distribution(states.half[1], layout)});
        }
        const EntanglementCertificate cert = certify_swap_entanglement(stats, options.certify);
        valid = cert.valid;
        fires = cert.entangled;
        bound = cert.fidelity_lower_bound;
        details["certificate"] = to_json(cert);
        details["ppt_min_eigenvalue"] = ppt;
        if (cert.entangled) {
          ++report.counters["witness_fired"];
          if (std::min(ppt[0], ppt[1]) < 0.0) {
            ++report.counters["ppt_confirmed"];
          } else {
            ++report.counters["witness_false_positives"];
            ++report.violations;
            if (report.counterexamples.size() < kMaxStoredCounterexamples) report.counterexamples.push_back(details);
          }
        }
      }
      if (!valid) {
        ++report.counters["invalid"];
        continue;
      }
      ++report.counters["valid"];
      if (fires) ++report.counters["fired"];
      report.record(best_truth - bound, details, options.tolerance);
    } catch (const Error& err) {
      // Zero subspace weight and similar: no certificate is issued.
      ++report.counters["errors"];
    }
  }
  return report;
}

InequalityReport inequality_scan(FidelityConvention convention, std::size_t n_pairs, std::uint64_t seed) {
  InequalityReport report;
  report.convention = convention;
  const std::string suffix = convention == FidelityConvention::kTraceProduct ? "_trace_product" : "_uhlmann";
  report.pure_lower.name = "pure_state_lower" + suffix;
  report.mixed_lower.name = "fidelity_squared_lower" + suffix;
  report.upper.name = "sqrt_upper" + suffix;
  constexpr double kTol = 1e-10;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    Rng rng(seed, k);
    const std::size_t dim = 2 + k % 3;
    const bool pure_first = k % 2 == 0;
    const DensityMatrix a = pure_first ? DensityMatrix(random_pure(dim, rng)) : random_density(dim, rng);
    const DensityMatrix b = random_density(dim, rng);
    const double d = trace_distance(a, b);
    const double f = convention == FidelityConvention::kTraceProduct ? fidelity_tr(a, b) : uhlmann_fidelity(a, b);
    const json details{{"pair", k}, {"dim", dim}, {"pure_first", pure_first}, {"D", d}, {"F", f},
                       {"a", matrix_json(a.matrix())}, {"b", matrix_json(b.matrix())}};
    if (pure_first) {
      ++report.pure_lower.trials;
      report.pure_lower.record(d - (1.0 - f), details, kTol);
    }
    ++report.mixed_lower.trials;
    report.mixed_lower.record(d - (1.0 - f * f), details, kTol);
    ++report.upper.trials;
    report.upper.record(std::sqrt(std::max(0.0, 1.0 - f)) - d, details, kTol);
  }
  return report;
}

json to_json(const InequalityReport& r) {
  return json{{"convention", r.convention == FidelityConvention::kTraceProduct ? "trace_product" : "uhlmann"},
              {"pure_lower", to_json(r.pure_lower)},
              {"fidelity_squared_lower", to_json(r.mixed_lower)},
              {"sqrt_upper", to_json(r.upper)}};
}

CapCheck bloch_cap_check(double eps_prime, double ds00, double ds01, std::size_t n_grid, CapFormula formula) {
  CapCheck check;
  const double separation = 1.0 - eps_prime;
  // ds_1^i = -ds_0^i for qubit-normalized statistics.
  const double g = formula == CapFormula::kVerticalSeparation ? ds01 - ds00 : ds01 + (-ds01);
  const double radicand = separation * separation - g * g;
  if (separation <= 0.0 || radicand < 0.0) return check;
  check.defined = true;
  check.delta = 1.0 - std::sqrt(radicand);
  const double threshold = 1.0 - check.delta - 1e-12;

  const double z0 = 2.0 * ds00;
  const double z1 = 2.0 * ds01;
  const double rmax0 = std::sqrt(std::max(0.0, 1.0 - z0 * z0));
  const double rmax1 = std::sqrt(std::max(0.0, 1.0 - z1 * z1));
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_grid))));
  const double needed = 4.0 * separation * separation;
  const double dz2 = (z0 - z1) * (z0 - z1);
  // The first state's azimuth is fixed at 0 by rotational symmetry about z.
  for (std::size_t i0 = 0; i0 < side; ++i0) {
    const double r0 = rmax0 * static_cast<double>(i0) / static_cast<double>(side - 1);
    if (r0 >= threshold) break;
    for (std::size_t i1 = 0; i1 < side; ++i1) {
      const double r1 = rmax1 * static_cast<double>(i1) / static_cast<double>(side - 1);
      if (r1 >= threshold) break;
      for (std::size_t m = 0; m < side; ++m) {
        const double alpha = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(side);
        const double dist2 = r0 * r0 + r1 * r1 - 2.0 * r0 * r1 * std::cos(alpha) + dz2;
        if (dist2 >= needed) ++check.counterexamples;
      }
    }
  }
  return check;
}

ScanReport bloch_cap_verify(std::size_t n_grid, std::size_t n_trials, std::uint64_t seed, CapFormula formula) {
  if (n_grid < 1000) throw Error(ErrorCode::kInvalidArgument, "cap verifier needs at least 1000 grid points per state");
  ScanReport report;
  report.name = "bloch_cap_" + to_string(formula);
  report.counters = {{"draws", 0}, {"infeasible", 0}, {"undefined_domain", 0}, {"counterexample_pairs", 0}};
  Rng rng(seed, 0);
  const std::size_t max_draws = 100 * n_trials + 100;
  while (report.trials < n_trials && report.counters["draws"] < max_draws) {
    ++report.counters["draws"];
    const double eps = rng.uniform();
    const double ds00 = rng.uniform() - 0.5;
    const double ds01 = rng.uniform() - 0.5;
    const double z0 = 2.0 * ds00;
    const double z1 = 2.0 * ds01;
    const double reach = std::hypot(std::sqrt(1.0 - z0 * z0) + std::sqrt(1.0 - z1 * z1), z0 - z1);
    if (reach < 2.0 * (1.0 - eps)) {
      ++report.counters["infeasible"];
      continue;
    }
    const CapCheck check = bloch_cap_check(eps, ds00, ds01, n_grid, formula);
    if (!check.defined) {
      ++report.counters["undefined_domain"];
      continue;
    }
    ++report.trials;
    const json details{{"eps_prime", eps}, {"ds_0^0", ds00}, {"ds_0^1", ds01}, {"delta", check.delta},
                       {"counterexample_pairs", check.counterexamples}};
    report.counters["counterexample_pairs"] += check.counterexamples;
    // margin: -1 per draw with a counterexample, 0 otherwise
    report.record(check.counterexamples > 0 ? -1.0 : 0.0, details, 0.5);
  }
  return report;
}

// --- hidden qubit ---------------------------------------------------------

PathologyReport pathology_demo(const std::vector<SwapEvent>& schedule, double rate) {
  const HiddenQubitScenario scenario(schedule, rate);
  PathologyReport report;
  report.schedule = schedule;
  report.gate_time = scenario.gate_time();
  report.half_time = 0.5 * report.gate_time;

  const SystemLayout layout{1, 2};
  const QuantumChannel gate = scenario.system_channel(report.gate_time);
  const QuantumChannel half = scenario.system_channel(report.half_time);
  const QuantumChannel ideal = ideal_not_channel(rate * report.gate_time);
  std::array<OutcomeDistribution, 2> gate_dist;
  std::array<OutcomeDistribution, 2> half_dist;
  for (std::size_t j = 0; j < 2; ++j) {
    const PureState psi = PureState::basis(2, j);
    gate_dist[j] = exact_probabilities(gate, psi, layout);
    half_dist[j] = exact_probabilities(half, psi, layout);
    const OutcomeDistribution ideal_dist = exact_probabilities(ideal, psi, layout);
    for (std::size_t k = 0; k < ideal_dist.size(); ++k) {
      report.max_deviation_from_ideal_not =
          std::max(report.max_deviation_from_ideal_not, std::abs(ideal_dist[k].second - gate_dist[j][k].second));
    }
  }
  const NotStatistics stats = NotStatistics::exact(gate_dist, half_dist);
  const CertifyOptions point{StatisticalPolicy::kPoint, CapFormula::kVerticalSeparation};
  report.system_certificate = certify_approx_not(stats, point);
  report.exact_mode_certificate = certify_exact_not(stats, point);

  for (std::size_t j = 0; j < 2; ++j) {
    const DensityMatrix composite = scenario.composite_state(j, report.half_time);
    const DensityMatrix system = partial_trace_second(composite, 2, 2);
    const DensityMatrix hidden = partial_trace_first(composite, 2, 2);
    report.system_truth_fidelity = std::max(report.system_truth_fidelity, max_phase_fidelity(system, 0, 1).fidelity);
    report.hidden_truth_fidelity = std::max(report.hidden_truth_fidelity, max_phase_fidelity(hidden, 0, 1).fidelity);
  }
  report.certificate_fires = report.system_certificate.fires();
  report.superposition_on_hidden_qubit =
      report.hidden_truth_fidelity > 1.0 - 1e-6 && report.system_truth_fidelity < report.hidden_truth_fidelity - 1e-6;

  std::ostringstream os;
  os << "System-level statistics deviate from an ideal NOT by at most " << report.max_deviation_from_ideal_not
     << ". The system certificate " << (report.certificate_fires ? "fires" : "does not fire")
     << " with fidelity lower bound " << report.system_certificate.fidelity_lower_bound << ". At t_half the system qubit"
     << " reaches max superposition fidelity " << report.system_truth_fidelity << " while the hidden qubit reaches "
     << report.hidden_truth_fidelity << ".";
  if (report.certificate_fires && report.superposition_on_hidden_qubit) {
    os << " The superposition was created, but on the hidden qubit: the system evolution is not a"
          " state-independent Markovian operation, so the certificate's assumptions do not hold.";
  }
  report.narrative = os.str();
  return report;
}

json to_json(const PathologyReport& r) {
  json schedule = json::array();
  for (const auto& e : r.schedule) schedule.push_back({{"start", e.start}, {"duration", e.duration}});
  return json{{"schedule", schedule},
              {"gate_time", r.gate_time},
              {"half_time", r.half_time},
              {"system_certificate", to_json(r.system_certificate)},
              {"exact_mode_certificate", to_json(r.exact_mode_certificate)},
              {"max_deviation_from_ideal_not", r.max_deviation_from_ideal_not},
              {"system_truth_fidelity", r.system_truth_fidelity},
              {"hidden_truth_fidelity", r.hidden_truth_fidelity},
              {"certificate_fires", r.certificate_fires},
              {"superposition_on_hidden_qubit", r.superposition_on_hidden_qubit},
              {"narrative", r.narrative}};
}

}  // namespace sbcert
