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

#include <gtest/gtest.h>

#include "sbcert/error.hpp"
#include "sbcert/oracle.hpp"
#include "support.hpp"

using namespace sbcert;
using sbcert::testing::kPi;

TEST(PartialTranspose, BellAndProductStates) {
  Vector bell = Vector::Zero(4);
  bell(1) = bell(2) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(ppt_min_eigenvalue(DensityMatrix(PureState(bell))), -0.5, 1e-12);
  Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix product = tensor(random_density(2, rng), random_density(2, rng));
    EXPECT_GE(ppt_min_eigenvalue(product), -1e-12);
  }
  // Werner state p |psi-><psi-| + (1 - p) I/4 is entangled iff p > 1/3.
  for (double p : {0.2, 0.33, 0.34, 0.9}) {
    const Matrix w = p * DensityMatrix(PureState(bell)).matrix() + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
    EXPECT_EQ(ppt_min_eigenvalue(DensityMatrix(w)) < 0.0, p > 1.0 / 3.0) << p;
  }
  // Transposing the second factor twice is the identity.
  const Matrix m = random_density(6, rng).matrix();
  EXPECT_TRUE((partial_transpose(partial_transpose(m, 2, 3), 2, 3) - m).norm() < 1e-15);
  EXPECT_THROW(partial_transpose(m, 2, 2), Error);
}

TEST(PhaseSearch, MatchesClosedForm) {
  Rng rng(42);
  for (int k = 0; k < 30; ++k) {
    const DensityMatrix rho = random_density(2, rng);
    const PhaseSearch s = max_phase_fidelity(rho, 0, 1);
    const PhaseFidelity f = max_superposition_fidelity(rho);
    EXPECT_NEAR(s.fidelity, f.fidelity, 1e-12);
    // The phase is only pinned where the coherence is visible.
    if (bloch_from_density(rho).horizontal() > 1e-3) {
      EXPECT_NEAR(std::remainder(s.phase - f.phase, 2.0 * kPi), 0.0, 1e-6);
    }
  }
  // Levels of a larger space.
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = std::polar(1.0 / std::sqrt(2.0), 1.1);
  const PhaseSearch s = max_phase_fidelity(DensityMatrix(PureState(v)), 1, 2);
  EXPECT_NEAR(s.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(s.phase, 1.1, 1e-6);
}

TEST(GroundTruth, IdealNotTrajectory) {
  const Scenario sc{HamiltonianSpec::not_gate(1.0), {}, LeakageModel::exact_qubit()};
  const GroundTruth g = ground_truth(sc, {"0", "1"}, {0.0, kPi / 2, kPi});
  ASSERT_EQ(g.max_superposition_fidelity.size(), 2u);
  EXPECT_NEAR(g.max_superposition_fidelity[0][0], 0.5, 1e-12);
  EXPECT_NEAR(g.max_superposition_fidelity[0][1], 1.0, 1e-9);
  EXPECT_NEAR(g.trajectory[1][2].population(0), 1.0, 1e-9);
  EXPECT_TRUE(g.ppt_min_eigenvalue.empty());

  const Scenario sw{HamiltonianSpec::heisenberg_swap(1.0), {}, LeakageModel{3, {}}};
  const GroundTruth s = ground_truth(sw, {"01"}, {kPi / 2});
  EXPECT_NEAR(s.max_superposition_fidelity[0][0], 1.0, 1e-9);
  EXPECT_NEAR(s.ppt_min_eigenvalue[0][0], -0.5, 1e-9);
}

TEST(TwoQubitBlock, SelectsQubitLevels) {
  Matrix m = Matrix::Zero(9, 9);
  m(1, 1) = 0.5;  // |01>
  m(3, 3) = 0.3;  // |10>
  m(2, 2) = 0.2;  // |0L>
  const DensityMatrix block = two_qubit_block(DensityMatrix(m), 3);
  EXPECT_NEAR(block.population(1), 0.625, 1e-15);
  EXPECT_NEAR(block.population(2), 0.375, 1e-15);
}

TEST(Scans, NotSoundnessIsReproducible) {
  SoundnessOptions o;
  o.trials = 40;
  o.seed = 99;
  const ScanReport a = soundness_scan(o);
  const ScanReport b = soundness_scan(o);
  EXPECT_EQ(a.violations, 0u);
  EXPECT_EQ(a.trials, 40u);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_GT(a.counters.at("fired"), 0u);
}

TEST(Scans, SwapSoundnessAndWitness) {
  SoundnessOptions o;
  o.kind = GateKind::kSwap;
  o.trials = 15;
  const ScanReport r = soundness_scan(o);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.counters.at("witness_false_positives"), 0u);
  EXPECT_EQ(r.counters.at("witness_fired"), r.counters.at("ppt_confirmed"));
}

TEST(Scans, FiniteShotConservative) {
  SoundnessOptions o;
  o.trials = 30;
  o.shots = 10000;
  o.certify.policy = StatisticalPolicy::kConservativeCi;
  const ScanReport r = soundness_scan(o);
  EXPECT_EQ(r.name, "soundness_not_finite_shot");
  EXPECT_LE(r.violations, 2u);
}

TEST(Scans, InequalityConventions) {
  for (FidelityConvention c : {FidelityConvention::kTraceProduct, FidelityConvention::kUhlmann}) {
    const InequalityReport r = inequality_scan(c, 2000, 5);
    EXPECT_EQ(r.pure_lower.violations, 0u);
    EXPECT_EQ(r.pure_lower.trials, 1000u);
    EXPECT_EQ(r.mixed_lower.trials, 2000u);
  }
  // The squared lower bound fails for some mixed pairs under the trace-product
  // convention (e.g. equal mixed states have D = 0 but F < 1).
  const InequalityReport t = inequality_scan(FidelityConvention::kTraceProduct, 2000, 5);
  EXPECT_GT(t.mixed_lower.violations, 0u);
  EXPECT_FALSE(t.mixed_lower.counterexamples.empty());
}

TEST(CapCheck, PrintedFormulaCounterexample) {
  // Bloch vectors (0.8, 0, 0.6) and (-0.8, 0, -0.6) are antipodal, so
  // 1 - eps' may be close to 1, yet both sit 0.8 from the axis.
  const double eps = 0.05;
  const CapCheck printed = bloch_cap_check(eps, 0.3, -0.3, 1024, CapFormula::kSamePreparedSum);
  ASSERT_TRUE(printed.defined);
  EXPECT_NEAR(printed.delta, eps, 1e-15);
  EXPECT_GT(printed.counterexamples, 0u);
  const CapCheck fixed = bloch_cap_check(eps, 0.3, -0.3, 1024, CapFormula::kVerticalSeparation);
  ASSERT_TRUE(fixed.defined);
  EXPECT_EQ(fixed.counterexamples, 0u);
  EXPECT_NEAR(fixed.delta, 1.0 - std::sqrt(0.95 * 0.95 - 0.36), 1e-15);
  EXPECT_FALSE(bloch_cap_check(0.5, 0.45, -0.45, 1024, CapFormula::kVerticalSeparation).defined);
}

TEST(CapCheck, VerifierCountsDomains) {
  const ScanReport r = bloch_cap_verify(1000, 300, 8, CapFormula::kVerticalSeparation);
  EXPECT_EQ(r.trials, 300u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GT(r.counters.at("undefined_domain"), 0u);
  EXPECT_THROW(bloch_cap_verify(999, 10, 1, CapFormula::kVerticalSeparation), Error);
  const ScanReport p = bloch_cap_verify(1000, 300, 8, CapFormula::kSamePreparedSum);
  EXPECT_GT(p.violations, 0u);
}

TEST(Pathology, DefaultScheduleFiresOnHiddenQubit) {
  const PathologyReport r = pathology_demo(HiddenQubitScenario::default_schedule(1.0), 1.0);
  EXPECT_TRUE(r.certificate_fires);
  EXPECT_TRUE(r.superposition_on_hidden_qubit);
  EXPECT_LT(r.max_deviation_from_ideal_not, 1e-12);
  EXPECT_NEAR(r.system_truth_fidelity, 0.5, 1e-9);
  EXPECT_NEAR(r.hidden_truth_fidelity, 1.0, 1e-9);
  EXPECT_NE(r.narrative.find("hidden qubit"), std::string::npos);
}

TEST(Pathology, OtherSchedules) {
  const PathologyReport none = pathology_demo({}, 1.0);
  EXPECT_TRUE(none.certificate_fires);
  EXPECT_FALSE(none.superposition_on_hidden_qubit);
  EXPECT_NEAR(none.system_truth_fidelity, 1.0, 1e-9);

  // A single early swap leaves the system mixed at t, so nothing is certified.
  const double t = kPi;
  const PathologyReport first = pathology_demo({{0.05 * t, 0.05 * t}}, 1.0);
  EXPECT_FALSE(first.certificate_fires);
  EXPECT_GT(first.max_deviation_from_ideal_not, 0.4);
}
