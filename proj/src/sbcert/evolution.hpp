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

// Ideal NOT / Heisenberg SWAP evolutions and their noisy, leaky Lindblad
// counterparts.
//
// Conventions: hbar = 1, dimensionless time T = rate * t. A single system
// has `levels` basis states with {0, 1} the qubit; two systems are ordered
// first (x) second, so |l>|m> has index l * levels + m.

#pragma once

#include <cstddef>
#include <vector>

#include "sbcert/channel.hpp"
#include "sbcert/quantum.hpp"

namespace sbcert {

enum class GateKind { kNot, kSwap };

struct HamiltonianSpec {
  GateKind kind = GateKind::kNot;
  double rate = 1.0;  // Gamma for NOT, J for SWAP

  static HamiltonianSpec not_gate(double gamma) { return {GateKind::kNot, gamma}; }
  static HamiltonianSpec heisenberg_swap(double j) { return {GateKind::kSwap, j}; }

  void validate() const;
  double period() const;     // 2 pi / rate
  double gate_time() const;  // pi / rate: NOT or full SWAP
};

/// Rates are in 1/time; leakage_coupling is relative to the Hamiltonian rate.
struct NoiseSpec {
  double dephasing_rate = 0.0;
  double amplitude_damping_rate = 0.0;
  double leakage_coupling = 0.0;
  double depolarizing_rate = 0.0;

  void validate() const;
  bool noiseless() const;
};

struct LeakageModel {
  static constexpr double kDefaultDetuning = 10.0;

  std::size_t levels = 4;
  /// Detunings of levels 2..levels-1 relative to the Hamiltonian rate. Empty
  /// means kDefaultDetuning * (k - 1) for level k.
  std::vector<double> detunings;

  static LeakageModel exact_qubit() { return LeakageModel{2, {}}; }

  void validate() const;
  double detuning(std::size_t level) const;
};

struct Scenario {
  HamiltonianSpec hamiltonian;
  NoiseSpec noise;
  LeakageModel leakage;

  void validate() const;
  std::size_t subsystems() const { return hamiltonian.kind == GateKind::kNot ? 1 : 2; }
  std::size_t dim() const;
  /// Index of the product basis state with per-subsystem levels.
  std::size_t index(std::size_t first, std::size_t second = 0) const;
};

/// drho/dt = -i[H, rho] + sum_k D[L_k](rho) + p (I Tr(rho) / d - rho).
struct LindbladGenerator {
  std::size_t dim = 0;
  Matrix hamiltonian;
  std::vector<Matrix> jumps;
  double depolarizing_rate = 0.0;

  Matrix liouvillian() const;
};

LindbladGenerator build_generator(const Scenario& scenario);

struct IntegrationOptions {
  double max_step_period_fraction = 1e-3;
  /// Upper bound on step * ||L||_1, keeps the fourth-order truncation far
  /// below the 1e-6 step-halving tolerance for stiff leakage detunings.
  double max_step_norm = 0.02;
};

/// Number of fixed RK4 steps (a power of two) used for evolving to time t.
std::size_t integration_steps(const Matrix& liouvillian, double t, double period,
                              const IntegrationOptions& options = {});

/// Fixed-step RK4 propagator for a time-independent generator. For a linear
/// autonomous equation one RK4 step is the quartic Taylor polynomial of
/// h * L, so `steps` steps are that polynomial raised to the power `steps`.
SuperOperator rk4_propagator(const Matrix& liouvillian, std::size_t dim, double t, std::size_t steps);

/// E_{0,t} as a superoperator with the default step policy.
SuperOperator propagator(const Scenario& scenario, double t, const IntegrationOptions& options = {});

/// E_{0,t} in Kraus form, extracted from the Choi matrix.
QuantumChannel noisy_evolution(const HamiltonianSpec& h, const NoiseSpec& n, const LeakageModel& l,
                               double t, const IntegrationOptions& options = {});

Matrix not_unitary(double big_t);
Matrix swap_unitary(double big_t);
QuantumChannel ideal_not_channel(double big_t);
QuantumChannel ideal_swap_channel(double big_t);

/// exp(-i h t) for Hermitian h.
Matrix hermitian_evolution(const Matrix& h, double t);

// Hidden environment qubit scenario: a second qubit, invisible to the
// experimenter, is swapped with the system at scheduled moments. Both qubits
// carry the same NOT Hamiltonian; the hidden qubit starts maximally mixed.

struct SwapEvent {
  double start = 0.0;
  double duration = 0.0;
};

class HiddenQubitScenario {
 public:
  HiddenQubitScenario(std::vector<SwapEvent> schedule, double rate = 1.0);

  /// Exchange shortly after preparation and again shortly before the gate
  /// time, so the half-time state lives entirely on the hidden qubit.
  static std::vector<SwapEvent> default_schedule(double rate = 1.0);

  const std::vector<SwapEvent>& schedule() const { return schedule_; }
  double rate() const { return rate_; }
  double gate_time() const;

  /// 4x4 unitary on system (x) hidden.
  Matrix composite_unitary(double t) const;
  DensityMatrix composite_state(std::size_t prepared, double t) const;
  /// Reduced dynamics of the system qubit alone.
  QuantumChannel system_channel(double t) const;

 private:
  std::vector<SwapEvent> schedule_;
  double rate_;
};

HiddenQubitScenario hidden_qubit_pathology(std::vector<SwapEvent> schedule, double rate = 1.0);

}  // namespace sbcert
