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

#include "sbcert/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "sbcert/error.hpp"

namespace sbcert {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

Matrix pauli(char which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 'x':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'y':
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case 'z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      break;
  }
  return m;
}

// Qubit operator acting on levels {0, 1} of a `levels`-level system, zero elsewhere.
Matrix embed_qubit(const Matrix& op, std::size_t levels) {
  const auto n = static_cast<Eigen::Index>(levels);
  Matrix m = Matrix::Zero(n, n);
  m.topLeftCorner(2, 2) = op;
  return m;
}

Matrix local_hamiltonian(const LeakageModel& leakage, const NoiseSpec& noise, double rate) {
  const auto n = static_cast<Eigen::Index>(leakage.levels);
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t k = 2; k < leakage.levels; ++k) {
    h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = rate * leakage.detuning(k);
  }
  // Ladder coupling 1 <-> 2 <-> 3 ... with harmonic-oscillator matrix elements.
  for (std::size_t k = 1; k + 1 < leakage.levels; ++k) {
    const double g = rate * noise.leakage_coupling * std::sqrt(static_cast<double>(k));
    h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = g;
    h(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = g;
  }
  return h;
}

std::vector<Matrix> local_jumps(const LeakageModel& leakage, const NoiseSpec& noise) {
  std::vector<Matrix> jumps;
  if (noise.dephasing_rate > 0.0) {
    // Off-diagonal qubit coherence decays as exp(-rate * t).
    jumps.push_back(std::sqrt(noise.dephasing_rate / 2.0) * embed_qubit(pauli('z'), leakage.levels));
  }
  if (noise.amplitude_damping_rate > 0.0) {
    const auto n = static_cast<Eigen::Index>(leakage.levels);
    Matrix lower = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    jumps.push_back(std::sqrt(noise.amplitude_damping_rate) * lower);
  }
  return jumps;
}

Matrix identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return Matrix::Identity(k, k);
}

}  // namespace

void HamiltonianSpec::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidArgument, "Hamiltonian rate must be positive and finite");
  }
}

double HamiltonianSpec::period() const { return 2.0 * kPi / rate; }
double HamiltonianSpec::gate_time() const { return kPi / rate; }

void NoiseSpec::validate() const {
  for (double r : {dephasing_rate, amplitude_damping_rate, leakage_coupling, depolarizing_rate}) {
    if (!std::isfinite(r) || r < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "noise rates must be finite and non-negative");
    }
  }
}

bool NoiseSpec::noiseless() const {
  return dephasing_rate == 0.0 && amplitude_damping_rate == 0.0 && leakage_coupling == 0.0 &&
         depolarizing_rate == 0.0;
}

void LeakageModel::validate() const {
  if (levels < 2) throw Error(ErrorCode::kInvalidArgument, "leakage model needs at least 2 levels");
  if (!detunings.empty() && detunings.size() != levels - 2) {
    throw Error(ErrorCode::kInvalidArgument, "leakage model needs one detuning per level above 1");
  }
  for (double d : detunings) {
    if (!std::isfinite(d)) throw Error(ErrorCode::kInvalidArgument, "detunings must be finite");
  }
}

double LeakageModel::detuning(std::size_t level) const {
  if (level < 2 || level >= levels) throw Error(ErrorCode::kInvalidArgument, "no detuning for this level");
  if (detunings.empty()) return kDefaultDetuning * static_cast<double>(level - 1);
  return detunings[level - 2];
}

void Scenario::validate() const {
  hamiltonian.validate();
  noise.validate();
  leakage.validate();
}

std::size_t Scenario::dim() const {
  return subsystems() == 1 ? leakage.levels : leakage.levels * leakage.levels;
}

std::size_t Scenario::index(std::size_t first, std::size_t second) const {
  if (first >= leakage.levels || second >= leakage.levels) {
    throw Error(ErrorCode::kInvalidArgument, "level index out of range");
  }
  return subsystems() == 1 ? first : first * leakage.levels + second;
}

Matrix LindbladGenerator::liouvillian() const {
  const Matrix id = identity(dim);
  // vec(A rho B) = (B^T (x) A) vec(rho)
  Matrix l = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& j : jumps) {
    const Matrix jdj = j.adjoint() * j;
    l += kron(j.conjugate(), j) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id);
  }
  if (depolarizing_rate > 0.0) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix vec_id = Matrix::Zero(n * n, 1);
    for (Eigen::Index i = 0; i < n; ++i) vec_id(i + i * n, 0) = 1.0;
    l += depolarizing_rate * (vec_id * vec_id.transpose() / static_cast<double>(dim) - identity(dim * dim));
  }
  return l;
}

LindbladGenerator build_generator(const Scenario& scenario) {
  scenario.validate();
  const auto& h = scenario.hamiltonian;
  const std::size_t levels = scenario.leakage.levels;
  LindbladGenerator gen;
  gen.dim = scenario.dim();
  gen.depolarizing_rate = scenario.noise.depolarizing_rate;

  const Matrix local = local_hamiltonian(scenario.leakage, scenario.noise, h.rate);
  const std::vector<Matrix> jumps = local_jumps(scenario.leakage, scenario.noise);
  if (h.kind == GateKind::kNot) {
    gen.hamiltonian = -0.5 * h.rate * embed_qubit(pauli('x'), levels) + local;
    gen.jumps = jumps;
  } else {
    const Matrix id = identity(levels);
    Matrix heis = Matrix::Zero(static_cast<Eigen::Index>(gen.dim), static_cast<Eigen::Index>(gen.dim));
    for (char a : {'x', 'y', 'z'}) {
      const Matrix s = embed_qubit(pauli(a), levels);
      heis += kron(s, s);
    }
    gen.hamiltonian = 0.25 * h.rate * heis + kron(local, id) + kron(id, local);
    for (const auto& j : jumps) {
      gen.jumps.push_back(kron(j, id));
      gen.jumps.push_back(kron(id, j));
    }
  }
  return gen;
}

std::size_t integration_steps(const Matrix& liouvillian, double t, double period,
                              const IntegrationOptions& options) {
  if (t <= 0.0) return 1;
  const double norm1 = liouvillian.cwiseAbs().colwise().sum().maxCoeff();
  const double needed = std::max(t / (options.max_step_period_fraction * period),
                                 t * norm1 / options.max_step_norm);
  std::size_t steps = 1;
  while (static_cast<double>(steps) < needed) steps <<= 1U;
  return steps;
}

SuperOperator rk4_propagator(const Matrix& liouvillian, std::size_t dim, double t, std::size_t steps) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "evolution time must be non-negative");
  if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "at least one integration step is required");
  const Eigen::Index n = liouvillian.rows();
  const Matrix a = liouvillian * (t / static_cast<double>(steps));
  const Matrix a2 = a * a;
  const Matrix a3 = a2 * a;
  Matrix step = Matrix::Identity(n, n) + a + a2 / 2.0 + a3 / 6.0 + (a3 * a) / 24.0;

  Matrix result = Matrix::Identity(n, n);
  for (std::size_t k = steps; k > 0; k >>= 1U) {
    if ((k & 1U) != 0U) result = step * result;
    if (k > 1) step = step * step;
  }
  if (!result.allFinite()) throw Error(ErrorCode::kNumerical, "integration produced non-finite values");
  return SuperOperator(dim, dim, std::move(result));
}

SuperOperator propagator(const Scenario& scenario, double t, const IntegrationOptions& options) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "evolution time must be non-negative");
  const LindbladGenerator gen = build_generator(scenario);
  const Matrix l = gen.liouvillian();
  const std::size_t steps = integration_steps(l, t, scenario.hamiltonian.period(), options);
  return rk4_propagator(l, gen.dim, t, steps);
}

QuantumChannel noisy_evolution(const HamiltonianSpec& h, const NoiseSpec& n, const LeakageModel& l,
                               double t, const IntegrationOptions& options) {
  const SuperOperator s = propagator(Scenario{h, n, l}, t, options);
  return QuantumChannel::from_choi(s.choi(), s.dim_in(), s.dim_out(), 1e-7, 1e-7);
}

Matrix hermitian_evolution(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  Vector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(-kI * es.eigenvalues()(i) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix not_unitary(double big_t) {
  // exp(i (T/2) sigma_x)
  Matrix u(2, 2);
  u << std::cos(big_t / 2.0), kI * std::sin(big_t / 2.0), kI * std::sin(big_t / 2.0), std::cos(big_t / 2.0);
  return u;
}

Matrix swap_unitary(double big_t) {
  Matrix heis = Matrix::Zero(4, 4);
  for (char a : {'x', 'y', 'z'}) heis += kron(pauli(a), pauli(a));
  return hermitian_evolution(0.25 * heis, big_t);
}

QuantumChannel ideal_not_channel(double big_t) {
  if (big_t < 0.0) throw Error(ErrorCode::kInvalidArgument, "T must be non-negative");
  return QuantumChannel::unitary(not_unitary(big_t));
}

QuantumChannel ideal_swap_channel(double big_t) {
  if (big_t < 0.0) throw Error(ErrorCode::kInvalidArgument, "T must be non-negative");
  return QuantumChannel::unitary(swap_unitary(big_t));
}

// --- hidden qubit ---------------------------------------------------------

HiddenQubitScenario::HiddenQubitScenario(std::vector<SwapEvent> schedule, double rate)
    : schedule_(std::move(schedule)), rate_(rate) {
  if (!(rate_ > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rate must be positive");
  double previous_end = 0.0;
  for (std::size_t k = 0; k < schedule_.size(); ++k) {
    const auto& e = schedule_[k];
    if (!(e.duration > 0.0) || e.start < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "swap events need start >= 0 and duration > 0");
    }
    if (k > 0 && e.start < previous_end) {
      throw Error(ErrorCode::kInvalidArgument, "overlapping schedule entries");
    }
    previous_end = e.start + e.duration;
  }
}

std::vector<SwapEvent> HiddenQubitScenario::default_schedule(double rate) {
  const double t = kPi / rate;
  return {{0.05 * t, 0.05 * t}, {0.85 * t, 0.05 * t}};
}

double HiddenQubitScenario::gate_time() const { return kPi / rate_; }

Matrix HiddenQubitScenario::composite_unitary(double t) const {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "time must be non-negative");
  const Matrix id = identity(2);
  const Matrix free = -0.5 * rate_ * (kron(pauli('x'), id) + kron(id, pauli('x')));
  Matrix heis = Matrix::Zero(4, 4);
  for (char a : {'x', 'y', 'z'}) heis += kron(pauli(a), pauli(a));

  Matrix u = identity(4);
  double now = 0.0;
  auto advance = [&](double until, const Matrix& h) {
    const double stop = std::min(until, t);
    if (stop > now) {
      u = hermitian_evolution(h, stop - now) * u;
      now = stop;
    }
  };
  for (const auto& e : schedule_) {
    advance(e.start, free);
    // J * duration = pi gives a complete exchange.
    advance(e.start + e.duration, free + 0.25 * (kPi / e.duration) * heis);
  }
  advance(t, free);
  return u;
}

DensityMatrix HiddenQubitScenario::composite_state(std::size_t prepared, double t) const {
  const DensityMatrix initial = tensor(DensityMatrix::basis(2, prepared), DensityMatrix::maximally_mixed(2));
  const Matrix u = composite_unitary(t);
  return DensityMatrix(Matrix(u * initial.matrix() * u.adjoint()));
}

QuantumChannel HiddenQubitScenario::system_channel(double t) const {
  const Matrix u = composite_unitary(t);
  std::vector<Matrix> kraus;
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      Matrix k(2, 2);
      for (Eigen::Index s_out = 0; s_out < 2; ++s_out)
        for (Eigen::Index s_in = 0; s_in < 2; ++s_in) k(s_out, s_in) = u(s_out * 2 + a, s_in * 2 + b);
      kraus.push_back(k / std::numbers::sqrt2);
    }
  }
  return QuantumChannel(std::move(kraus));
}

HiddenQubitScenario hidden_qubit_pathology(std::vector<SwapEvent> schedule, double rate) {
  return HiddenQubitScenario(std::move(schedule), rate);
}

}  // namespace sbcert
