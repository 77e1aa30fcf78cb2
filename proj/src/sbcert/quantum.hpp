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

// Density matrices, pure states, Bloch vectors and the distance measures the
// certificates are built from.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sbcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNorm = 1e-12;
// Eigenvalues in [-kClamp, 0) are treated as round-off and set to zero.
inline constexpr double kClamp = 1e-12;
inline constexpr double kBlochRadius = 1e-10;
inline constexpr double kMinWeight = 1e-12;
}  // namespace tol

class PureState {
 public:
  explicit PureState(Vector amplitudes);

  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Vector amplitudes_;
};

/// A validated state: Hermitian, positive semidefinite and unit trace.
///
/// Construction checks the invariants against the tolerances in `tol` and
/// throws `Error(kInvalidState)` when they fail. The stored matrix is
/// symmetrized so downstream eigensolvers see an exactly Hermitian input.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m);
  DensityMatrix(const PureState& psi);  // NOLINT: pure states are states

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double population(std::size_t index) const { return m_(index, index).real(); }
  Eigen::VectorXd populations() const { return m_.diagonal().real(); }

 private:
  Matrix m_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double horizontal() const;
};

/// The maximal superposition (|a> + e^{i phase}|b>)/sqrt(2) on two basis
/// levels of a `dim`-level space. With the defaults it is the single-qubit
/// target state.
struct MaximalSuperposition {
  double phase = 0.0;

  PureState state(std::size_t dim = 2, std::size_t level_a = 0, std::size_t level_b = 1) const;
};

/// Orthogonal projector onto the span of a set of computational basis states.
class Projector {
 public:
  Projector(std::size_t dim, std::vector<std::size_t> indices);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return indices_.size(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  Matrix matrix() const;
  double weight(const DensityMatrix& rho) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> indices_;
};

struct ProjectedState {
  DensityMatrix state;  // lives on the projector's subspace, dim = rank
  double weight;        // Tr(P rho)
};

struct PhaseFidelity {
  double fidelity;
  double phase;  // in [0, 2pi)
};

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Tr(a b). Equals <psi|b|psi> when a = |psi><psi|.
double fidelity_tr(const DensityMatrix& a, const DensityMatrix& b);

/// Tr sqrt(sqrt(a) b sqrt(a)).
double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b);

ProjectedState project_and_renormalize(const DensityMatrix& rho, const Projector& p);

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& v);

/// max over phi of Tr(psi_M(phi) rho) for a qubit, in closed form:
/// (1 + sqrt(x^2 + y^2)) / 2 attained at phi = atan2(y, x).
PhaseFidelity max_superposition_fidelity(const DensityMatrix& rho);

// Linear-algebra helpers shared across modules.

/// Hermitian square root with eigenvalue clamping; throws on negativity
/// beyond tol::kPsd.
Matrix hermitian_sqrt(const Matrix& h);
Matrix kron(const Matrix& a, const Matrix& b);
DensityMatrix partial_trace_second(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b);
DensityMatrix partial_trace_first(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace sbcert
