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

#include "sbcert/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "sbcert/error.hpp"

namespace sbcert {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

Eigen::VectorXd clamped_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol::kPsd) {
      throw Error(ErrorCode::kInvalidState, "matrix is not positive semidefinite");
    }
    ev(i) = std::max(ev(i), 0.0);
  }
  return ev;
}

}  // namespace

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "pure state needs at least one amplitude");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kNorm) {
    throw Error(ErrorCode::kInvalidState, "pure state amplitudes are not unit norm");
  }
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorCode::kInvalidArgument, "basis index out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidState, "density matrix must be square and non-empty");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian) {
    throw Error(ErrorCode::kInvalidState, "density matrix is not Hermitian");
  }
  m_ = 0.5 * (m + m.adjoint());
  if (std::abs(m_.trace().real() - 1.0) > tol::kTrace) {
    throw Error(ErrorCode::kInvalidState, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kPsd) {
    throw Error(ErrorCode::kInvalidState, "density matrix is not positive semidefinite");
  }
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : DensityMatrix(Matrix(psi.amplitudes() * psi.amplitudes().adjoint())) {}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Matrix(Matrix::Identity(n, n) / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t index) {
  return DensityMatrix(PureState::basis(dim, index));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }
double BlochVector::horizontal() const { return std::hypot(x, y); }

PureState MaximalSuperposition::state(std::size_t dim, std::size_t level_a, std::size_t level_b) const {
  if (level_a >= dim || level_b >= dim || level_a == level_b) {
    throw Error(ErrorCode::kInvalidArgument, "invalid superposition levels");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(level_a)) = std::numbers::sqrt2 / 2.0;
  v(static_cast<Eigen::Index>(level_b)) = std::polar(std::numbers::sqrt2 / 2.0, phase);
  return PureState(std::move(v));
}

Projector::Projector(std::size_t dim, std::vector<std::size_t> indices)
    : dim_(dim), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (indices_.empty() || std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end() ||
      indices_.back() >= dim_) {
    throw Error(ErrorCode::kInvalidArgument, "projector indices must be distinct and within range");
  }
}

Matrix Projector::matrix() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Matrix p = Matrix::Zero(n, n);
  for (auto i : indices_) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

double Projector::weight(const DensityMatrix& rho) const {
  if (rho.dim() != dim_) throw Error(ErrorCode::kDimensionMismatch, "projector/state dimension mismatch");
  double w = 0.0;
  for (auto i : indices_) w += rho.population(i);
  return w;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a, b);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

double fidelity_tr(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a, b);
  // Tr(AB) = sum_ij A_ij B_ji
  const double f = (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
  return std::clamp(f, 0.0, 1.0);
}

Matrix hermitian_sqrt(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol::kPsd) throw Error(ErrorCode::kInvalidState, "matrix is not positive semidefinite");
    ev(i) = ev(i) < tol::kClamp ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a, b);
  const Matrix root_a = hermitian_sqrt(a.matrix());
  Matrix inner = root_a * b.matrix() * root_a;
  inner = 0.5 * (inner + inner.adjoint());
  const Eigen::VectorXd ev = clamped_eigenvalues(inner);
  return std::clamp(ev.cwiseSqrt().sum(), 0.0, 1.0);
}

ProjectedState project_and_renormalize(const DensityMatrix& rho, const Projector& p) {
  const double w = p.weight(rho);
  if (w <= tol::kMinWeight) {
    throw Error(ErrorCode::kLeftSubspace, "state has left the subspace");
  }
  const auto k = static_cast<Eigen::Index>(p.rank());
  Matrix sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      sub(r, c) = rho.matrix()(static_cast<Eigen::Index>(p.indices()[r]),
                               static_cast<Eigen::Index>(p.indices()[c]));
    }
  }
  return ProjectedState{DensityMatrix(Matrix(sub / w)), w};
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error(ErrorCode::kDimensionMismatch, "Bloch vectors need a qubit state");
  const Complex off = rho.matrix()(1, 0);
  return BlochVector{2.0 * off.real(), 2.0 * off.imag(),
                     rho.matrix()(0, 0).real() - rho.matrix()(1, 1).real()};
}

DensityMatrix density_from_bloch(const BlochVector& v) {
  if (v.norm() > 1.0 + tol::kBlochRadius) {
    throw Error(ErrorCode::kInvalidState, "Bloch vector lies outside the unit ball");
  }
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + v.z);
  m(1, 1) = 0.5 * (1.0 - v.z);
  m(1, 0) = Complex(0.5 * v.x, 0.5 * v.y);
  m(0, 1) = std::conj(m(1, 0));
  return DensityMatrix(m);
}

PhaseFidelity max_superposition_fidelity(const DensityMatrix& rho) {
  const BlochVector v = bloch_from_density(rho);
  double phase = std::atan2(v.y, v.x);
  if (phase < 0.0) phase += 2.0 * std::numbers::pi;
  return PhaseFidelity{std::clamp(0.5 * (1.0 + v.horizontal()), 0.0, 1.0), phase};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace_second(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b) {
  if (rho.dim() != dim_a * dim_b) throw Error(ErrorCode::kDimensionMismatch, "partial trace dimensions");
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out = Matrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += rho.matrix()(i * db + k, j * db + k);
  return DensityMatrix(out);
}

DensityMatrix partial_trace_first(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b) {
  if (rho.dim() != dim_a * dim_b) throw Error(ErrorCode::kDimensionMismatch, "partial trace dimensions");
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += rho.matrix()(k * db + i, k * db + j);
  return DensityMatrix(out);
}

}  // namespace sbcert
