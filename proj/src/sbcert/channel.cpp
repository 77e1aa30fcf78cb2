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

#include "sbcert/channel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sbcert/error.hpp"

namespace sbcert {

namespace {

Matrix vec(const Matrix& m) {
  return Eigen::Map<const Matrix>(m.data(), m.size(), 1);
}

Matrix unvec(const Matrix& v, Eigen::Index rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

}  // namespace

SuperOperator::SuperOperator(std::size_t dim_in, std::size_t dim_out, Matrix m)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
  if (m_.rows() != static_cast<Eigen::Index>(dim_out * dim_out) ||
      m_.cols() != static_cast<Eigen::Index>(dim_in * dim_in)) {
    throw Error(ErrorCode::kDimensionMismatch, "superoperator shape does not match dimensions");
  }
}

SuperOperator SuperOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim * dim);
  return SuperOperator(dim, dim, Matrix::Identity(n, n));
}

Matrix SuperOperator::apply(const Matrix& rho) const {
  if (rho.rows() != static_cast<Eigen::Index>(dim_in_) || rho.cols() != rho.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match channel input");
  }
  return unvec(m_ * vec(rho), static_cast<Eigen::Index>(dim_out_));
}

DensityMatrix SuperOperator::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()));
}

SuperOperator SuperOperator::then(const SuperOperator& next) const {
  if (dim_out_ != next.dim_in_) throw Error(ErrorCode::kDimensionMismatch, "cannot compose superoperators");
  return SuperOperator(dim_in_, next.dim_out_, next.m_ * m_);
}

Matrix SuperOperator::choi() const {
  const auto din = static_cast<Eigen::Index>(dim_in_);
  const auto dout = static_cast<Eigen::Index>(dim_out_);
  Matrix c = Matrix::Zero(din * dout, din * dout);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      // E(|a><b|) is column a + b*din of the column-stacked superoperator.
      c.block(a * dout, b * dout, dout, dout) = unvec(m_.col(a + b * din), dout);
    }
  }
  return c;
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, double completeness_tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorCode::kInvalidArgument, "channel needs at least one Kraus operator");
  dim_out_ = static_cast<std::size_t>(kraus_.front().rows());
  dim_in_ = static_cast<std::size_t>(kraus_.front().cols());
  for (const auto& k : kraus_) {
    if (static_cast<std::size_t>(k.rows()) != dim_out_ || static_cast<std::size_t>(k.cols()) != dim_in_) {
      throw Error(ErrorCode::kInvalidArgument, "Kraus operators have inconsistent shapes");
    }
  }
  if (completeness_error() > completeness_tol) {
    throw Error(ErrorCode::kNumerical, "Kraus operators are not trace preserving");
  }
}

QuantumChannel QuantumChannel::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return QuantumChannel({Matrix::Identity(n, n)});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) { return QuantumChannel({u}); }

QuantumChannel QuantumChannel::from_choi(const Matrix& choi, std::size_t dim_in, std::size_t dim_out,
                                         double negativity_tol, double completeness_tol) {
  const auto din = static_cast<Eigen::Index>(dim_in);
  const auto dout = static_cast<Eigen::Index>(dim_out);
  if (choi.rows() != din * dout || choi.cols() != din * dout) {
    throw Error(ErrorCode::kDimensionMismatch, "Choi matrix shape does not match dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()));
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -negativity_tol) {
      throw Error(ErrorCode::kNumerical, "Choi matrix has a negative eigenvalue: map is not completely positive");
    }
    if (lambda <= tol::kClamp) continue;
    Matrix op(dout, din);
    for (Eigen::Index a = 0; a < din; ++a) {
      op.col(a) = std::sqrt(lambda) * es.eigenvectors().col(k).segment(a * dout, dout);
    }
    kraus.push_back(std::move(op));
  }
  return QuantumChannel(std::move(kraus), completeness_tol);
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  if (rho.rows() != static_cast<Eigen::Index>(dim_in_) || rho.cols() != rho.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match channel input");
  }
  const auto n = static_cast<Eigen::Index>(dim_out_);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()));
}

double QuantumChannel::completeness_error() const {
  const auto n = static_cast<Eigen::Index>(dim_in_);
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

SuperOperator QuantumChannel::superoperator() const {
  const auto nin = static_cast<Eigen::Index>(dim_in_ * dim_in_);
  const auto nout = static_cast<Eigen::Index>(dim_out_ * dim_out_);
  Matrix m = Matrix::Zero(nout, nin);
  // vec(K rho K^dag) = (conj(K) (x) K) vec(rho)
  for (const auto& k : kraus_) m.noalias() += kron(k.conjugate(), k);
  return SuperOperator(dim_in_, dim_out_, std::move(m));
}

Matrix QuantumChannel::choi() const { return superoperator().choi(); }

QuantumChannel compose(const QuantumChannel& first, const QuantumChannel& second) {
  if (first.dim_out() != second.dim_in()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot compose channels: dimension mismatch");
  }
  const std::size_t naive = first.kraus().size() * second.kraus().size();
  if (naive > first.dim_in() * second.dim_out()) {
    const SuperOperator s = first.superoperator().then(second.superoperator());
    return QuantumChannel::from_choi(s.choi(), first.dim_in(), second.dim_out(), 1e-10);
  }
  std::vector<Matrix> kraus;
  kraus.reserve(naive);
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) kraus.push_back(b * a);
  }
  return QuantumChannel(std::move(kraus));
}

}  // namespace sbcert
