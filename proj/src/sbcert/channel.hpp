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

#pragma once

#include <cstddef>
#include <vector>

#include "sbcert/quantum.hpp"

namespace sbcert {

namespace tol {
inline constexpr double kCompleteness = 1e-9;
}  // namespace tol

class QuantumChannel;

/// Linear map on column-stacked density matrices:
/// vec(E(rho)) = m * vec(rho).
class SuperOperator {
 public:
  SuperOperator(std::size_t dim_in, std::size_t dim_out, Matrix m);

  static SuperOperator identity(std::size_t dim);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const Matrix& matrix() const { return m_; }

  /// Unvalidated application; callers decide whether to wrap the result in a
  /// DensityMatrix.
  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

  /// `this` first, then `next`.
  SuperOperator then(const SuperOperator& next) const;

  Matrix choi() const;

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  Matrix m_;
};

/// Completely positive trace-preserving map in Kraus form.
class QuantumChannel {
 public:
  /// Throws Error(kInvalidArgument) if the Kraus set is empty or shapes
  /// disagree, and Error(kNumerical) if sum K^dag K deviates from the identity
  /// by more than `completeness_tol`.
  explicit QuantumChannel(std::vector<Matrix> kraus, double completeness_tol = tol::kCompleteness);

  static QuantumChannel identity(std::size_t dim);
  static QuantumChannel unitary(const Matrix& u);

  /// Kraus decomposition of a Choi matrix sum_ab |a><b| (x) E(|a><b|).
  /// Eigenvalues in [-negativity_tol, 0) are clamped; anything more negative
  /// is a hard error since the map is then not completely positive.
  static QuantumChannel from_choi(const Matrix& choi, std::size_t dim_in, std::size_t dim_out,
                                  double negativity_tol = tol::kClamp,
                                  double completeness_tol = tol::kCompleteness);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  Matrix apply(const Matrix& rho) const;

  /// max |sum K^dag K - I| entrywise.
  double completeness_error() const;

  SuperOperator superoperator() const;
  Matrix choi() const;

 private:
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
  std::vector<Matrix> kraus_;
};

/// `first` then `second`. The Kraus set is recompressed through the Choi
/// matrix when the naive product would exceed dim_in * dim_out operators.
QuantumChannel compose(const QuantumChannel& first, const QuantumChannel& second);

}  // namespace sbcert
