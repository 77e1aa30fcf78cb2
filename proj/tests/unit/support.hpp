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

// Reference computations shared by the unit tests. These avoid the code
// paths they are used to check.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "sbcert/quantum.hpp"

namespace sbcert::testing {

inline constexpr double kPi = std::numbers::pi;

/// Half the sum of singular values of a - b.
inline double svd_trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

/// (|0> + e^{i phi}|1>) (<0| + e^{-i phi}<1|) / 2 written out entrywise.
inline Matrix max_superposition_matrix(double phi) {
  Matrix m(2, 2);
  m << 0.5, 0.5 * std::polar(1.0, -phi), 0.5 * std::polar(1.0, phi), 0.5;
  return m;
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// (I + x X + y Y + z Z) / 2.
inline Matrix bloch_matrix(double x, double y, double z) {
  return 0.5 * (Matrix::Identity(2, 2) + x * pauli_x() + y * pauli_y() + z * pauli_z());
}

/// Max over a fine phase grid of <psi_M(phi)|rho|psi_M(phi)> for a qubit.
inline double grid_max_superposition(const Matrix& rho, int steps = 200000) {
  double best = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double phi = 2.0 * kPi * k / steps;
    best = std::max(best, (max_superposition_matrix(phi) * rho).trace().real());
  }
  return best;
}

}  // namespace sbcert::testing
