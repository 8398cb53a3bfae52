/* Copyright 2026 The qoctl Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qoc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Relative Frobenius tolerance used for every Hermiticity check.
inline constexpr double kHermitianTolerance = 1e-10;

// Eigen-decomposition of a Hermitian operator. Eigenvalues ascend and the
// eigenvector columns are orthonormal.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  /// V diag(exp(-i lambda t)) V^dagger.
  ComplexMatrix exp_i(double t) const;
};

/// Hilbert-Schmidt overlap Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||h - h^dagger||_F / ||h||_F, zero for the zero matrix.
double hermitian_deviation(const ComplexMatrix& h);

/// ||u^dagger u - I||_F.
double unitarity_deviation(const ComplexMatrix& u);

/// Returns (h + h^dagger)/2, throwing ValidationError when h is square but
/// further than kHermitianTolerance from Hermitian.
ComplexMatrix hermitian_part_checked(const ComplexMatrix& h);

Spectrum eig_hermitian(const ComplexMatrix& h);

/// exp(-i h t) for Hermitian h, via the spectral decomposition.
ComplexMatrix matrix_exp_i(const ComplexMatrix& h, double t);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; a is the leftmost tensor factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace qoc
