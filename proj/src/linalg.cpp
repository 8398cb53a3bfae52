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

#include "qoc/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qoc/error.hpp"

namespace qoc {
namespace {

void require_square(const ComplexMatrix& m, const char* op) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << op << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ComplexMatrix Spectrum::exp_i(double t) const {
  const Eigen::Index n = eigenvalues.size();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(1.0, -eigenvalues(k) * t);
  }
  return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  // Tr(a^dagger b) = sum_ij conj(a_ij) b_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

double hermitian_deviation(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  const double norm = h.norm();
  if (norm == 0.0) return 0.0;
  return (h - h.adjoint()).norm() / norm;
}

double unitarity_deviation(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

ComplexMatrix hermitian_part_checked(const ComplexMatrix& h) {
  require_square(h, "hermitian check");
  const double dev = hermitian_deviation(h);
  if (!(dev <= kHermitianTolerance)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (relative deviation " << dev << ")";
    throw ValidationError(os.str());
  }
  return (h + h.adjoint()) * 0.5;
}

Spectrum eig_hermitian(const ComplexMatrix& h) {
  const ComplexMatrix sym = hermitian_part_checked(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eig_hermitian: eigensolver did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_exp_i(const ComplexMatrix& h, double t) {
  if (!std::isfinite(t)) throw ValidationError("matrix_exp_i: non-finite time");
  if (t == 0.0) {
    require_square(h, "matrix_exp_i");
    hermitian_part_checked(h);
    return ComplexMatrix::Identity(h.rows(), h.cols());
  }
  return eig_hermitian(h).exp_i(t);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli
}  // namespace qoc
