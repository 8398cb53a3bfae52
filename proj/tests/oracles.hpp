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

// Reference implementations used only by the tests. They avoid the library
// code paths they check.
#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <vector>

#include "qoc/linalg.hpp"

namespace oracle {

using qoc::Complex;
using qoc::ComplexMatrix;

inline ComplexMatrix random_matrix(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) m(i, k) = Complex(g(rng), g(rng));
  }
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix a = random_matrix(d, rng, scale);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(d, rng);
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

// exp(-i h t) by Taylor series after scaling by 2^s, then squaring s times.
inline ComplexMatrix taylor_exp(const ComplexMatrix& h, double t) {
  const Eigen::Index d = h.rows();
  ComplexMatrix a = Complex(0.0, -t) * h;
  int s = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    a /= 2.0;
    norm /= 2.0;
    ++s;
  }
  ComplexMatrix sum = ComplexMatrix::Identity(d, d);
  ComplexMatrix term = ComplexMatrix::Identity(d, d);
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline Complex loop_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) acc += std::conj(a(i, k)) * b(i, k);
  }
  return acc;
}

// Column-stacking vec: vec(A X B) = (B^T kron A) vec(X).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return out;
}

inline ComplexMatrix unitary_superop(const ComplexMatrix& u) { return kron(u.conjugate(), u); }

inline ComplexMatrix kraus_superop(const std::vector<ComplexMatrix>& kraus) {
  const Eigen::Index d = kraus.front().rows();
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) s += kron(k.conjugate(), k);
  return s;
}

inline qoc::ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const qoc::ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvec(const qoc::ComplexVector& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline double uhlmann(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix s = sqrt_psd(a);
  const ComplexMatrix inner = sqrt_psd(s * b * s);
  const double tr = inner.trace().real();
  return tr * tr;
}

inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace oracle
