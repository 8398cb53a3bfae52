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

#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qoc/error.hpp"
#include "qoc/linalg.hpp"

using namespace qoc;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("hs_inner on Paulis and against a loop sum") {
  CHECK(std::abs(hs_inner(pauli::x(), pauli::x()) - Complex(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(hs_inner(pauli::x(), pauli::y())) < 1e-15);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix a = oracle::random_matrix(4, rng);
    const ComplexMatrix b = oracle::random_matrix(4, rng);
    CHECK(std::abs(hs_inner(a, b) - oracle::loop_inner(a, b)) < 1e-12);
  }
  CHECK_THROWS_AS(hs_inner(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("eig_hermitian") {
  const Spectrum z = eig_hermitian(pauli::z());
  CHECK(z.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(z.eigenvalues(1) == doctest::Approx(1.0));

  const Spectrum id = eig_hermitian(ComplexMatrix::Identity(2, 2));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));
  CHECK((id.eigenvectors.adjoint() * id.eigenvectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  const Spectrum x = eig_hermitian(pauli::x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  const double r = 1.0 / std::sqrt(2.0);
  // (|0> - |1>)/sqrt2 up to phase
  CHECK(std::abs(std::abs(x.eigenvectors(0, 0)) - r) < 1e-12);
  CHECK(std::abs(x.eigenvectors(0, 0) + x.eigenvectors(1, 0)) < 1e-12);
  CHECK(std::abs(x.eigenvectors(0, 1) - x.eigenvectors(1, 1)) < 1e-12);

  ComplexMatrix bad = pauli::x();
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(eig_hermitian(bad), ValidationError);
  CHECK_THROWS_AS(eig_hermitian(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("matrix_exp_i") {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = oracle::random_hermitian(4, rng);
  CHECK((matrix_exp_i(h, 0.0) - ComplexMatrix::Identity(4, 4)).norm() < 1e-14);
  const ComplexMatrix u = matrix_exp_i(std::numbers::pi / 2.0 * pauli::x(), 1.0);
  CHECK((u - (-I) * pauli::x()).norm() < 1e-14);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix hk = oracle::random_hermitian(4, rng);
    const double t = 0.1 + 0.3 * k;
    CHECK((matrix_exp_i(hk, t) - oracle::taylor_exp(hk, t)).norm() < 1e-12);
  }
}

TEST_CASE("commutator") {
  CHECK((commutator(pauli::x(), pauli::y()) - 2.0 * I * pauli::z()).norm() < 1e-15);
  std::mt19937_64 rng(5);
  const ComplexMatrix h = oracle::random_hermitian(3, rng);
  CHECK(commutator(h, h).norm() < 1e-14);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(commutator(kron(pauli::z(), i2), kron(i2, pauli::x())).norm() < 1e-15);
}

TEST_CASE("deviation measures") {
  CHECK(hermitian_deviation(ComplexMatrix::Zero(2, 2)) == 0.0);
  CHECK(unitarity_deviation(pauli::y()) < 1e-15);
  CHECK(unitarity_deviation(2.0 * pauli::y()) > 1.0);
  CHECK_THROWS_AS(hermitian_part_checked(I * pauli::x()), ValidationError);
}
