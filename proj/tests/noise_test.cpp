// Copyright 2026 The VFF Authors
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

#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "vff/noise.hpp"

using namespace vff;
using vff::testing::max_abs_diff;
using vff::testing::pauli_string;

namespace {

/// Depolarizing channel on `support` as an explicit Kraus sum over the
/// 4^k Pauli strings: rho -> (1 - p) rho + p/4^k sum_P P rho P.
Matrix kraus_depolarize(const Matrix& rho, std::size_t n, const std::vector<std::size_t>& support, double p) {
  const std::size_t k = support.size();
  Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
  const char paulis[] = {'I', 'X', 'Y', 'Z'};
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    std::string s(n, 'I');
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      s[support[i]] = paulis[c % 4];
      c /= 4;
    }
    const Matrix pm = pauli_string(s);
    acc += pm * rho * pm.adjoint();
  }
  return (1.0 - p) * rho + (p / static_cast<double>(total)) * acc;
}

}  // namespace

TEST_CASE("depolarize matches the Pauli Kraus sum") {
  std::mt19937_64 rng(1);
  const std::size_t n = 3;
  const Matrix m = testing::random_hermitian(8, rng);
  Matrix rho = m * m;
  rho /= rho.trace().real();
  for (const std::vector<std::size_t>& s : {std::vector<std::size_t>{1}, {0, 2}}) {
    DensityMatrix dm = DensityMatrix::from_matrix(rho);
    dm.depolarize(s, 0.37);
    CHECK(max_abs_diff(dm.matrix(), kraus_depolarize(rho, n, s, 0.37)) < 1e-12);
  }
}

TEST_CASE("p1 = 1 fully depolarizes the support qubit") {
  std::mt19937_64 rng(2);
  DensityMatrix dm = DensityMatrix::from_state(haar_state(2, rng));
  Circuit c(1);
  c.add(Gate::rotation(GateKind::Ry, {0}, 0.7));
  dm = apply_noisy_circuit(c, dm, NoiseModel{1.0, 0.0});
  CHECK(max_abs_diff(dm.matrix(), 0.5 * Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("two-gate noisy circuit matches manual channel composition") {
  std::mt19937_64 rng(3);
  const Vector psi = haar_state(4, rng);
  Circuit c(2);
  c.add(Gate::cnot(0, 1));
  c.add(Gate::rotation(GateKind::Rx, {1}, 0.4));
  const NoiseModel nm{0.005, 0.01};
  const DensityMatrix out = apply_noisy_circuit(c, DensityMatrix::from_state(psi), nm);

  Matrix rho = psi * psi.adjoint();
  const Matrix g1 = c.gates()[0].matrix();
  rho = kraus_depolarize(g1 * rho * g1.adjoint(), 2, {0, 1}, nm.p2);
  const Matrix g2 = testing::embed(c.gates()[1].matrix(), 2, {1});
  rho = kraus_depolarize(g2 * rho * g2.adjoint(), 2, {1}, nm.p1);
  CHECK(max_abs_diff(out.matrix(), rho) < 1e-12);
}

TEST_CASE("noiseless circuit evolves a pure state unitarily") {
  std::mt19937_64 rng(4);
  const Vector psi = haar_state(8, rng);
  Circuit c(3);
  c.add(Gate::hadamard(0));
  c.add(Gate::cnot(0, 2));
  c.add(Gate::rotation(GateKind::ZZ, {1, 2}, 0.3));
  const DensityMatrix out = apply_noisy_circuit(c, DensityMatrix::from_state(psi), NoiseModel::noiseless());
  Vector phi = psi;
  apply_circuit(c, phi);
  CHECK(out.expectation(phi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.hermiticity_defect() < 1e-12);
}

TEST_CASE("noise model validation") {
  CHECK_THROWS(NoiseModel{-0.1, 0.0}.validate());
  CHECK_THROWS(NoiseModel{0.0, 1.5}.validate());
  CHECK_NOTHROW(NoiseModel{}.validate());
  CHECK(NoiseModel{}.p1 == 0.0002);
  CHECK(NoiseModel{}.p2 == 0.002);
}
