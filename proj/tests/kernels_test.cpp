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
#include <vector>

#include "test_util.hpp"
#include "vff/kernels.hpp"

using namespace vff;

namespace {

std::vector<cplx> random_register(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(std::size_t{1} << n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

}  // namespace

TEST_CASE("apply_matrix matches the embedded dense gate") {
  std::mt19937_64 rng(1);
  const std::size_t n = 4;
  const std::vector<std::vector<std::size_t>> supports = {{0}, {3}, {1, 2}, {2, 0}, {3, 1, 0}};
  for (const auto& t : supports) {
    const Matrix g = haar_unitary(std::size_t{1} << t.size(), rng);
    auto v = random_register(n, rng);
    Vector ref = Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    ref = testing::embed(g, n, t) * ref;
    kernels::apply_matrix(v, n, t, g);
    double w = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) w = std::max(w, std::abs(v[i] - ref[static_cast<Eigen::Index>(i)]));
    CHECK(w < 1e-12);
  }
}

TEST_CASE("parallel kernels agree with the serial reference") {
  std::mt19937_64 rng(2);
  const std::size_t n = 14;  // above the OpenMP threshold
  REQUIRE((std::size_t{1} << n) >= kernels::kParallelThreshold);
  for (const std::vector<std::size_t>& t : {std::vector<std::size_t>{5}, {0, 13}, {7, 2, 9}}) {
    const Matrix g = haar_unitary(std::size_t{1} << t.size(), rng);
    auto a = random_register(n, rng);
    auto b = a;
    kernels::apply_matrix(a, n, t, g);
    kernels::apply_matrix_serial(b, n, t, g);
    CHECK(max_diff(a, b) < 1e-13);

    kernels::apply_zstring_phase(a, n, t, 0.37);
    kernels::apply_zstring_phase_serial(b, n, t, 0.37);
    CHECK(max_diff(a, b) < 1e-13);
  }
  // Density matrix of 7 system qubits is a 14-qubit register.
  auto a = random_register(n, rng);
  auto b = a;
  kernels::depolarize_qubit(a, 7, 3, 0.3);
  kernels::depolarize_qubit_serial(b, 7, 3, 0.3);
  CHECK(max_diff(a, b) < 1e-13);
}

TEST_CASE("apply_zstring_phase is the Z-string rotation") {
  std::mt19937_64 rng(3);
  const std::size_t n = 3;
  auto v = random_register(n, rng);
  Vector ref = Eigen::Map<Vector>(v.data(), 8);
  ref = testing::taylor_expm(testing::pauli_string("ZIZ"), 0.5 * 1.1) * ref;
  kernels::apply_zstring_phase(v, n, std::vector<std::size_t>{0, 2}, 1.1);
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(std::abs(v[static_cast<std::size_t>(i)] - ref[i]) < 1e-12);
}

TEST_CASE("prob_pair_zero sums the matching amplitudes") {
  std::mt19937_64 rng(4);
  auto v = random_register(3, rng);
  double norm = 0.0, p = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    norm += std::norm(v[i]);
    if (((i >> 2) & 1) == 0 && (i & 1) == 0) p += std::norm(v[i]);
  }
  for (auto& x : v) x /= std::sqrt(norm);
  CHECK(kernels::prob_pair_zero(v, 3, 0, 2) == doctest::Approx(p / norm).epsilon(1e-12));
}
