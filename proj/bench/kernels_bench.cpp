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

// OpenMP kernels against their serial references. The argument is the
// register width in qubits.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "vff/circuit.hpp"
#include "vff/kernels.hpp"

namespace {

using vff::cplx;

std::vector<cplx> random_amps(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> a(std::size_t{1} << n);
  for (auto& x : a) x = {g(rng), g(rng)};
  return a;
}

template <bool Parallel>
void BM_OneQubitGate(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto amps = random_amps(n);
  const vff::Matrix gate = vff::rotation_matrix(vff::GateKind::Rx, 0.3);
  const std::size_t t[] = {n / 2};
  for (auto _ : st) {
    if constexpr (Parallel) {
      vff::kernels::apply_matrix(amps, n, t, gate);
    } else {
      vff::kernels::apply_matrix_serial(amps, n, t, gate);
    }
    benchmark::DoNotOptimize(amps.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

template <bool Parallel>
void BM_TwoQubitGate(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto amps = random_amps(n);
  const vff::Matrix gate = vff::rotation_matrix(vff::GateKind::XX, 0.3, 2);
  const std::size_t t[] = {0, n - 1};
  for (auto _ : st) {
    if constexpr (Parallel) {
      vff::kernels::apply_matrix(amps, n, t, gate);
    } else {
      vff::kernels::apply_matrix_serial(amps, n, t, gate);
    }
    benchmark::DoNotOptimize(amps.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

template <bool Parallel>
void BM_ZStringPhase(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto amps = random_amps(n);
  const std::size_t t[] = {0, 1, n - 1};
  for (auto _ : st) {
    if constexpr (Parallel) {
      vff::kernels::apply_zstring_phase(amps, n, t, 0.1);
    } else {
      vff::kernels::apply_zstring_phase_serial(amps, n, t, 0.1);
    }
    benchmark::DoNotOptimize(amps.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

// Argument: system qubits of the density matrix (2n-qubit storage).
template <bool Parallel>
void BM_Depolarize(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto rho = random_amps(2 * n);
  for (auto _ : st) {
    if constexpr (Parallel) {
      vff::kernels::depolarize_qubit(rho, n, 0, 0.01);
    } else {
      vff::kernels::depolarize_qubit_serial(rho, n, 0, 0.01);
    }
    benchmark::DoNotOptimize(rho.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(rho.size()));
}

}  // namespace

BENCHMARK(BM_OneQubitGate<false>)->DenseRange(8, 20, 4);
BENCHMARK(BM_OneQubitGate<true>)->DenseRange(8, 20, 4);
BENCHMARK(BM_TwoQubitGate<false>)->DenseRange(8, 20, 4);
BENCHMARK(BM_TwoQubitGate<true>)->DenseRange(8, 20, 4);
BENCHMARK(BM_ZStringPhase<false>)->DenseRange(8, 20, 4);
BENCHMARK(BM_ZStringPhase<true>)->DenseRange(8, 20, 4);
BENCHMARK(BM_Depolarize<false>)->DenseRange(3, 5, 1);
BENCHMARK(BM_Depolarize<true>)->DenseRange(3, 5, 1);

BENCHMARK_MAIN();
