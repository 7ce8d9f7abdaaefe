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

#include "vff/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vff::kernels {
namespace {

constexpr std::size_t kMaxTargets = 3;

struct TargetLayout {
  std::size_t k = 0;
  std::array<std::size_t, 1U << kMaxTargets> offsets{};
  std::array<std::size_t, kMaxTargets> sorted_pos{};  // ascending bit positions
  std::size_t mask = 0;
};

TargetLayout layout_for(std::size_t n_qubits, std::span<const std::size_t> targets) {
  TargetLayout t;
  t.k = targets.size();
  if (t.k == 0 || t.k > kMaxTargets) {
    throw std::invalid_argument("kernel supports 1..3 target qubits");
  }
  for (std::size_t i = 0; i < t.k; ++i) {
    if (targets[i] >= n_qubits) throw std::out_of_range("target qubit out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw std::invalid_argument("repeated target qubit");
    }
    t.sorted_pos[i] = n_qubits - 1 - targets[i];
    t.mask |= std::size_t{1} << t.sorted_pos[i];
  }
  for (std::size_t m = 0; m < (std::size_t{1} << t.k); ++m) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < t.k; ++i) {
      if ((m >> (t.k - 1 - i)) & 1U) off |= std::size_t{1} << (n_qubits - 1 - targets[i]);
    }
    t.offsets[m] = off;
  }
  std::sort(t.sorted_pos.begin(), t.sorted_pos.begin() + static_cast<std::ptrdiff_t>(t.k));
  return t;
}

inline std::size_t insert_zero_bits(std::size_t base, const TargetLayout& t) {
  for (std::size_t i = 0; i < t.k; ++i) {
    const std::size_t pos = t.sorted_pos[i];
    const std::size_t low = base & ((std::size_t{1} << pos) - 1);
    base = ((base >> pos) << (pos + 1)) | low;
  }
  return base;
}

void check_register(std::span<const cplx> amps, std::size_t n_qubits) {
  if (amps.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("register size does not match qubit count");
  }
}

}  // namespace

void apply_matrix(std::span<cplx> amps, std::size_t n_qubits,
                  std::span<const std::size_t> targets, const Matrix& gate) {
  check_register(amps, n_qubits);
  const TargetLayout t = layout_for(n_qubits, targets);
  const std::size_t sub = std::size_t{1} << t.k;
  if (static_cast<std::size_t>(gate.rows()) != sub || static_cast<std::size_t>(gate.cols()) != sub) {
    throw std::invalid_argument("gate matrix size does not match target count");
  }
  const auto groups = static_cast<std::int64_t>(amps.size() >> t.k);
  cplx* data = amps.data();
  const cplx* g = gate.data();  // column-major
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelThreshold)
  for (std::int64_t b = 0; b < groups; ++b) {
    const std::size_t base = insert_zero_bits(static_cast<std::size_t>(b), t);
    std::array<cplx, 1U << kMaxTargets> in{};
    for (std::size_t m = 0; m < sub; ++m) in[m] = data[base + t.offsets[m]];
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c) acc += g[c * sub + r] * in[c];
      data[base + t.offsets[r]] = acc;
    }
  }
}

void apply_matrix_serial(std::span<cplx> amps, std::size_t n_qubits,
                         std::span<const std::size_t> targets, const Matrix& gate) {
  check_register(amps, n_qubits);
  const TargetLayout t = layout_for(n_qubits, targets);
  const std::size_t sub = std::size_t{1} << t.k;
  if (static_cast<std::size_t>(gate.rows()) != sub) {
    throw std::invalid_argument("gate matrix size does not match target count");
  }
  const std::vector<cplx> in(amps.begin(), amps.end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t row = 0;
    for (std::size_t m = 0; m < sub; ++m) {
      if ((i & t.mask) == t.offsets[m]) row = m;
    }
    const std::size_t base = i & ~t.mask;
    cplx acc = 0.0;
    for (std::size_t m = 0; m < sub; ++m) {
      acc += gate(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(m)) *
             in[base | t.offsets[m]];
    }
    amps[i] = acc;
  }
}

void apply_zstring_phase(std::span<cplx> amps, std::size_t n_qubits,
                         std::span<const std::size_t> targets, double phi) {
  check_register(amps, n_qubits);
  std::size_t mask = 0;
  for (std::size_t q : targets) {
    if (q >= n_qubits) throw std::out_of_range("target qubit out of range");
    mask |= std::size_t{1} << (n_qubits - 1 - q);
  }
  const cplx even = std::polar(1.0, -phi / 2);
  const cplx odd = std::conj(even);
  cplx* data = amps.data();
  const auto size = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelThreshold)
  for (std::int64_t i = 0; i < size; ++i) {
    data[i] *= (std::popcount(static_cast<std::size_t>(i) & mask) & 1U) ? odd : even;
  }
}

void apply_zstring_phase_serial(std::span<cplx> amps, std::size_t n_qubits,
                                std::span<const std::size_t> targets, double phi) {
  check_register(amps, n_qubits);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    double z = 1.0;
    for (std::size_t q : targets) {
      if ((i >> (n_qubits - 1 - q)) & 1U) z = -z;
    }
    amps[i] *= std::exp(cplx(0.0, -phi / 2 * z));
  }
}

void depolarize_qubit(std::span<cplx> rho, std::size_t n_system, std::size_t q, double p) {
  check_register(rho, 2 * n_system);
  if (q >= n_system) throw std::out_of_range("depolarize_qubit: qubit out of range");
  // Register qubit q is the column copy, n+q the row copy.
  const std::size_t n = 2 * n_system;
  const std::size_t col_bit = std::size_t{1} << (n - 1 - q);
  const std::size_t row_bit = std::size_t{1} << (n - 1 - (n_system + q));
  std::array<std::size_t, 2> targets{q, n_system + q};
  const TargetLayout t = layout_for(n, targets);
  const auto groups = static_cast<std::int64_t>(rho.size() >> 2);
  cplx* data = rho.data();
#pragma omp parallel for schedule(static) if (rho.size() >= kParallelThreshold)
  for (std::int64_t b = 0; b < groups; ++b) {
    const std::size_t base = insert_zero_bits(static_cast<std::size_t>(b), t);
    cplx& e00 = data[base];
    cplx& e11 = data[base | col_bit | row_bit];
    const cplx avg = 0.5 * (e00 + e11);
    e00 = (1.0 - p) * e00 + p * avg;
    e11 = (1.0 - p) * e11 + p * avg;
    data[base | col_bit] *= (1.0 - p);
    data[base | row_bit] *= (1.0 - p);
  }
}

void depolarize_qubit_serial(std::span<cplx> rho, std::size_t n_system, std::size_t q,
                             double p) {
  // Pauli twirl: (1-p) rho + p/4 sum_P P rho P.
  check_register(rho, 2 * n_system);
  Matrix paulis[4] = {Matrix::Identity(2, 2), Matrix(2, 2), Matrix(2, 2), Matrix(2, 2)};
  paulis[1] << 0, 1, 1, 0;
  paulis[2] << 0, cplx(0, -1), cplx(0, 1), 0;
  paulis[3] << 1, 0, 0, -1;
  std::vector<cplx> acc(rho.size(), cplx(0.0));
  const std::size_t n = 2 * n_system;
  for (const Matrix& pauli : paulis) {
    std::vector<cplx> tmp(rho.begin(), rho.end());
    const std::size_t row_target[1] = {n_system + q};
    const std::size_t col_target[1] = {q};
    apply_matrix_serial(tmp, n, row_target, pauli);
    apply_matrix_serial(tmp, n, col_target, pauli.conjugate());
    for (std::size_t i = 0; i < tmp.size(); ++i) acc[i] += 0.25 * p * tmp[i];
  }
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = (1.0 - p) * rho[i] + acc[i];
}

double prob_pair_zero(std::span<const cplx> amps, std::size_t n_qubits, std::size_t a,
                      std::size_t b) {
  check_register(amps, n_qubits);
  const std::size_t mask =
      (std::size_t{1} << (n_qubits - 1 - a)) | (std::size_t{1} << (n_qubits - 1 - b));
  double p = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) == 0) p += std::norm(amps[i]);
  }
  return p;
}

}  // namespace vff::kernels
