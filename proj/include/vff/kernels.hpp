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

#pragma once

// Amplitude kernels. A register of `n` qubits is a contiguous array of 2^n
// complex amplitudes; qubit 0 is the most significant index bit. Unitaries
// and density matrices are handled as registers too: a column-major d x d
// matrix is a 2n-qubit register whose qubits 0..n-1 index the column and
// n..2n-1 index the row.
//
// Each kernel has an OpenMP version and a `_serial` reference with a
// different loop structure, kept for testing and benchmarking.

#include <cstddef>
#include <span>

#include "vff/linalg.hpp"

namespace vff::kernels {

/// Registers at or above this size use the OpenMP path.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;

/// amps <- G amps, G a 2^k x 2^k matrix on `targets` (k <= 3). targets[0]
/// is the most significant qubit of G's index.
void apply_matrix(std::span<cplx> amps, std::size_t n_qubits,
                  std::span<const std::size_t> targets, const Matrix& gate);
void apply_matrix_serial(std::span<cplx> amps, std::size_t n_qubits,
                         std::span<const std::size_t> targets, const Matrix& gate);

/// amps[i] *= exp(-i phi/2 * prod_{q in targets} z_q(i)), z = +1 for bit 0.
/// This is the Z-string rotation R_{Z..Z}(phi).
void apply_zstring_phase(std::span<cplx> amps, std::size_t n_qubits,
                         std::span<const std::size_t> targets, double phi);
void apply_zstring_phase_serial(std::span<cplx> amps, std::size_t n_qubits,
                                std::span<const std::size_t> targets, double phi);

/// Replace the density matrix (stored as a 2n-qubit register) by
/// Tr_q(rho) (x) I/2 on system qubit q, mixed with weight p:
/// rho <- (1-p) rho + p Tr_q(rho) (x) I/2.
void depolarize_qubit(std::span<cplx> rho, std::size_t n_system, std::size_t q, double p);
void depolarize_qubit_serial(std::span<cplx> rho, std::size_t n_system, std::size_t q,
                             double p);

/// Probability that system qubits (a, b) of a pure state are both 0.
double prob_pair_zero(std::span<const cplx> amps, std::size_t n_qubits, std::size_t a,
                      std::size_t b);

}  // namespace vff::kernels
