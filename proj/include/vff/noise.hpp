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

#include <cstddef>
#include <span>

#include "vff/circuit.hpp"
#include "vff/linalg.hpp"

namespace vff {

/// Per-gate depolarizing rates. A k-qubit gate is followed by a depolarizing
/// channel of strength p_k on its support.
struct NoiseModel {
  double p1 = 0.0002;
  double p2 = 0.002;

  static NoiseModel noiseless() { return {0.0, 0.0}; }
  bool is_noiseless() const { return p1 == 0.0 && p2 == 0.0; }
  void validate() const;
};

/// Density operator on n qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t n_qubits);  // |0..0><0..0|
  static DensityMatrix from_state(const Vector& psi);
  static DensityMatrix from_matrix(Matrix rho);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

  /// Storage viewed as a 2n-qubit register (column index on qubits 0..n-1).
  std::span<cplx> amplitudes() { return {rho_.data(), static_cast<std::size_t>(rho_.size())}; }

  /// rho <- G rho G^dagger for a bound gate.
  void apply_unitary_gate(const Gate& g);
  /// rho <- (1-p) rho + p Tr_S(rho) (x) I_S / 2^|S|.
  void depolarize(std::span<const std::size_t> support, double p);

  cplx trace() const { return rho_.trace(); }
  double expectation(const Vector& psi) const;  // <psi|rho|psi>
  double min_eigenvalue() const;
  double hermiticity_defect() const;

 private:
  std::size_t n_qubits_ = 0;
  Matrix rho_;
};

/// Runs `c` gate by gate: each gate is applied as a unitary conjugation and
/// then followed by depolarizing noise on its support (p1 for 1-qubit gates,
/// p2 for multi-qubit gates).
DensityMatrix apply_noisy_circuit(const Circuit& c, DensityMatrix rho, const NoiseModel& nm);

}  // namespace vff
