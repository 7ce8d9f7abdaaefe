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

#include "vff/noise.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "vff/kernels.hpp"

namespace vff {

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("noise rates must lie in [0, 1] (p1=" + std::to_string(p1) +
                                ", p2=" + std::to_string(p2) + ")");
  }
}

DensityMatrix::DensityMatrix(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > kMaxQubits) throw std::invalid_argument("density matrix too large");
  const auto d = Eigen::Index{1} << static_cast<int>(n_qubits);
  rho_ = Matrix::Zero(d, d);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_state(const Vector& psi) {
  DensityMatrix out(qubits_for_dim(static_cast<std::size_t>(psi.size())));
  out.rho_ = psi * psi.adjoint();
  return out;
}

DensityMatrix DensityMatrix::from_matrix(Matrix rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  DensityMatrix out(qubits_for_dim(static_cast<std::size_t>(rho.rows())));
  out.rho_ = std::move(rho);
  return out;
}

void DensityMatrix::apply_unitary_gate(const Gate& g) {
  const std::size_t n = n_qubits_;
  // Left factor acts on the row copy (qubits n..2n-1), the right factor
  // G^dagger acts on the column copy as conj(G).
  Gate rows = g;
  for (auto& t : rows.targets) t += n;
  apply_gate(amplitudes(), 2 * n, rows);
  apply_gate(amplitudes(), 2 * n, g.conjugate());
}

void DensityMatrix::depolarize(std::span<const std::size_t> support, double p) {
  if (p == 0.0) return;
  // Full depolarization on S is the product of single-qubit full
  // depolarizers; mix it in with weight p.
  if (support.size() == 1) {
    kernels::depolarize_qubit(amplitudes(), n_qubits_, support[0], p);
    return;
  }
  Matrix full = rho_;
  std::span<cplx> view(full.data(), static_cast<std::size_t>(full.size()));
  for (std::size_t q : support) kernels::depolarize_qubit(view, n_qubits_, q, 1.0);
  rho_ = (1.0 - p) * rho_ + p * full;
}

double DensityMatrix::expectation(const Vector& psi) const {
  return (psi.adjoint() * rho_ * psi)(0, 0).real();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
  return hermitian_eigenvalues(herm).minCoeff();
}

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix apply_noisy_circuit(const Circuit& c, DensityMatrix rho, const NoiseModel& nm) {
  nm.validate();
  if (c.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument("apply_noisy_circuit: circuit and state widths differ");
  }
  for (const Gate& g : c.gates()) {
    rho.apply_unitary_gate(g);
    rho.depolarize(g.targets, g.arity() == 1 ? nm.p1 : nm.p2);
  }
  return rho;
}

}  // namespace vff
