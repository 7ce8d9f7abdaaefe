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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vff/circuit.hpp"
#include "vff/linalg.hpp"

namespace vff {

/// One weighted Pauli string, e.g. (-1.0, "XI"). Character k acts on qubit k.
struct PauliTerm {
  double coeff = 0.0;
  std::string pauli;

  std::size_t weight() const;
};

/// Real-weighted sum of Pauli strings. Terms keep insertion order (which is
/// the default Trotter ordering); adding a string already present merges the
/// coefficient into the existing term.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  PauliSum& add(double coeff, const std::string& pauli);
  /// Drops terms with |coeff| <= tol.
  PauliSum pruned(double tol = 0.0) const;

  Matrix to_matrix() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Single-qubit Pauli string with `p` on qubit `q`, identity elsewhere.
std::string pauli_on(std::size_t n, std::size_t q, char p);
/// Two-qubit Pauli string with `p` on qubits a and b.
std::string pauli_on(std::size_t n, std::size_t a, std::size_t b, char p);

/// -sum_i (X_i X_{i+1} + Y_i Y_{i+1}), open chain.
PauliSum build_xy(std::size_t n);
/// -tau (X (x) I + I (x) X) + u Z (x) Z.
PauliSum build_hubbard2(double tau, double u);
/// sum_i (jz Z_i Z_{i+1} + jx X_i X_{i+1} + jy Y_i Y_{i+1}) + h sum_i Z_i,
/// open chain. Terms are listed Z-layer, X-layer, Y-layer, field.
PauliSum build_heisenberg(std::size_t n, double jx, double jy, double jz, double h);
/// alpha_x X + alpha_y Y + alpha_z Z with alpha a seeded uniformly random
/// unit vector.
PauliSum build_random_1q(std::uint64_t seed);
/// Same model with a caller-chosen direction (normalized).
PauliSum build_1q(double ax, double ay, double az);

/// Model by name with named real parameters ("hubbard2", "heisenberg",
/// "xy", "random1q"). Unknown parameter names are rejected.
PauliSum build_model(const std::string& name, const std::map<std::string, double>& params);

/// exp(-i H t) through the eigendecomposition of the dense matrix of H.
Matrix exact_evolution(const PauliSum& h, double t);

struct TrotterConfig {
  double dt = 0.1;
  int order = 1;
  /// Permutation of term indices; empty means builder order.
  std::vector<std::size_t> term_order;

  void validate(const PauliSum& h) const;
};

/// First-order product prod_k exp(-i c_k P_k dt), one rotation per term.
/// 1-local terms become Rx/Ry/Rz(2 c_k dt); 2-local terms become a ZZ(2 c_k
/// dt) rotation conjugated by basis changes (H for X, Rx(pi/2) for Y).
Circuit trotter_step(const PauliSum& h, const TrotterConfig& cfg);

/// Ordered product of exact factor exponentials, for consistency checks.
Matrix trotter_product_reference(const PauliSum& h, const TrotterConfig& cfg);

struct TrotterError {
  double inf = 0.0;  // operator norm
  double two = 0.0;  // Hilbert-Schmidt norm
};

/// (||e^{-iH dt} - U(dt)||_inf, ||e^{-iH dt} - U(dt)||_2).
TrotterError trotter_error(const PauliSum& h, const TrotterConfig& cfg);

}  // namespace vff
