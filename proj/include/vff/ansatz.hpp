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

// Layered ansatz V = W(theta) D(gamma) W(theta)^dagger.
//
// W: layers of [single-qubit rotations on every qubit] [entanglers on pairs
// (0,1),(2,3),...] [entanglers on pairs (1,2),(3,4),...], closed by a final
// single-qubit layer. A "mirrored" layer runs the two entangler sub-layers in
// the opposite order so that a normal+mirrored pair with zero angles is the
// identity even for CNOT entanglers.
//
// D: commuting Z-string phases prod_j exp(i gamma_j Z_{S_j}) over all
// qubit subsets S_j with 1 <= |S_j| <= d_locality, ordered by locality and
// then lexicographically.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vff/circuit.hpp"
#include "vff/linalg.hpp"

namespace vff {

enum class Entangler { CNOT, ZZ, XX };
enum class RotationBlock { ZXZ, XZ };

Entangler entangler_from_string(const std::string& s);
std::string to_string(Entangler e);
RotationBlock rotation_block_from_string(const std::string& s);
std::string to_string(RotationBlock b);

struct LayerSpec {
  bool mirrored = false;
};

struct WLayout {
  std::size_t n_qubits = 1;
  std::vector<LayerSpec> layers;
  Entangler entangler = Entangler::CNOT;
  /// ZXZ applies Rz, Rx, Rz per qubit (3 slots); XZ applies Rx then Rz, i.e.
  /// the operator Rz(a) Rx(b) (2 slots).
  RotationBlock block = RotationBlock::ZXZ;
  bool final_layer = true;
  /// One shared angle per gate position within a sub-layer.
  bool weight_sharing = false;

  static WLayout layered(std::size_t n_qubits, std::size_t n_layers,
                         Entangler e = Entangler::CNOT);

  std::size_t n_layers() const { return layers.size(); }
  std::size_t slots_per_rotation_layer() const;
  std::size_t slots_per_entangler_layer(bool odd) const;
  std::size_t slots_per_layer() const;
  std::size_t slot_count() const;
};

/// Even-odd (odd=false) or odd-even (odd=true) nearest-neighbour pairs.
std::vector<std::pair<std::size_t, std::size_t>> entangler_pairs(std::size_t n, bool odd);

struct AnsatzParams {
  std::vector<double> theta;
  std::vector<double> gamma;
};

/// Full structural description of V.
struct AnsatzLayout {
  WLayout w;
  std::size_t d_locality = 2;

  std::size_t n_qubits() const { return w.n_qubits; }
  std::size_t gamma_count() const;
  void validate(const AnsatzParams& p) const;
};

/// Qubit subsets of the D terms, in parameter order.
std::vector<std::vector<std::size_t>> walsh_terms(std::size_t n, std::size_t d_locality);
std::size_t walsh_term_count(std::size_t n, std::size_t d_locality);

/// W with symbolic slots theta[k].
Circuit w_template(const WLayout& layout);
Circuit build_W(const WLayout& layout, const std::vector<double>& theta);

/// D with symbolic slots gamma[k]; each term is a ZString rotation with
/// angle -2 gamma_k, i.e. exp(+i gamma_k Z_S).
Circuit d_template(std::size_t n_qubits, std::size_t d_locality);
Circuit build_D(std::size_t n_qubits, const std::vector<double>& gamma, std::size_t d_locality);

/// Walsh phases phi_z = sum_j gamma_j prod_{k in S_j} z_k, one per basis
/// state z (z_k = +1 for bit 0). D = diag(exp(i phi_z)).
RealVector walsh_phases(std::size_t n_qubits, const std::vector<double>& gamma,
                        std::size_t d_locality);

/// W D W^dagger as a circuit and as a dense unitary.
Circuit build_V_circuit(const AnsatzParams& params, const AnsatzLayout& layout);
Matrix build_V(const AnsatzParams& params, const AnsatzLayout& layout);
/// V from an already-built W unitary and gamma.
Matrix compose_V(const Matrix& w, const RealVector& phases);

/// gamma -> N gamma.
AnsatzParams fast_forward_params(const AnsatzParams& params, long long n_steps);

/// Inserts an identity-valued block before the final single-qubit layer:
/// one zero-angle layer for parametric entanglers, a normal+mirrored pair
/// for CNOT. New slots are zero.
struct Grown {
  WLayout layout;
  std::vector<double> theta;
};
Grown grow_ansatz(const WLayout& layout, const std::vector<double>& theta);

/// Cold start: theta ~ uniform(-theta_spread, theta_spread), gamma ~
/// uniform(-gamma_spread, gamma_spread).
AnsatzParams random_init(const AnsatzLayout& layout, std::uint64_t seed,
                         double theta_spread = 3.141592653589793, double gamma_spread = 0.01);

/// Warm start for a nearby Hamiltonian: the previous parameters, verbatim.
AnsatzParams perturbative_init(const AnsatzParams& previous);

}  // namespace vff
