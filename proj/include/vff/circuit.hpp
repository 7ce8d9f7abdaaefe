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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vff/linalg.hpp"

namespace vff {

/// Gate kinds. Every rotation is R_P(phi) = exp(-i phi P / 2) for its Pauli
/// string P; `ZString` is the k-local Z (x) ... (x) Z rotation (k = number of
/// targets).
enum class GateKind { Rx, Ry, Rz, ZZ, XX, ZString, CNOT, H, Fixed };

const char* gate_name(GateKind kind);
bool is_rotation(GateKind kind);

/// A reference from a gate angle to a named parameter vector:
/// angle = scale * values[group][index] + offset.
struct ParamRef {
  std::string group;
  std::size_t index = 0;
  double scale = 1.0;
  double offset = 0.0;

  std::string slot_name() const { return group + "[" + std::to_string(index) + "]"; }
};

struct Gate {
  GateKind kind = GateKind::Rz;
  std::vector<std::size_t> targets;  // CNOT: {control, target}
  double angle = 0.0;                // radians; rotation kinds only
  std::optional<ParamRef> param;     // unbound while set
  Matrix fixed;                      // GateKind::Fixed only

  static Gate rotation(GateKind kind, std::vector<std::size_t> targets, double angle);
  static Gate slot(GateKind kind, std::vector<std::size_t> targets, ParamRef ref);
  static Gate cnot(std::size_t control, std::size_t target);
  static Gate hadamard(std::size_t q);
  static Gate unitary(std::vector<std::size_t> targets, Matrix m);

  std::size_t arity() const { return targets.size(); }
  bool bound() const { return !param.has_value(); }

  /// Dense 2^k x 2^k matrix of a bound gate. Throws naming the slot if
  /// unbound.
  Matrix matrix() const;
  /// Same gate with angle negated / matrix adjointed.
  Gate inverse() const;
  /// Gate whose matrix is the entrywise conjugate of this one.
  Gate conjugate() const;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::vector<Gate>& gates() { return gates_; }
  std::size_t size() const { return gates_.size(); }

  /// Appends after validating targets against the register width.
  Circuit& add(Gate g);
  Circuit& append(const Circuit& other);

  /// Binds every slot of `group` to the given values. Throws if a slot
  /// index is out of range.
  Circuit bind(const std::string& group, std::span<const double> values) const;

  /// Names of all unbound slots, in gate order.
  std::vector<std::string> unbound_slots() const;

  /// Circuit for the adjoint unitary.
  Circuit inverse() const;
  /// Circuit for the entrywise-conjugated unitary.
  Circuit conjugate() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
};

/// Applies one bound gate to an n-qubit amplitude register.
void apply_gate(std::span<cplx> amps, std::size_t n_qubits, const Gate& g);

/// Ordered product of the gate matrices (first gate acts first).
Matrix circuit_to_unitary(const Circuit& c);

/// |psi> <- C |psi>.
void apply_circuit(const Circuit& c, Vector& psi);

/// Pauli matrices and single-gate helpers.
Matrix pauli_matrix(char p);
Matrix rotation_matrix(GateKind kind, double angle, std::size_t arity = 1);

}  // namespace vff
