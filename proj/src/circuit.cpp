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

#include "vff/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "vff/kernels.hpp"

namespace vff {

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::ZZ: return "zz";
    case GateKind::XX: return "xx";
    case GateKind::ZString: return "zstring";
    case GateKind::CNOT: return "cnot";
    case GateKind::H: return "h";
    case GateKind::Fixed: return "unitary";
  }
  return "?";
}

bool is_rotation(GateKind kind) {
  switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::ZZ:
    case GateKind::XX:
    case GateKind::ZString:
      return true;
    default:
      return false;
  }
}

Matrix pauli_matrix(char p) {
  Matrix m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("unknown Pauli '") + p + "'");
  }
  return m;
}

Matrix rotation_matrix(GateKind kind, double angle, std::size_t arity) {
  Matrix p;
  switch (kind) {
    case GateKind::Rx: p = pauli_matrix('X'); break;
    case GateKind::Ry: p = pauli_matrix('Y'); break;
    case GateKind::Rz: p = pauli_matrix('Z'); break;
    case GateKind::ZZ: p = kron(pauli_matrix('Z'), pauli_matrix('Z')); break;
    case GateKind::XX: p = kron(pauli_matrix('X'), pauli_matrix('X')); break;
    case GateKind::ZString:
      p = pauli_matrix('Z');
      for (std::size_t i = 1; i < arity; ++i) p = kron(p, pauli_matrix('Z'));
      break;
    default: throw std::invalid_argument("rotation_matrix: not a rotation kind");
  }
  const auto d = p.rows();
  return std::cos(angle / 2) * Matrix::Identity(d, d) - cplx(0, std::sin(angle / 2)) * p;
}

Gate Gate::rotation(GateKind kind, std::vector<std::size_t> targets, double angle) {
  Gate g;
  g.kind = kind;
  g.targets = std::move(targets);
  g.angle = angle;
  return g;
}

Gate Gate::slot(GateKind kind, std::vector<std::size_t> targets, ParamRef ref) {
  Gate g;
  g.kind = kind;
  g.targets = std::move(targets);
  g.param = std::move(ref);
  return g;
}

Gate Gate::cnot(std::size_t control, std::size_t target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.targets = {control, target};
  return g;
}

Gate Gate::hadamard(std::size_t q) {
  Gate g;
  g.kind = GateKind::H;
  g.targets = {q};
  return g;
}

Gate Gate::unitary(std::vector<std::size_t> targets, Matrix m) {
  Gate g;
  g.kind = GateKind::Fixed;
  g.targets = std::move(targets);
  g.fixed = std::move(m);
  return g;
}

Matrix Gate::matrix() const {
  if (param) throw std::invalid_argument("unbound parameter slot " + param->slot_name());
  switch (kind) {
    case GateKind::CNOT: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::H: {
      Matrix m(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    }
    case GateKind::Fixed:
      return fixed;
    default:
      return rotation_matrix(kind, angle, targets.size());
  }
}

Gate Gate::inverse() const {
  Gate g = *this;
  if (is_rotation(kind)) {
    if (g.param) {
      g.param->scale = -g.param->scale;
      g.param->offset = -g.param->offset;
    } else {
      g.angle = -angle;
    }
  } else if (kind == GateKind::Fixed) {
    g.fixed = fixed.adjoint();
  }
  return g;
}

Gate Gate::conjugate() const {
  // conj(exp(-i a P/2)) = exp(+i a conj(P)/2). conj(Y) = -Y, so Ry is real;
  // the remaining rotation kinds have real generators.
  if (kind == GateKind::Ry) return *this;
  if (kind == GateKind::Fixed) {
    Gate g = *this;
    g.fixed = fixed.conjugate();
    return g;
  }
  return is_rotation(kind) ? inverse() : *this;
}

Circuit& Circuit::add(Gate g) {
  for (std::size_t i = 0; i < g.targets.size(); ++i) {
    if (g.targets[i] >= n_qubits_) {
      throw std::out_of_range(std::string(gate_name(g.kind)) + " target qubit " +
                              std::to_string(g.targets[i]) + " >= n_qubits " +
                              std::to_string(n_qubits_));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.targets[i] == g.targets[j]) throw std::invalid_argument("repeated gate target");
    }
  }
  if (g.kind == GateKind::Fixed &&
      g.fixed.rows() != (Eigen::Index{1} << static_cast<int>(g.targets.size()))) {
    throw std::invalid_argument("fixed-unitary gate size does not match its targets");
  }
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("append: width mismatch");
  for (const Gate& g : other.gates_) gates_.push_back(g);
  return *this;
}

Circuit Circuit::bind(const std::string& group, std::span<const double> values) const {
  Circuit out = *this;
  for (Gate& g : out.gates_) {
    if (!g.param || g.param->group != group) continue;
    if (g.param->index >= values.size()) {
      throw std::out_of_range("no value for slot " + g.param->slot_name());
    }
    g.angle = g.param->scale * values[g.param->index] + g.param->offset;
    g.param.reset();
  }
  return out;
}

std::vector<std::string> Circuit::unbound_slots() const {
  std::vector<std::string> out;
  for (const Gate& g : gates_) {
    if (g.param) out.push_back(g.param->slot_name());
  }
  return out;
}

Circuit Circuit::inverse() const {
  Circuit out(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->inverse());
  return out;
}

Circuit Circuit::conjugate() const {
  Circuit out(n_qubits_);
  for (const Gate& g : gates_) out.gates_.push_back(g.conjugate());
  return out;
}

namespace {

// Applies `g` with every target shifted by `offset` register qubits.
void apply_gate_shifted(std::span<cplx> amps, std::size_t n_qubits, const Gate& g,
                        std::size_t offset) {
  if (g.param) throw std::invalid_argument("unbound parameter slot " + g.param->slot_name());
  std::size_t buf[3];
  if (g.targets.size() > 3) throw std::invalid_argument("gates act on at most 3 qubits");
  for (std::size_t i = 0; i < g.targets.size(); ++i) buf[i] = g.targets[i] + offset;
  const std::span<const std::size_t> targets(buf, g.targets.size());
  if (g.kind == GateKind::Rz || g.kind == GateKind::ZZ || g.kind == GateKind::ZString) {
    kernels::apply_zstring_phase(amps, n_qubits, targets, g.angle);
    return;
  }
  kernels::apply_matrix(amps, n_qubits, targets, g.matrix());
}

}  // namespace

void apply_gate(std::span<cplx> amps, std::size_t n_qubits, const Gate& g) {
  apply_gate_shifted(amps, n_qubits, g, 0);
}

Matrix circuit_to_unitary(const Circuit& c) {
  if (const auto slots = c.unbound_slots(); !slots.empty()) {
    throw std::invalid_argument("circuit_to_unitary: unbound parameter slot " + slots.front());
  }
  const std::size_t n = c.n_qubits();
  if (2 * n > 2 * kMaxQubits) throw std::invalid_argument("circuit too wide");
  const auto d = Eigen::Index{1} << static_cast<int>(n);
  Matrix u = Matrix::Identity(d, d);
  // Column-major storage: the matrix is a 2n-qubit register with the row
  // index on qubits n..2n-1, so a left multiplication shifts targets by n.
  std::span<cplx> amps(u.data(), static_cast<std::size_t>(u.size()));
  for (const Gate& g : c.gates()) apply_gate_shifted(amps, 2 * n, g, n);
  return u;
}

void apply_circuit(const Circuit& c, Vector& psi) {
  if (static_cast<std::size_t>(psi.size()) != (std::size_t{1} << c.n_qubits())) {
    throw std::invalid_argument("apply_circuit: state size does not match circuit width");
  }
  std::span<cplx> amps(psi.data(), static_cast<std::size_t>(psi.size()));
  for (const Gate& g : c.gates()) apply_gate(amps, c.n_qubits(), g);
}

}  // namespace vff
