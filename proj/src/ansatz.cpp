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

#include "vff/ansatz.hpp"

#include <bit>
#include <random>
#include <stdexcept>

namespace vff {

Entangler entangler_from_string(const std::string& s) {
  if (s == "cnot" || s == "CNOT") return Entangler::CNOT;
  if (s == "zz" || s == "ZZ") return Entangler::ZZ;
  if (s == "xx" || s == "XX") return Entangler::XX;
  throw std::invalid_argument("unknown entangler '" + s + "' (expected cnot, zz or xx)");
}

std::string to_string(Entangler e) {
  switch (e) {
    case Entangler::CNOT: return "cnot";
    case Entangler::ZZ: return "zz";
    case Entangler::XX: return "xx";
  }
  return "?";
}

RotationBlock rotation_block_from_string(const std::string& s) {
  if (s == "zxz") return RotationBlock::ZXZ;
  if (s == "xz") return RotationBlock::XZ;
  throw std::invalid_argument("unknown rotation block '" + s + "' (expected zxz or xz)");
}

std::string to_string(RotationBlock b) { return b == RotationBlock::ZXZ ? "zxz" : "xz"; }

WLayout WLayout::layered(std::size_t n_qubits, std::size_t n_layers, Entangler e) {
  WLayout w;
  w.n_qubits = n_qubits;
  w.layers.assign(n_layers, LayerSpec{});
  w.entangler = e;
  return w;
}

std::vector<std::pair<std::size_t, std::size_t>> entangler_pairs(std::size_t n, bool odd) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = odd ? 1 : 0; a + 1 < n; a += 2) out.emplace_back(a, a + 1);
  return out;
}

namespace {

std::size_t rotations_per_qubit(RotationBlock b) { return b == RotationBlock::ZXZ ? 3 : 2; }

std::vector<GateKind> rotation_sequence(RotationBlock b) {
  if (b == RotationBlock::ZXZ) return {GateKind::Rz, GateKind::Rx, GateKind::Rz};
  return {GateKind::Rx, GateKind::Rz};
}

}  // namespace

std::size_t WLayout::slots_per_rotation_layer() const {
  return (weight_sharing ? 1 : n_qubits) * rotations_per_qubit(block);
}

std::size_t WLayout::slots_per_entangler_layer(bool odd) const {
  if (entangler == Entangler::CNOT) return 0;
  const std::size_t pairs = entangler_pairs(n_qubits, odd).size();
  if (pairs == 0) return 0;
  return weight_sharing ? 1 : pairs;
}

std::size_t WLayout::slots_per_layer() const {
  return slots_per_rotation_layer() + slots_per_entangler_layer(false) +
         slots_per_entangler_layer(true);
}

std::size_t WLayout::slot_count() const {
  return n_layers() * slots_per_layer() + (final_layer ? slots_per_rotation_layer() : 0);
}

std::vector<std::vector<std::size_t>> walsh_terms(std::size_t n, std::size_t d_locality) {
  if (d_locality < 1 || d_locality > 3) {
    throw std::invalid_argument("d_locality must be 1, 2 or 3");
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t a = 0; a < n; ++a) out.push_back({a});
  if (d_locality >= 2) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) out.push_back({a, b});
    }
  }
  if (d_locality >= 3) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

std::size_t walsh_term_count(std::size_t n, std::size_t d_locality) {
  return walsh_terms(n, d_locality).size();
}

std::size_t AnsatzLayout::gamma_count() const { return walsh_term_count(w.n_qubits, d_locality); }

void AnsatzLayout::validate(const AnsatzParams& p) const {
  if (p.theta.size() != w.slot_count()) {
    throw std::invalid_argument("theta has " + std::to_string(p.theta.size()) +
                                " entries, layout needs " + std::to_string(w.slot_count()));
  }
  if (p.gamma.size() != gamma_count()) {
    throw std::invalid_argument("gamma has " + std::to_string(p.gamma.size()) +
                                " entries, layout needs " + std::to_string(gamma_count()));
  }
}

Circuit w_template(const WLayout& layout) {
  const std::size_t n = layout.n_qubits;
  Circuit c(n);
  std::size_t slot = 0;
  const auto rotations = rotation_sequence(layout.block);

  auto rotation_layer = [&]() {
    const std::size_t base = slot;
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < rotations.size(); ++r) {
        const std::size_t k =
            layout.weight_sharing ? base + r : base + q * rotations.size() + r;
        c.add(Gate::slot(rotations[r], {q}, ParamRef{"theta", k}));
      }
    }
    slot += layout.slots_per_rotation_layer();
  };

  auto entangler_layer = [&](bool odd) {
    const std::size_t base = slot;
    std::size_t i = 0;
    for (auto [a, b] : entangler_pairs(n, odd)) {
      const std::size_t k = layout.weight_sharing ? base : base + i;
      switch (layout.entangler) {
        case Entangler::CNOT: c.add(Gate::cnot(a, b)); break;
        case Entangler::ZZ: c.add(Gate::slot(GateKind::ZZ, {a, b}, ParamRef{"theta", k})); break;
        case Entangler::XX: c.add(Gate::slot(GateKind::XX, {a, b}, ParamRef{"theta", k})); break;
      }
      ++i;
    }
    slot += layout.slots_per_entangler_layer(odd);
  };

  for (const LayerSpec& layer : layout.layers) {
    rotation_layer();
    entangler_layer(layer.mirrored);
    entangler_layer(!layer.mirrored);
  }
  if (layout.final_layer) rotation_layer();
  return c;
}

Circuit build_W(const WLayout& layout, const std::vector<double>& theta) {
  if (theta.size() != layout.slot_count()) {
    throw std::invalid_argument("build_W: theta has " + std::to_string(theta.size()) +
                                " entries, layout needs " + std::to_string(layout.slot_count()));
  }
  return w_template(layout).bind("theta", theta);
}

Circuit d_template(std::size_t n_qubits, std::size_t d_locality) {
  Circuit c(n_qubits);
  const auto terms = walsh_terms(n_qubits, d_locality);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const GateKind kind = terms[k].size() == 1   ? GateKind::Rz
                          : terms[k].size() == 2 ? GateKind::ZZ
                                                 : GateKind::ZString;
    c.add(Gate::slot(kind, terms[k], ParamRef{"gamma", k, -2.0}));
  }
  return c;
}

Circuit build_D(std::size_t n_qubits, const std::vector<double>& gamma, std::size_t d_locality) {
  const std::size_t expected = walsh_term_count(n_qubits, d_locality);
  if (gamma.size() != expected) {
    throw std::invalid_argument("build_D: gamma has " + std::to_string(gamma.size()) +
                                " entries, expected " + std::to_string(expected));
  }
  return d_template(n_qubits, d_locality).bind("gamma", gamma);
}

RealVector walsh_phases(std::size_t n_qubits, const std::vector<double>& gamma,
                        std::size_t d_locality) {
  const auto terms = walsh_terms(n_qubits, d_locality);
  if (gamma.size() != terms.size()) throw std::invalid_argument("walsh_phases: gamma length");
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<std::size_t> masks(terms.size(), 0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (std::size_t q : terms[k]) masks[k] |= std::size_t{1} << (n_qubits - 1 - q);
  }
  RealVector phi = RealVector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t z = 0; z < d; ++z) {
    double acc = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      acc += (std::popcount(z & masks[k]) & 1U) ? -gamma[k] : gamma[k];
    }
    phi[static_cast<Eigen::Index>(z)] = acc;
  }
  return phi;
}

Circuit build_V_circuit(const AnsatzParams& params, const AnsatzLayout& layout) {
  layout.validate(params);
  // Gates run in order, so W^dagger comes first.
  const Circuit w = build_W(layout.w, params.theta);
  Circuit v = w.inverse();
  v.append(build_D(layout.n_qubits(), params.gamma, layout.d_locality));
  v.append(w);
  return v;
}

Matrix compose_V(const Matrix& w, const RealVector& phases) {
  Vector diag(phases.size());
  for (Eigen::Index z = 0; z < phases.size(); ++z) diag[z] = std::polar(1.0, phases[z]);
  return w * diag.asDiagonal() * w.adjoint();
}

Matrix build_V(const AnsatzParams& params, const AnsatzLayout& layout) {
  layout.validate(params);
  const Matrix w = circuit_to_unitary(build_W(layout.w, params.theta));
  return compose_V(w, walsh_phases(layout.n_qubits(), params.gamma, layout.d_locality));
}

AnsatzParams fast_forward_params(const AnsatzParams& params, long long n_steps) {
  if (n_steps < 1) throw std::invalid_argument("fast_forward_params: N must be >= 1");
  AnsatzParams out = params;
  for (double& g : out.gamma) g *= static_cast<double>(n_steps);
  return out;
}

Grown grow_ansatz(const WLayout& layout, const std::vector<double>& theta) {
  if (theta.size() != layout.slot_count()) throw std::invalid_argument("grow_ansatz: theta length");
  Grown out{layout, {}};
  std::vector<LayerSpec> added;
  if (layout.entangler == Entangler::CNOT) {
    added = {LayerSpec{false}, LayerSpec{true}};
  } else {
    added = {LayerSpec{false}};
  }
  out.layout.layers.insert(out.layout.layers.end(), added.begin(), added.end());
  // Layer slots precede the final layer's slots.
  const std::size_t split = layout.n_layers() * layout.slots_per_layer();
  out.theta.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(split));
  out.theta.insert(out.theta.end(), added.size() * layout.slots_per_layer(), 0.0);
  out.theta.insert(out.theta.end(), theta.begin() + static_cast<std::ptrdiff_t>(split), theta.end());
  return out;
}

AnsatzParams random_init(const AnsatzLayout& layout, std::uint64_t seed, double theta_spread,
                         double gamma_spread) {
  if (!(theta_spread >= 0.0) || !(gamma_spread >= 0.0)) {
    throw std::invalid_argument("random_init: spreads must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  AnsatzParams p;
  p.theta.resize(layout.w.slot_count());
  p.gamma.resize(layout.gamma_count());
  for (double& x : p.theta) x = theta_spread * unit(rng);
  for (double& x : p.gamma) x = gamma_spread * unit(rng);
  return p;
}

AnsatzParams perturbative_init(const AnsatzParams& previous) { return previous; }

}  // namespace vff
