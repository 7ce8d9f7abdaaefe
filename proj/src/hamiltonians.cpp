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

#include "vff/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace vff {

std::size_t PauliTerm::weight() const {
  return static_cast<std::size_t>(std::count_if(pauli.begin(), pauli.end(),
                                                [](char c) { return c != 'I'; }));
}

PauliSum& PauliSum::add(double coeff, const std::string& pauli) {
  if (pauli.size() != n_qubits_) {
    throw std::invalid_argument("Pauli string '" + pauli + "' has length " +
                                std::to_string(pauli.size()) + ", expected " +
                                std::to_string(n_qubits_));
  }
  for (char c : pauli) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument("Pauli string '" + pauli + "' contains '" + c + "'");
    }
  }
  if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite Pauli coefficient");
  for (PauliTerm& t : terms_) {
    if (t.pauli == pauli) {
      t.coeff += coeff;
      return *this;
    }
  }
  terms_.push_back({coeff, pauli});
  return *this;
}

PauliSum PauliSum::pruned(double tol) const {
  PauliSum out(n_qubits_);
  for (const PauliTerm& t : terms_) {
    if (std::abs(t.coeff) > tol) out.terms_.push_back(t);
  }
  return out;
}

Matrix PauliSum::to_matrix() const {
  if (n_qubits_ > kMaxQubits) throw std::invalid_argument("PauliSum too wide for dense matrix");
  const auto d = Eigen::Index{1} << static_cast<int>(n_qubits_);
  Matrix h = Matrix::Zero(d, d);
  for (const PauliTerm& t : terms_) {
    Matrix p = pauli_matrix(t.pauli.empty() ? 'I' : t.pauli[0]);
    for (std::size_t k = 1; k < t.pauli.size(); ++k) p = kron(p, pauli_matrix(t.pauli[k]));
    h += t.coeff * p;
  }
  return h;
}

std::string pauli_on(std::size_t n, std::size_t q, char p) {
  std::string s(n, 'I');
  s.at(q) = p;
  return s;
}

std::string pauli_on(std::size_t n, std::size_t a, std::size_t b, char p) {
  std::string s(n, 'I');
  s.at(a) = p;
  s.at(b) = p;
  return s;
}

PauliSum build_xy(std::size_t n) {
  if (n < 2) throw std::invalid_argument("build_xy: need n >= 2 qubits");
  PauliSum h(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h.add(-1.0, pauli_on(n, i, i + 1, 'X'));
    h.add(-1.0, pauli_on(n, i, i + 1, 'Y'));
  }
  return h;
}

PauliSum build_hubbard2(double tau, double u) {
  PauliSum h(2);
  h.add(-tau, "XI");
  h.add(-tau, "IX");
  h.add(u, "ZZ");
  return h;
}

PauliSum build_heisenberg(std::size_t n, double jx, double jy, double jz, double h) {
  if (n < 2) throw std::invalid_argument("build_heisenberg: need n >= 2 qubits");
  PauliSum out(n);
  for (std::size_t i = 0; i + 1 < n; ++i) out.add(jz, pauli_on(n, i, i + 1, 'Z'));
  for (std::size_t i = 0; i + 1 < n; ++i) out.add(jx, pauli_on(n, i, i + 1, 'X'));
  for (std::size_t i = 0; i + 1 < n; ++i) out.add(jy, pauli_on(n, i, i + 1, 'Y'));
  for (std::size_t i = 0; i < n; ++i) out.add(h, pauli_on(n, i, 'Z'));
  return out;
}

PauliSum build_1q(double ax, double ay, double az) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  if (!(norm > 0.0)) throw std::invalid_argument("build_1q: zero direction");
  PauliSum h(1);
  h.add(ax / norm, "X");
  h.add(ay / norm, "Y");
  h.add(az / norm, "Z");
  return h;
}

PauliSum build_random_1q(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double a[3];
  do {
    for (double& x : a) x = gauss(rng);
  } while (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] < 1e-12);
  return build_1q(a[0], a[1], a[2]);
}

namespace {

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

std::size_t take_count(std::map<std::string, double>& params, const std::string& key,
                       double fallback) {
  const double v = take(params, key, fallback);
  if (v < 0 || v != std::floor(v)) {
    throw std::invalid_argument("model parameter '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

PauliSum build_model(const std::string& name, const std::map<std::string, double>& params) {
  auto p = params;
  PauliSum h;
  if (name == "hubbard2") {
    const double tau = take(p, "tau", 1.0);
    const double u = take(p, "u", 0.0);
    h = build_hubbard2(tau, u);
  } else if (name == "heisenberg") {
    const std::size_t n = take_count(p, "n", 3);
    const double jx = take(p, "jx", 0.0);
    const double jy = take(p, "jy", 0.0);
    const double jz = take(p, "jz", 1.0);
    const double field = take(p, "h", 1.0);
    h = build_heisenberg(n, jx, jy, jz, field);
  } else if (name == "xy") {
    h = build_xy(take_count(p, "n", 5));
  } else if (name == "random1q") {
    h = build_random_1q(static_cast<std::uint64_t>(take_count(p, "seed", 0)));
  } else if (name == "1q") {
    const double ax = take(p, "ax", 0.0);
    const double ay = take(p, "ay", 0.0);
    const double az = take(p, "az", 1.0);
    h = build_1q(ax, ay, az);
  } else {
    throw std::invalid_argument("unknown model '" + name + "'");
  }
  if (!p.empty()) {
    throw std::invalid_argument("model '" + name + "' has no parameter '" + p.begin()->first + "'");
  }
  return h;
}

Matrix exact_evolution(const PauliSum& h, double t) {
  return expm_hermitian(h.to_matrix(), t);
}

void TrotterConfig::validate(const PauliSum& h) const {
  if (!(dt > 0.0)) throw std::invalid_argument("Trotter dt must be positive");
  if (order != 1) throw std::invalid_argument("only first-order Trotter steps are supported");
  if (!term_order.empty()) {
    std::set<std::size_t> seen(term_order.begin(), term_order.end());
    if (term_order.size() != h.terms().size() || seen.size() != term_order.size() ||
        *seen.rbegin() >= h.terms().size()) {
      throw std::invalid_argument("term_order must be a permutation of the term indices");
    }
  }
  for (const PauliTerm& t : h.terms()) {
    if (t.weight() > 2) {
      throw std::invalid_argument("unsupported Trotter term '" + t.pauli +
                                  "': weight > 2 has no rotation gate");
    }
  }
}

namespace {

std::vector<std::size_t> resolved_order(const PauliSum& h, const TrotterConfig& cfg) {
  if (!cfg.term_order.empty()) return cfg.term_order;
  std::vector<std::size_t> order(h.terms().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return order;
}

GateKind single_rotation(char p) {
  switch (p) {
    case 'X': return GateKind::Rx;
    case 'Y': return GateKind::Ry;
    default: return GateKind::Rz;
  }
}

// Appends the gate mapping Pauli `p` onto Z (B P B^dagger = Z), or its
// inverse.
void basis_change(Circuit& c, std::size_t q, char p, bool inverse) {
  if (p == 'X') {
    c.add(Gate::hadamard(q));
  } else if (p == 'Y') {
    c.add(Gate::rotation(GateKind::Rx, {q}, inverse ? -std::numbers::pi / 2 : std::numbers::pi / 2));
  }
}

}  // namespace

Circuit trotter_step(const PauliSum& h, const TrotterConfig& cfg) {
  cfg.validate(h);
  const std::size_t n = h.n_qubits();
  Circuit c(n);
  for (std::size_t idx : resolved_order(h, cfg)) {
    const PauliTerm& t = h.terms()[idx];
    const double angle = 2.0 * t.coeff * cfg.dt;
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < n; ++q) {
      if (t.pauli[q] != 'I') support.push_back(q);
    }
    if (support.empty()) continue;  // identity term: global phase only
    if (support.size() == 1) {
      c.add(Gate::rotation(single_rotation(t.pauli[support[0]]), support, angle));
      continue;
    }
    const std::size_t a = support[0];
    const std::size_t b = support[1];
    basis_change(c, a, t.pauli[a], false);
    basis_change(c, b, t.pauli[b], false);
    c.add(Gate::rotation(GateKind::ZZ, {a, b}, angle));
    basis_change(c, a, t.pauli[a], true);
    basis_change(c, b, t.pauli[b], true);
  }
  return c;
}

Matrix trotter_product_reference(const PauliSum& h, const TrotterConfig& cfg) {
  cfg.validate(h);
  const auto d = Eigen::Index{1} << static_cast<int>(h.n_qubits());
  Matrix u = Matrix::Identity(d, d);
  for (std::size_t idx : resolved_order(h, cfg)) {
    const PauliTerm& t = h.terms()[idx];
    if (t.weight() == 0) continue;
    PauliSum single(h.n_qubits());
    single.add(t.coeff, t.pauli);
    u = exact_evolution(single, cfg.dt) * u;
  }
  return u;
}

TrotterError trotter_error(const PauliSum& h, const TrotterConfig& cfg) {
  const Matrix exact = exact_evolution(h, cfg.dt);
  // Identity terms only contribute a global phase that the circuit drops;
  // compare against the traceless part so the error is phase-consistent.
  PauliSum traceless(h.n_qubits());
  for (const PauliTerm& t : h.terms()) {
    if (t.weight() > 0) traceless.add(t.coeff, t.pauli);
  }
  const Matrix reference = traceless.terms().size() == h.terms().size()
                               ? exact
                               : exact_evolution(traceless, cfg.dt);
  const Matrix diff = reference - circuit_to_unitary(trotter_step(h, cfg));
  return {schatten_norm(diff, SchattenP::Inf), schatten_norm(diff, SchattenP::Two)};
}

}  // namespace vff
