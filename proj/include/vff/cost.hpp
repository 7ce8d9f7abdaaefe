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

// Hilbert-Schmidt test costs, exact and shot-sampled, and their
// parameter-shift gradients.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vff/ansatz.hpp"
#include "vff/circuit.hpp"
#include "vff/linalg.hpp"
#include "vff/noise.hpp"

namespace vff {

enum class CostMode { Exact, Sampled };
enum class CostKind { LHST, HST };

CostMode cost_mode_from_string(const std::string& s);
std::string to_string(CostMode m);

struct CostReport {
  double value = 0.0;
  CostMode mode = CostMode::Exact;
  std::size_t n_samp = 0;
  double std_err = 0.0;
  /// Sampled estimate fell outside [0, 1] and was clamped.
  bool clamped = false;
};

/// 1 - |Tr(U V^dagger)|^2 / d^2.
double cost_hst(const Matrix& u, const Matrix& v);

/// F_e^(j) of the channel rho -> Tr_{not j}[M (rho_j (x) I/2^{n-1}) M^dagger],
/// M = U V^dagger. Evaluates to ||Tr_j M||_F^2 / 2^{n+1}.
double entanglement_fidelity_j(const Matrix& u, const Matrix& v, std::size_t j);

/// 1 - mean_j F_e^(j).
double cost_lhst(const Matrix& u, const Matrix& v);

/// Exact cost of the requested kind.
double cost_exact(const Matrix& u, const Matrix& v, CostKind kind = CostKind::LHST);

/// One pair of the LHST circuit: Bell pairs (A_k, B_k) = (k, n+k), U on A,
/// V* on B, then CNOT(A_j, B_j) H(A_j). Returns P(00) on (A_j, B_j) and its
/// shot estimate.
struct SampledFidelity {
  double estimate = 0.0;
  double exact = 0.0;  // P(00) of the simulated circuit
  double std_err = 0.0;
  std::size_t n_samp = 0;
};

/// Simulates the 2n-qubit circuit (density matrix when `nm` is given and
/// nonzero, statevector otherwise) and draws Binomial(n_samp, P(00)).
SampledFidelity entanglement_fidelity_sampled(const Circuit& u, const Circuit& v, std::size_t j,
                                              std::size_t n_samp, std::uint64_t seed,
                                              const std::optional<NoiseModel>& nm = std::nullopt);

/// All n pairs of the circuit above, aggregated into 1 - mean_j F^_e^(j).
CostReport cost_lhst_sampled(const Circuit& u, const Circuit& v, std::size_t n_samp,
                             std::uint64_t seed,
                             const std::optional<NoiseModel>& nm = std::nullopt);

/// Noiseless sampled cost from dense unitaries: each P(00) equals F_e^(j)
/// exactly, so shots are drawn from the exact value.
CostReport cost_lhst_sampled(const Matrix& u, const Matrix& v, std::size_t n_samp,
                             std::uint64_t seed);

/// LHST circuit of the sampled test, up to and including the decode of pair
/// j. Exposed for inspection and tests.
Circuit lhst_circuit(const Circuit& u, const Circuit& v, std::size_t j);

/// Evaluation settings shared by cost and gradient calls.
struct CostOptions {
  CostMode mode = CostMode::Exact;
  CostKind kind = CostKind::LHST;
  std::size_t n_samp = 1000000;
  std::uint64_t seed = 0;
};

/// Cost of V against U under `opts`; `stream` selects an independent shot
/// stream in sampled mode.
CostReport evaluate_cost(const Matrix& u, const Matrix& v, const CostOptions& opts,
                         std::uint64_t stream = 0);

/// Cost from the product M = U V^dagger.
CostReport cost_from_product(const Matrix& m, const CostOptions& opts, std::uint64_t stream = 0);

/// Cost of the ansatz V(params) against U.
CostReport evaluate_cost(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                         const CostOptions& opts, std::uint64_t stream = 0);

/// Shared state for the shift-rule gradients at one parameter point. For a
/// rotation exp(-i a P/2) at gate i, W with a -> a +- pi/2 equals
/// W (I -+ i Q_i)/sqrt(2) with Q_i = P_{<i}^dagger P P_{<i}, where P_{<i} is
/// the product of the gates before i.
struct GradientContext {
  struct Occurrence {
    std::size_t gate = 0;
    double scale = 1.0;
    Matrix generator;  // Q_i
  };
  Matrix w;
  Matrix w_adj;
  RealVector phases;
  Matrix uw;   // U W
  Matrix uwd;  // U W D^*
  Matrix m0;   // U V^dagger
  std::vector<std::vector<Occurrence>> theta_slots;
};

GradientContext make_gradient_context(const Matrix& u, const AnsatzLayout& layout,
                                      const AnsatzParams& params);

double grad_theta(const GradientContext& ctx, std::size_t k, const CostOptions& opts);
double grad_gamma(const AnsatzLayout& layout, const AnsatzParams& params,
                  const GradientContext& ctx, std::size_t l, const CostOptions& opts);

/// dC/dtheta_k by the four-term shift rule (shift W and W^dagger copies
/// separately by +-pi/2); sums over every gate that reads slot k.
double grad_theta(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                  std::size_t k, const CostOptions& opts);

/// dC/dgamma_l. D terms are exp(i gamma Z_S) = R_{Z_S}(-2 gamma), so the
/// shift is +-pi/4: dC/dgamma = C(gamma + pi/4) - C(gamma - pi/4).
double grad_gamma(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                  std::size_t l, const CostOptions& opts);

/// Splitmix64-derived seed for (base, a, b); distinct streams per tuple.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

struct ThresholdResult {
  double exact = 0.0;
  double approx = 0.0;
};

/// Cost threshold guaranteeing average fidelity F_target at T = N dt:
///   exact:  (1/n) [1 - (1 - x^2)^2],
///           x = (1/N) sqrt(1 - sqrt(1 - (d+1)/d (1-F))) - eps_ts_inf/sqrt(2)
///   approx: (1/n) [(1/N) sqrt((d+1)/d (1-F)) - eps_ts_inf]^2
/// Throws std::domain_error when the Trotter error alone exhausts the budget.
ThresholdResult termination_threshold(double f_target, long long n_steps, std::size_t n_qubits,
                                      double eps_ts_inf);

}  // namespace vff
