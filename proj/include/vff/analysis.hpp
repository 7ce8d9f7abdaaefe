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

// Error bounds for fast-forwarded evolution, fidelity metrics and the noisy
// Trotter-versus-VFF comparison.

#include <cstddef>
#include <string>
#include <vector>

#include "vff/ansatz.hpp"
#include "vff/hamiltonians.hpp"
#include "vff/linalg.hpp"
#include "vff/noise.hpp"

namespace vff {

/// sqrt(2d - 2|Tr(U1^dagger U2)|) = min_phi ||U1 - e^{i phi} U2||_2.
double epsilon_tilde_2(const Matrix& u1, const Matrix& u2);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double slack = 1e-9) const { return lhs <= rhs + slack; }
};

/// (||U1^N - U2^N||_p, N ||U1 - U2||_p).
BoundCheck check_power_lemma(const Matrix& u1, const Matrix& u2, std::size_t n_steps,
                             SchattenP p);

struct CostScalingCheck {
  /// 1 - sqrt(1 - C_LHST(U^N, V^N)) vs N^2 (1 - sqrt(1 - n C_LHST(U, V))).
  BoundCheck exact;
  /// C_LHST(U^N, V^N) vs n N^2 C_LHST(U, V).
  BoundCheck approx;
  /// n C_LHST(U, V) > 1: the LHST form is not valid and `exact` holds the
  /// HST form 1 - sqrt(1 - C_HST(U^N, V^N)) vs N^2 (1 - sqrt(1 - C_HST(U, V))).
  bool precondition_violated = false;
};

CostScalingCheck check_cost_scaling(const Matrix& u, const Matrix& v, std::size_t n_steps);

/// Haar-averaged state fidelity, 1 - d C_HST / (d + 1).
double average_fidelity(const Matrix& u1, const Matrix& u2);

struct FidelityBound {
  double exact = 0.0;    // 1/(d+1) + d/(d+1) (1 - N^2 eps^2)^2
  double compact = 0.0;  // 1 - N^2 d/(d+1) (eps_ts + sqrt(2 n C))^2, weaker than exact
  double approx = 0.0;   // 1 - N^2 d/(d+1) (eps_ts + sqrt(n C))^2, small-C estimate
  /// eps = eps_ts/sqrt(2) + sqrt(1 - sqrt(1 - n C)), the per-step bound.
  double eps_step = 0.0;
  bool precondition_ok = true;  // n C <= 1 and eps <= 1/N
  std::string note;
};

/// Lower bounds on F(N dt) from the Trotter error and the training cost.
FidelityBound fidelity_lower_bound(double eps_ts_inf, double c_lhst, std::size_t n_qubits,
                                   long long n_steps);

struct FidelityReport {
  double T = 0.0;
  long long N = 0;
  double cost_lhst_ff = 0.0;  // C_LHST(e^{-iHT}, V(N))
  double avg_fidelity = 0.0;
  double lower_bound_exact = 0.0;
  double lower_bound_compact = 0.0;
  double lower_bound_approx = 0.0;
  bool bound_preconditions = true;
  double eps_ff_2 = 0.0;    // ||e^{-iHT} - V(N)||_2 at the optimal phase
  double eps_ff_inf = 0.0;  // same alignment, operator norm
};

/// Fast-forwarded evolution V(N) = W D(N gamma) W^dagger against e^{-iH N dt}.
/// The bound uses the training cost c_train = C_LHST(U(dt), V).
FidelityReport fast_forward_report(const PauliSum& h, const TrotterConfig& trotter,
                                   const AnsatzLayout& layout, const AnsatzParams& params,
                                   long long n_steps, double c_train);

/// Largest N such that 1 - F(U(dt)^N', V^N') <= tol for every N' <= N, with U(dt)
/// the Trotter step (0 if N=1 fails).
long long fast_forward_window(const PauliSum& h, const TrotterConfig& trotter,
                              const AnsatzLayout& layout, const AnsatzParams& params,
                              double tol, long long n_max);

struct ComparisonCurve {
  std::string method;  // "trotter" or "vff"
  std::vector<long long> n_steps;
  std::vector<double> fidelity;
  NoiseModel noise;
  double delta = 0.2;
  /// Largest T = N dt with fidelity >= 1 - delta on every N' <= N; 0 if none.
  double T_delta = 0.0;
};

struct NoiseComparison {
  ComparisonCurve trotter;
  ComparisonCurve vff;
  /// T_delta(vff) / T_delta(trotter); infinite when Trotter never meets delta.
  double R_ff = 0.0;
  /// First N at which the VFF fidelity exceeds the Trotter fidelity; 0 if never.
  long long crossover_N = 0;
};

/// Noisy evolution of psi0 by (a) N repetitions of the Trotter step and
/// (b) the fixed-depth circuit W D(N gamma) W^dagger, scored against the
/// exact e^{-iH N dt} psi0 by Tr(|psi><psi| rho).
NoiseComparison compare_under_noise(const PauliSum& h, const TrotterConfig& trotter,
                                    const AnsatzLayout& layout, const AnsatzParams& params,
                                    const NoiseModel& nm, const Vector& psi0, long long n_max,
                                    double delta = 0.2);

/// |+>^n, which overlaps every computational basis state.
Vector uniform_superposition(std::size_t n_qubits);

struct HoffmanWielandt {
  double matched_error = 0.0;  // sum_i |e^{i l_i} - e^{i (l'_sigma(i) + phi0)}|^2
  double bound_2norm = 0.0;    // ||U - e^{i phi0} V||_2^2
  double bound_lhst = 0.0;     // 2d (1 - sqrt(1 - n C_LHST))
  double phi0 = 0.0;
  bool lhst_bound_valid = true;  // n C_LHST <= 1
  /// sum_i |angle difference| under the same matching.
  double abs_phase_error = 0.0;
};

/// Spectra of U and V under the optimal matching after the phase alignment
/// phi0 = arg Tr(U V^dagger).
HoffmanWielandt hoffman_wielandt_check(const Matrix& u, const Matrix& v);

/// Eigenphases in (-pi, pi], ascending.
std::vector<double> eigenphases(const Matrix& u);

/// min over permutations sigma of sum_i |e^{i a_i} - e^{i b_sigma(i)}|^2, by
/// the Hungarian method. Writes sigma when `assignment` is given.
double matched_phase_error(const std::vector<double>& phases_a, const std::vector<double>& phases_b,
                           std::vector<std::size_t>* assignment = nullptr);

}  // namespace vff
