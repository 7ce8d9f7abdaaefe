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

#include "vff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vff/cost.hpp"

namespace vff {

namespace {

void check_same_dim(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  if (x <= -std::numbers::pi) x += 2.0 * std::numbers::pi;
  return x;
}

}  // namespace

double epsilon_tilde_2(const Matrix& u1, const Matrix& u2) {
  check_same_dim(u1, u2, "epsilon_tilde_2");
  const double d = static_cast<double>(u1.rows());
  const double overlap = std::abs((u1.adjoint() * u2).trace());
  return std::sqrt(std::max(0.0, 2.0 * d - 2.0 * overlap));
}

BoundCheck check_power_lemma(const Matrix& u1, const Matrix& u2, std::size_t n_steps,
                             SchattenP p) {
  check_same_dim(u1, u2, "check_power_lemma");
  if (n_steps < 1) throw std::invalid_argument("check_power_lemma: N must be >= 1");
  const Matrix diff_n = matrix_power(u1, n_steps) - matrix_power(u2, n_steps);
  return {schatten_norm(diff_n, p), static_cast<double>(n_steps) * schatten_norm(u1 - u2, p)};
}

CostScalingCheck check_cost_scaling(const Matrix& u, const Matrix& v, std::size_t n_steps) {
  check_same_dim(u, v, "check_cost_scaling");
  if (n_steps < 1) throw std::invalid_argument("check_cost_scaling: N must be >= 1");
  const double n = static_cast<double>(qubits_for_dim(static_cast<std::size_t>(u.rows())));
  const double nn = static_cast<double>(n_steps);
  const Matrix un = matrix_power(u, n_steps);
  const Matrix vn = matrix_power(v, n_steps);
  const double c1 = cost_lhst(u, v);
  const double cn = cost_lhst(un, vn);
  CostScalingCheck out;
  out.approx = {cn, n * nn * nn * c1};
  if (n * c1 <= 1.0) {
    out.exact = {1.0 - std::sqrt(1.0 - cn), nn * nn * (1.0 - std::sqrt(1.0 - n * c1))};
  } else {
    out.precondition_violated = true;
    const double h1 = cost_hst(u, v);
    const double hn = cost_hst(un, vn);
    out.exact = {1.0 - std::sqrt(1.0 - hn), nn * nn * (1.0 - std::sqrt(1.0 - h1))};
  }
  return out;
}

double average_fidelity(const Matrix& u1, const Matrix& u2) {
  check_same_dim(u1, u2, "average_fidelity");
  const double d = static_cast<double>(u1.rows());
  return 1.0 - d * cost_hst(u1, u2) / (d + 1.0);
}

FidelityBound fidelity_lower_bound(double eps_ts_inf, double c_lhst, std::size_t n_qubits,
                                   long long n_steps) {
  if (n_steps < 1) throw std::invalid_argument("fidelity_lower_bound: N must be >= 1");
  if (eps_ts_inf < 0.0 || c_lhst < 0.0) {
    throw std::invalid_argument("fidelity_lower_bound: negative error input");
  }
  const double d = std::ldexp(1.0, static_cast<int>(n_qubits));
  const double n = static_cast<double>(n_qubits);
  const double nn = static_cast<double>(n_steps);
  const double w = d / (d + 1.0);
  FidelityBound out;
  out.compact = 1.0 - nn * nn * w * std::pow(eps_ts_inf + std::sqrt(2.0 * n * c_lhst), 2);
  out.approx = 1.0 - nn * nn * w * std::pow(eps_ts_inf + std::sqrt(n * c_lhst), 2);
  if (n * c_lhst > 1.0) {
    out.precondition_ok = false;
    out.note = "n*C_LHST > 1";
    out.exact = 0.0;
    out.eps_step = std::numeric_limits<double>::infinity();
    return out;
  }
  out.eps_step = eps_ts_inf / std::numbers::sqrt2 + std::sqrt(1.0 - std::sqrt(1.0 - n * c_lhst));
  if (out.eps_step > 1.0 / nn) {
    out.precondition_ok = false;
    out.note = "eps(dt) > 1/N";
    out.exact = 0.0;
    return out;
  }
  const double x = 1.0 - nn * nn * out.eps_step * out.eps_step;
  out.exact = 1.0 / (d + 1.0) + w * x * x;
  return out;
}

FidelityReport fast_forward_report(const PauliSum& h, const TrotterConfig& trotter,
                                   const AnsatzLayout& layout, const AnsatzParams& params,
                                   long long n_steps, double c_train) {
  if (n_steps < 1) throw std::invalid_argument("fast_forward_report: N must be >= 1");
  FidelityReport r;
  r.N = n_steps;
  r.T = static_cast<double>(n_steps) * trotter.dt;
  const Matrix exact = exact_evolution(h, r.T);
  const Matrix v = build_V(fast_forward_params(params, n_steps), layout);
  r.cost_lhst_ff = cost_lhst(exact, v);
  r.avg_fidelity = average_fidelity(exact, v);
  const cplx z = hs_inner(exact, v);
  const cplx phase = std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0, 0.0);
  const Matrix diff = exact - phase * v;
  r.eps_ff_2 = schatten_norm(diff, SchattenP::Two);
  r.eps_ff_inf = schatten_norm(diff, SchattenP::Inf);
  const double eps_ts = trotter_error(h, trotter).inf;
  const FidelityBound b = fidelity_lower_bound(eps_ts, c_train, layout.n_qubits(), n_steps);
  r.lower_bound_exact = b.exact;
  r.lower_bound_compact = b.compact;
  r.lower_bound_approx = b.approx;
  r.bound_preconditions = b.precondition_ok;
  return r;
}

long long fast_forward_window(const PauliSum& h, const TrotterConfig& trotter,
                              const AnsatzLayout& layout, const AnsatzParams& params,
                              double tol, long long n_max) {
  const Matrix w = circuit_to_unitary(build_W(layout.w, params.theta));
  const Matrix u_dt = circuit_to_unitary(trotter_step(h, trotter));
  Matrix target = u_dt;
  for (long long n = 1; n <= n_max; ++n) {
    if (n > 1) target = u_dt * target;
    const auto ff = fast_forward_params(params, n);
    const Matrix v = compose_V(w, walsh_phases(layout.n_qubits(), ff.gamma, layout.d_locality));
    if (1.0 - average_fidelity(target, v) > tol) return n - 1;
  }
  return n_max;
}

Vector uniform_superposition(std::size_t n_qubits) {
  const auto d = Eigen::Index{1} << static_cast<int>(n_qubits);
  return Vector::Constant(d, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

namespace {

double t_delta(const std::vector<double>& fid, double delta, double dt) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < fid.size(); ++i) {
    if (fid[i] < 1.0 - delta) break;
    last = i + 1;
  }
  return static_cast<double>(last) * dt;
}

}  // namespace

NoiseComparison compare_under_noise(const PauliSum& h, const TrotterConfig& trotter,
                                    const AnsatzLayout& layout, const AnsatzParams& params,
                                    const NoiseModel& nm, const Vector& psi0, long long n_max,
                                    double delta) {
  nm.validate();
  layout.validate(params);
  const std::size_t n = h.n_qubits();
  if (layout.n_qubits() != n) throw std::invalid_argument("compare_under_noise: width mismatch");
  if (static_cast<std::size_t>(psi0.size()) != (std::size_t{1} << n)) {
    throw std::invalid_argument("compare_under_noise: psi0 has the wrong dimension");
  }
  if (n_max < 1) throw std::invalid_argument("compare_under_noise: N_max must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");

  const Circuit step = trotter_step(h, trotter);
  const Matrix u_dt = exact_evolution(h, trotter.dt);
  const auto count = static_cast<std::size_t>(n_max);

  std::vector<Vector> targets(count);
  Vector psi = psi0;
  for (std::size_t i = 0; i < count; ++i) {
    psi = u_dt * psi;
    targets[i] = psi;
  }

  NoiseComparison out;
  out.trotter.method = "trotter";
  out.vff.method = "vff";
  for (ComparisonCurve* c : {&out.trotter, &out.vff}) {
    c->noise = nm;
    c->delta = delta;
    c->n_steps.resize(count);
    c->fidelity.resize(count);
    for (std::size_t i = 0; i < count; ++i) c->n_steps[i] = static_cast<long long>(i + 1);
  }

  DensityMatrix rho = DensityMatrix::from_state(psi0);
  for (std::size_t i = 0; i < count; ++i) {
    rho = apply_noisy_circuit(step, std::move(rho), nm);
    out.trotter.fidelity[i] = std::clamp(rho.expectation(targets[i]), 0.0, 1.0);
  }

  const DensityMatrix start = DensityMatrix::from_state(psi0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < count; ++i) {
    const Circuit c = build_V_circuit(fast_forward_params(params, static_cast<long long>(i + 1)), layout);
    const DensityMatrix r = apply_noisy_circuit(c, start, nm);
    out.vff.fidelity[i] = std::clamp(r.expectation(targets[i]), 0.0, 1.0);
  }

  out.trotter.T_delta = t_delta(out.trotter.fidelity, delta, trotter.dt);
  out.vff.T_delta = t_delta(out.vff.fidelity, delta, trotter.dt);
  out.R_ff = out.trotter.T_delta > 0.0 ? out.vff.T_delta / out.trotter.T_delta
                                       : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    if (out.vff.fidelity[i] > out.trotter.fidelity[i]) {
      out.crossover_N = static_cast<long long>(i + 1);
      break;
    }
  }
  return out;
}

std::vector<double> eigenphases(const Matrix& u) {
  std::vector<double> out;
  for (const cplx& z : unitary_eigenvalues(u)) out.push_back(wrap_phase(std::arg(z)));
  std::sort(out.begin(), out.end());
  return out;
}

double matched_phase_error(const std::vector<double>& phases_a, const std::vector<double>& phases_b,
                           std::vector<std::size_t>* assignment) {
  if (phases_a.size() != phases_b.size()) {
    throw std::invalid_argument("matched_phase_error: spectra differ in size");
  }
  const std::size_t d = phases_a.size();
  if (assignment) assignment->assign(d, 0);
  if (d == 0) return 0.0;
  auto cost = [&](std::size_t i, std::size_t j) {
    return std::norm(std::polar(1.0, phases_a[i]) - std::polar(1.0, phases_b[j]));
  };
  // Shortest augmenting paths with row and column potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pu(d + 1, 0.0), pv(d + 1, 0.0);
  std::vector<std::size_t> match(d + 1, 0), way(d + 1, 0);
  for (std::size_t row = 1; row <= d; ++row) {
    match[0] = row;
    std::size_t j0 = 0;
    std::vector<double> minv(d + 1, inf);
    std::vector<bool> used(d + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= d; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= d; ++j) {
        if (used[j]) {
          pu[match[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= d; ++j) {
    total += cost(match[j] - 1, j - 1);
    if (assignment) (*assignment)[match[j] - 1] = j - 1;
  }
  return total;
}

HoffmanWielandt hoffman_wielandt_check(const Matrix& u, const Matrix& v) {
  check_same_dim(u, v, "hoffman_wielandt_check");
  const double d = static_cast<double>(u.rows());
  const double n = static_cast<double>(qubits_for_dim(static_cast<std::size_t>(u.rows())));
  HoffmanWielandt out;
  // ||U - e^{i phi} V||_2^2 = 2d - 2 Re(e^{i phi} Tr(U^dagger V)).
  const cplx z = (u.adjoint() * v).trace();
  out.phi0 = std::abs(z) > 0.0 ? -std::arg(z) : 0.0;
  out.bound_2norm = std::max(0.0, 2.0 * d - 2.0 * std::abs(z));

  const auto lu = eigenphases(u);
  auto lv = eigenphases(v);
  for (double& x : lv) x = wrap_phase(x + out.phi0);
  std::vector<std::size_t> sigma;
  out.matched_error = matched_phase_error(lu, lv, &sigma);
  for (std::size_t i = 0; i < lu.size(); ++i) out.abs_phase_error += std::abs(wrap_phase(lu[i] - lv[sigma[i]]));

  const double c = cost_lhst(u, v);
  if (n * c <= 1.0) {
    out.bound_lhst = 2.0 * d * (1.0 - std::sqrt(1.0 - n * c));
  } else {
    out.lhst_bound_valid = false;
    out.bound_lhst = 2.0 * d * (1.0 - std::sqrt(std::max(0.0, 1.0 - cost_hst(u, v))));
  }
  return out;
}

}  // namespace vff
