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

#include "vff/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "vff/kernels.hpp"

namespace vff {

CostMode cost_mode_from_string(const std::string& s) {
  if (s == "exact") return CostMode::Exact;
  if (s == "sampled") return CostMode::Sampled;
  throw std::invalid_argument("unknown cost mode '" + s + "' (expected exact or sampled)");
}

std::string to_string(CostMode m) { return m == CostMode::Exact ? "exact" : "sampled"; }

namespace {

void check_pair(const Matrix& u, const Matrix& v, const char* who) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                std::to_string(u.rows()) + " vs " + std::to_string(v.rows()) +
                                ")");
  }
  if (!is_power_of_two(static_cast<std::size_t>(u.rows()))) {
    throw std::invalid_argument(std::string(who) + ": dimension is not a power of two");
  }
}

// ||Tr_j M||_F^2 with qubit 0 the most significant index bit.
double partial_trace_norm2(const Matrix& m, std::size_t n, std::size_t j) {
  const std::size_t d = static_cast<std::size_t>(m.rows());
  const std::size_t bit = std::size_t{1} << (n - 1 - j);
  const std::size_t low = bit - 1;
  const std::size_t half = d / 2;
  double acc = 0.0;
  for (std::size_t rc = 0; rc < half; ++rc) {
    const std::size_t r0 = ((rc & ~low) << 1) | (rc & low);
    for (std::size_t cc = 0; cc < half; ++cc) {
      const std::size_t c0 = ((cc & ~low) << 1) | (cc & low);
      const cplx t = m(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(c0)) +
                     m(static_cast<Eigen::Index>(r0 | bit), static_cast<Eigen::Index>(c0 | bit));
      acc += std::norm(t);
    }
  }
  return acc;
}

SampledFidelity draw(double p, std::size_t n_samp, std::mt19937_64& rng) {
  SampledFidelity out;
  out.exact = p;
  out.n_samp = n_samp;
  if (n_samp == 0) throw std::invalid_argument("n_samp must be positive");
  const double pc = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<long long> binom(static_cast<long long>(n_samp), pc);
  out.estimate = static_cast<double>(binom(rng)) / static_cast<double>(n_samp);
  out.std_err = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n_samp));
  return out;
}

CostReport aggregate(const std::vector<SampledFidelity>& pairs) {
  CostReport r;
  r.mode = CostMode::Sampled;
  double mean = 0.0, var = 0.0;
  for (const auto& f : pairs) {
    mean += f.estimate;
    var += f.std_err * f.std_err;
  }
  const double n = static_cast<double>(pairs.size());
  r.value = 1.0 - mean / n;
  r.std_err = std::sqrt(var) / n;
  r.n_samp = pairs.empty() ? 0 : pairs.front().n_samp;
  if (r.value < 0.0 || r.value > 1.0) {
    r.value = std::clamp(r.value, 0.0, 1.0);
    r.clamped = true;
  }
  return r;
}

Circuit shifted_copy(const Circuit& c, std::size_t width, std::size_t offset) {
  Circuit out(width);
  for (Gate g : c.gates()) {
    for (auto& t : g.targets) t += offset;
    out.add(std::move(g));
  }
  return out;
}

// Bell pairs, U on A, V* on B.
Circuit lhst_body(const Circuit& u, const Circuit& v) {
  const std::size_t n = u.n_qubits();
  if (v.n_qubits() != n) throw std::invalid_argument("LHST: U and V widths differ");
  if (2 * n > kMaxQubits) {
    throw std::invalid_argument("LHST needs " + std::to_string(2 * n) +
                                " qubits, simulator capacity is " + std::to_string(kMaxQubits));
  }
  Circuit c(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    c.add(Gate::hadamard(k));
    c.add(Gate::cnot(k, n + k));
  }
  c.append(shifted_copy(u, 2 * n, 0));
  c.append(shifted_copy(v.conjugate(), 2 * n, n));
  return c;
}

Circuit decode(std::size_t n, std::size_t j) {
  Circuit c(2 * n);
  c.add(Gate::cnot(j, n + j));
  c.add(Gate::hadamard(j));
  return c;
}

double density_pair_zero(const DensityMatrix& rho, std::size_t a, std::size_t b) {
  const std::size_t nq = rho.n_qubits();
  const std::size_t mask = (std::size_t{1} << (nq - 1 - a)) | (std::size_t{1} << (nq - 1 - b));
  double p = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    if ((i & mask) == 0) p += rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return p;
}

std::vector<double> pair_probabilities(const Circuit& u, const Circuit& v,
                                       const std::vector<std::size_t>& js,
                                       const std::optional<NoiseModel>& nm) {
  const std::size_t n = u.n_qubits();
  for (std::size_t j : js) {
    if (j >= n) throw std::out_of_range("LHST pair index " + std::to_string(j) + " >= n");
  }
  const Circuit body = lhst_body(u, v);
  std::vector<double> out;
  if (nm && !nm->is_noiseless()) {
    const DensityMatrix rho = apply_noisy_circuit(body, DensityMatrix(2 * n), *nm);
    for (std::size_t j : js) {
      out.push_back(density_pair_zero(apply_noisy_circuit(decode(n, j), rho, *nm), j, n + j));
    }
    return out;
  }
  Vector psi = Vector::Zero(Eigen::Index{1} << static_cast<int>(2 * n));
  psi[0] = 1.0;
  apply_circuit(body, psi);
  for (std::size_t j : js) {
    Vector phi = psi;
    apply_circuit(decode(n, j), phi);
    out.push_back(kernels::prob_pair_zero({phi.data(), static_cast<std::size_t>(phi.size())},
                                          2 * n, j, n + j));
  }
  return out;
}

}  // namespace

double cost_hst(const Matrix& u, const Matrix& v) {
  check_pair(u, v, "cost_hst");
  const double d = static_cast<double>(u.rows());
  const double c = 1.0 - std::norm(hs_inner(u, v)) / (d * d);
  return std::clamp(c, 0.0, 1.0);
}

double entanglement_fidelity_j(const Matrix& u, const Matrix& v, std::size_t j) {
  check_pair(u, v, "entanglement_fidelity_j");
  const std::size_t n = qubits_for_dim(static_cast<std::size_t>(u.rows()));
  if (j >= n) {
    throw std::out_of_range("entanglement_fidelity_j: qubit " + std::to_string(j) +
                            " out of range for n=" + std::to_string(n));
  }
  const Matrix m = u * v.adjoint();
  const double f = partial_trace_norm2(m, n, j) / static_cast<double>(std::size_t{2} << n);
  return std::clamp(f, 0.0, 1.0);
}

double cost_lhst(const Matrix& u, const Matrix& v) {
  check_pair(u, v, "cost_lhst");
  const std::size_t n = qubits_for_dim(static_cast<std::size_t>(u.rows()));
  if (n == 0) return 0.0;
  const Matrix m = u * v.adjoint();
  const double norm = static_cast<double>(std::size_t{2} << n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += partial_trace_norm2(m, n, j) / norm;
  return std::clamp(1.0 - acc / static_cast<double>(n), 0.0, 1.0);
}

double cost_exact(const Matrix& u, const Matrix& v, CostKind kind) {
  return kind == CostKind::LHST ? cost_lhst(u, v) : cost_hst(u, v);
}

Circuit lhst_circuit(const Circuit& u, const Circuit& v, std::size_t j) {
  Circuit c = lhst_body(u, v);
  c.append(decode(u.n_qubits(), j));
  return c;
}

SampledFidelity entanglement_fidelity_sampled(const Circuit& u, const Circuit& v, std::size_t j,
                                              std::size_t n_samp, std::uint64_t seed,
                                              const std::optional<NoiseModel>& nm) {
  const double p = pair_probabilities(u, v, {j}, nm).front();
  std::mt19937_64 rng(seed);
  return draw(p, n_samp, rng);
}

CostReport cost_lhst_sampled(const Circuit& u, const Circuit& v, std::size_t n_samp,
                             std::uint64_t seed, const std::optional<NoiseModel>& nm) {
  const std::size_t n = u.n_qubits();
  std::vector<std::size_t> js(n);
  for (std::size_t j = 0; j < n; ++j) js[j] = j;
  const auto probs = pair_probabilities(u, v, js, nm);
  std::vector<SampledFidelity> pairs;
  for (std::size_t j = 0; j < n; ++j) {
    std::mt19937_64 rng(derive_seed(seed, j));
    pairs.push_back(draw(probs[j], n_samp, rng));
  }
  return aggregate(pairs);
}

CostReport cost_lhst_sampled(const Matrix& u, const Matrix& v, std::size_t n_samp,
                             std::uint64_t seed) {
  check_pair(u, v, "cost_lhst_sampled");
  const std::size_t n = qubits_for_dim(static_cast<std::size_t>(u.rows()));
  std::vector<SampledFidelity> pairs;
  for (std::size_t j = 0; j < n; ++j) {
    std::mt19937_64 rng(derive_seed(seed, j));
    pairs.push_back(draw(entanglement_fidelity_j(u, v, j), n_samp, rng));
  }
  return aggregate(pairs);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

CostReport cost_from_product(const Matrix& m, const CostOptions& opts, std::uint64_t stream) {
  const std::size_t d = static_cast<std::size_t>(m.rows());
  const std::size_t n = qubits_for_dim(d);
  if (opts.kind == CostKind::HST) {
    if (opts.mode == CostMode::Sampled) {
      throw std::invalid_argument("sampled mode supports the LHST cost only");
    }
    CostReport r;
    const double dd = static_cast<double>(d);
    r.value = std::clamp(1.0 - std::norm(m.trace()) / (dd * dd), 0.0, 1.0);
    return r;
  }
  const double norm = static_cast<double>(std::size_t{2} << n);
  if (opts.mode == CostMode::Exact) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += partial_trace_norm2(m, n, j) / norm;
    CostReport r;
    r.value = n == 0 ? 0.0 : std::clamp(1.0 - acc / static_cast<double>(n), 0.0, 1.0);
    return r;
  }
  const std::uint64_t seed = derive_seed(opts.seed, stream);
  std::vector<SampledFidelity> pairs;
  for (std::size_t j = 0; j < n; ++j) {
    std::mt19937_64 rng(derive_seed(seed, j));
    pairs.push_back(draw(std::clamp(partial_trace_norm2(m, n, j) / norm, 0.0, 1.0), opts.n_samp, rng));
  }
  return aggregate(pairs);
}

CostReport evaluate_cost(const Matrix& u, const Matrix& v, const CostOptions& opts,
                         std::uint64_t stream) {
  check_pair(u, v, "evaluate_cost");
  return cost_from_product(u * v.adjoint(), opts, stream);
}

CostReport evaluate_cost(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                         const CostOptions& opts, std::uint64_t stream) {
  return evaluate_cost(u, build_V(params, layout), opts, stream);
}

namespace {

// Pauli generator of a rotation gate, embedded in the n-qubit register.
Matrix embedded_generator(const Gate& g, std::size_t n) {
  std::string word(n, 'I');
  char p = 'Z';
  switch (g.kind) {
    case GateKind::Rx:
    case GateKind::XX: p = 'X'; break;
    case GateKind::Ry: p = 'Y'; break;
    default: p = 'Z'; break;
  }
  for (std::size_t t : g.targets) word[t] = p;
  Matrix m = pauli_matrix(word[0]);
  for (std::size_t q = 1; q < n; ++q) m = kron(m, pauli_matrix(word[q]));
  return m;
}

Vector conj_phases(const RealVector& phases) {
  Vector out(phases.size());
  for (Eigen::Index z = 0; z < phases.size(); ++z) out[z] = std::polar(1.0, -phases[z]);
  return out;
}

}  // namespace

GradientContext make_gradient_context(const Matrix& u, const AnsatzLayout& layout,
                                      const AnsatzParams& params) {
  layout.validate(params);
  const std::size_t n = layout.n_qubits();
  const auto d = Eigen::Index{1} << static_cast<int>(n);
  if (u.rows() != d || u.cols() != d) {
    throw std::invalid_argument("gradient: target dimension does not match the ansatz");
  }
  const Circuit tmpl = w_template(layout.w);
  const Circuit bound = tmpl.bind("theta", params.theta);
  GradientContext ctx;
  ctx.theta_slots.resize(params.theta.size());
  ctx.phases = walsh_phases(n, params.gamma, layout.d_locality);

  Matrix prefix = Matrix::Identity(d, d);
  std::span<cplx> amps(prefix.data(), static_cast<std::size_t>(prefix.size()));
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const auto& ref = tmpl.gates()[i].param;
    if (ref && ref->group == "theta") {
      const Matrix p = embedded_generator(tmpl.gates()[i], n);
      ctx.theta_slots[ref->index].push_back({i, ref->scale, prefix.adjoint() * p * prefix});
    }
    Gate g = bound.gates()[i];
    for (auto& t : g.targets) t += n;
    apply_gate(amps, 2 * n, g);
  }
  ctx.w = std::move(prefix);
  ctx.w_adj = ctx.w.adjoint();
  ctx.uw = u * ctx.w;
  ctx.uwd = ctx.uw * conj_phases(ctx.phases).asDiagonal();
  ctx.m0 = ctx.uwd * ctx.w_adj;
  return ctx;
}

double grad_theta(const GradientContext& ctx, std::size_t k, const CostOptions& opts) {
  if (k >= ctx.theta_slots.size()) {
    throw std::out_of_range("grad_theta: slot " + std::to_string(k) + " >= " +
                            std::to_string(ctx.theta_slots.size()));
  }
  // With W_pm = W (I -+ iQ)/sqrt2 and M = U V^dagger:
  //   W_pm D W^dagger   -> M = (M0 +- i U W D* Q W^dagger)/sqrt2
  //   W D W_pm^dagger   -> M = (M0 -+ i U W Q D* W^dagger)/sqrt2
  const cplx i_unit(0.0, 1.0);
  const double r2 = 1.0 / std::numbers::sqrt2;
  const Vector dconj = conj_phases(ctx.phases);
  double grad = 0.0;
  std::uint64_t stream = 0;
  for (const auto& occ : ctx.theta_slots[k]) {
    const Matrix left = i_unit * ((ctx.uwd * occ.generator) * ctx.w_adj);
    const Matrix right = i_unit * ((ctx.uw * occ.generator) * dconj.asDiagonal() * ctx.w_adj);
    auto cost = [&](const Matrix& m) {
      return cost_from_product(m, opts, derive_seed(k, occ.gate, stream++)).value;
    };
    const double dl = cost(r2 * (ctx.m0 + left)) - cost(r2 * (ctx.m0 - left));
    const double dr = cost(r2 * (ctx.m0 - right)) - cost(r2 * (ctx.m0 + right));
    grad += 0.5 * occ.scale * (dl + dr);
  }
  return grad;
}

double grad_gamma(const AnsatzLayout& layout, const AnsatzParams& params,
                  const GradientContext& ctx, std::size_t l, const CostOptions& opts) {
  if (l >= params.gamma.size()) {
    throw std::out_of_range("grad_gamma: slot " + std::to_string(l) + " >= " +
                            std::to_string(params.gamma.size()));
  }
  const double shift = std::numbers::pi / 4;
  auto cost_at = [&](double delta, std::uint64_t stream) {
    std::vector<double> g = params.gamma;
    g[l] += delta;
    const Vector dconj = conj_phases(walsh_phases(layout.n_qubits(), g, layout.d_locality));
    const Matrix m = (ctx.uw * dconj.asDiagonal()) * ctx.w_adj;
    return cost_from_product(m, opts, derive_seed(~std::uint64_t{0}, l, stream)).value;
  };
  return cost_at(shift, 0) - cost_at(-shift, 1);
}

double grad_theta(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                  std::size_t k, const CostOptions& opts) {
  return grad_theta(make_gradient_context(u, layout, params), k, opts);
}

double grad_gamma(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                  std::size_t l, const CostOptions& opts) {
  return grad_gamma(layout, params, make_gradient_context(u, layout, params), l, opts);
}

ThresholdResult termination_threshold(double f_target, long long n_steps, std::size_t n_qubits,
                                      double eps_ts_inf) {
  if (!(f_target > 0.0 && f_target < 1.0)) {
    throw std::invalid_argument("termination_threshold: F_target must lie in (0, 1)");
  }
  if (n_steps < 1) throw std::invalid_argument("termination_threshold: N must be >= 1");
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("termination_threshold: invalid qubit count");
  }
  if (!(eps_ts_inf >= 0.0)) throw std::invalid_argument("termination_threshold: eps_ts < 0");
  const double d = std::ldexp(1.0, static_cast<int>(n_qubits));
  const double n = static_cast<double>(n_qubits);
  const double big_n = static_cast<double>(n_steps);
  const double a = (d + 1.0) / d * (1.0 - f_target);
  if (a > 1.0) {
    throw std::domain_error("termination_threshold: F_target below the Haar-random floor");
  }
  const double x = std::sqrt(1.0 - std::sqrt(1.0 - a)) / big_n - eps_ts_inf / std::numbers::sqrt2;
  const double y = std::sqrt(a) / big_n - eps_ts_inf;
  if (x < 0.0 || y < 0.0) {
    throw std::domain_error(
        "termination_threshold: unreachable, Trotter error alone exceeds the fidelity budget");
  }
  const double one_minus = 1.0 - x * x;
  return {(1.0 - one_minus * one_minus) / n, y * y / n};
}

}  // namespace vff
