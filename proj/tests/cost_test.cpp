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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "test_util.hpp"
#include "vff/analysis.hpp"
#include "vff/cost.hpp"
#include "vff/optimizer.hpp"

using namespace vff;
using vff::testing::max_abs_diff;

namespace {

/// F_e^(j) from the channel definition: sigma on qubit j, I/2 on the rest,
/// conjugate by M, trace out everything but j, score on a Bell pair.
double channel_entanglement_fidelity(const Matrix& m, std::size_t n, std::size_t j) {
  const std::size_t d = std::size_t{1} << n;
  const std::size_t bit = n - 1 - j;
  double f = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      // |a><b| on qubit j tensored with I / 2^{n-1}.
      Matrix in = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t x = 0; x < d; ++x) {
        if (((x >> bit) & 1) != a) continue;
        const std::size_t y = (x & ~(std::size_t{1} << bit)) | (b << bit);
        in(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = 1.0 / static_cast<double>(d / 2);
      }
      const Matrix out = m * in * m.adjoint();
      // <a| Tr_{not j}(out) |b>.
      cplx s = 0.0;
      for (std::size_t x = 0; x < d; ++x) {
        if (((x >> bit) & 1) != a) continue;
        const std::size_t y = (x & ~(std::size_t{1} << bit)) | (b << bit);
        s += out(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      }
      f += s.real();
    }
  }
  return f / 4.0;
}

AnsatzLayout small_layout(std::size_t n, Entangler e, std::size_t layers = 2) {
  AnsatzLayout layout;
  layout.w = WLayout::layered(n, layers, e);
  layout.d_locality = std::min<std::size_t>(2, n);
  return layout;
}

}  // namespace

TEST_CASE("entanglement fidelity matches the channel definition") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const Matrix u = haar_unitary(d, rng), v = haar_unitary(d, rng);
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double want = channel_entanglement_fidelity(u * v.adjoint(), n, j);
      CHECK(entanglement_fidelity_j(u, v, j) == doctest::Approx(want).epsilon(1e-12));
      mean += want / static_cast<double>(n);
    }
    CHECK(cost_lhst(u, v) == doctest::Approx(1.0 - mean).epsilon(1e-12));
  }
}

TEST_CASE("HST cost is zero exactly up to a global phase") {
  std::mt19937_64 rng(2);
  const Matrix u = haar_unitary(4, rng);
  CHECK(cost_hst(u, std::polar(1.0, 0.7) * u) < 1e-14);
  CHECK(cost_lhst(u, std::polar(1.0, 0.7) * u) < 1e-14);
  CHECK(cost_hst(u, haar_unitary(4, rng)) > 0.1);
}

TEST_CASE("LHST circuit probability equals the entanglement fidelity") {
  std::mt19937_64 rng(3);
  AnsatzLayout layout = small_layout(2, Entangler::CNOT);
  const AnsatzParams p = random_init(layout, 3);
  Circuit uc(2);
  uc.add(Gate::rotation(GateKind::XX, {0, 1}, 0.3));
  uc.add(Gate::rotation(GateKind::Rz, {1}, 1.2));
  const Circuit vc = build_V_circuit(p, layout);
  const Matrix u = circuit_to_unitary(uc), v = circuit_to_unitary(vc);
  for (std::size_t j = 0; j < 2; ++j) {
    const SampledFidelity s = entanglement_fidelity_sampled(uc, vc, j, 1000, 7);
    CHECK(s.exact == doctest::Approx(entanglement_fidelity_j(u, v, j)).epsilon(1e-12));
  }
}

TEST_CASE("sampled F_e stays within 5 standard errors in at least 95 of 100 trials") {
  std::mt19937_64 rng(4);
  const std::size_t n_samp = 1000000;
  int inside = 0;
  for (int t = 0; t < 100; ++t) {
    Circuit uc(2), vc(2);
    std::uniform_real_distribution<double> a(-3, 3);
    uc.add(Gate::rotation(GateKind::Ry, {0}, a(rng)));
    uc.add(Gate::cnot(0, 1));
    uc.add(Gate::rotation(GateKind::Rx, {1}, a(rng)));
    vc.add(Gate::rotation(GateKind::ZZ, {0, 1}, a(rng)));
    vc.add(Gate::rotation(GateKind::Ry, {1}, a(rng)));
    const SampledFidelity s = entanglement_fidelity_sampled(uc, vc, t % 2, n_samp, derive_seed(99, t));
    const double p = s.exact;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-300) / double(n_samp));
    if (std::abs(s.estimate - p) <= 5 * se) ++inside;
  }
  CHECK(inside >= 95);
}

TEST_CASE("sampled cost is reproducible given the seed") {
  std::mt19937_64 rng(5);
  const Matrix u = haar_unitary(4, rng), v = haar_unitary(4, rng);
  const CostReport a = cost_lhst_sampled(u, v, 5000, 42);
  const CostReport b = cost_lhst_sampled(u, v, 5000, 42);
  const CostReport c = cost_lhst_sampled(u, v, 5000, 43);
  CHECK(a.value == b.value);
  CHECK(a.value != c.value);
  CHECK(a.mode == CostMode::Sampled);
  CHECK(std::abs(a.value - cost_lhst(u, v)) < 6 * a.std_err + 1e-12);
}

TEST_CASE("shift-rule gradients match central finite differences") {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const Entangler e = std::array{Entangler::CNOT, Entangler::ZZ, Entangler::XX}[t % 3];
    const AnsatzLayout layout = small_layout(n, e);
    const AnsatzParams p = random_init(layout, rng(), 3.0, 1.0);
    const Matrix u = haar_unitary(std::size_t{1} << n, rng);
    const CostOptions opts;
    const double h = 1e-5;
    for (std::size_t k = 0; k < p.theta.size(); ++k) {
      AnsatzParams a = p, b = p;
      a.theta[k] += h;
      b.theta[k] -= h;
      const double fd = (cost_lhst(u, build_V(a, layout)) - cost_lhst(u, build_V(b, layout))) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad_theta(u, layout, p, k, opts)));
    }
    for (std::size_t l = 0; l < p.gamma.size(); ++l) {
      AnsatzParams a = p, b = p;
      a.gamma[l] += h;
      b.gamma[l] -= h;
      const double fd = (cost_lhst(u, build_V(a, layout)) - cost_lhst(u, build_V(b, layout))) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad_gamma(u, layout, p, l, opts)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("shared gradient context agrees with per-slot evaluation") {
  std::mt19937_64 rng(7);
  const AnsatzLayout layout = small_layout(3, Entangler::ZZ);
  const AnsatzParams p = random_init(layout, 1, 3.0, 1.0);
  const Matrix u = haar_unitary(8, rng);
  const CostOptions opts;
  const GradientContext ctx = make_gradient_context(u, layout, p);
  for (std::size_t k = 0; k < p.theta.size(); ++k) {
    CHECK(grad_theta(ctx, k, opts) == doctest::Approx(grad_theta(u, layout, p, k, opts)).epsilon(1e-10));
  }
  const Gradient g = full_gradient(u, layout, p, opts);
  for (std::size_t l = 0; l < p.gamma.size(); ++l) {
    CHECK(g.gamma[l] == doctest::Approx(grad_gamma(u, layout, p, l, opts)).epsilon(1e-10));
  }
}

TEST_CASE("sampled gradients are reproducible and unbiased on average") {
  std::mt19937_64 rng(8);
  const AnsatzLayout layout = small_layout(1, Entangler::CNOT, 1);
  const AnsatzParams p = random_init(layout, 2, 3.0, 1.0);
  const Matrix u = haar_unitary(2, rng);
  CostOptions exact;
  CostOptions sampled;
  sampled.mode = CostMode::Sampled;
  sampled.n_samp = 200000;
  sampled.seed = 17;
  const Gradient a = full_gradient(u, layout, p, sampled);
  const Gradient b = full_gradient(u, layout, p, sampled);
  CHECK(a.theta == b.theta);
  const Gradient e = full_gradient(u, layout, p, exact);
  for (std::size_t k = 0; k < e.theta.size(); ++k) CHECK(std::abs(a.theta[k] - e.theta[k]) < 0.02);
}

TEST_CASE("derive_seed gives distinct streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(1, a, b));
  }
  CHECK(seen.size() == 2500);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST_CASE("termination threshold inverts the exact fidelity bound") {
  for (double f : {0.9, 0.99}) {
    for (long long n : {1LL, 10LL, 30LL}) {
      for (double eps_ts : {0.0, 1e-4}) {
        const ThresholdResult t = termination_threshold(f, n, 2, eps_ts);
        const FidelityBound b = fidelity_lower_bound(eps_ts, t.exact, 2, n);
        CHECK(b.exact == doctest::Approx(f).epsilon(1e-9));
        CHECK(t.approx > 0.0);
      }
    }
  }
  CHECK_THROWS_AS(termination_threshold(0.99, 10, 2, 1.0), std::domain_error);
  CHECK_THROWS(termination_threshold(1.0, 10, 2, 0.0));
}
