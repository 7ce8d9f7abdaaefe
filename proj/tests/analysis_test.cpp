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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "vff/analysis.hpp"
#include "vff/cost.hpp"
#include "vff/optimizer.hpp"

using namespace vff;

namespace {

double brute_force_matching(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(std::polar(1.0, a[i]) - std::polar(1.0, b[perm[i]]));
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct Trained {
  PauliSum h;
  TrotterConfig trotter;
  AnsatzLayout layout;
  AnsatzParams params;
  double cost = 1.0;
};

Trained train_hubbard(double u, double threshold) {
  Trained t{build_hubbard2(1.0, u), {}, {}, {}, 1.0};
  t.trotter.dt = 0.1;
  t.layout.w = WLayout::layered(2, 3);
  t.layout.d_locality = 2;
  OptimizerConfig cfg;
  cfg.threshold = threshold;
  cfg.max_iters = 20000;
  const Matrix target = circuit_to_unitary(trotter_step(t.h, t.trotter));
  for (std::uint64_t seed = 1; seed <= 8 && t.cost > threshold; ++seed) {
    const OptimizationTrace tr = optimize(target, t.layout, random_init(t.layout, seed), cfg);
    if (tr.final_cost() < t.cost) {
      t.params = tr.params;
      t.cost = tr.final_cost();
    }
  }
  return t;
}

}  // namespace

TEST_CASE("power lemma on random unitary pairs") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = haar_unitary(4, rng), b = haar_unitary(4, rng);
    for (std::size_t n = 1; n <= 8; ++n) {
      for (SchattenP p : {SchattenP::One, SchattenP::Two, SchattenP::Inf}) CHECK(check_power_lemma(a, b, n, p).holds());
    }
  }
}

TEST_CASE("C_LHST <= C_HST <= n C_LHST") {
  std::mt19937_64 rng(2);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t < 50; ++t) {
      const Matrix u = haar_unitary(std::size_t{1} << n, rng), v = haar_unitary(std::size_t{1} << n, rng);
      const double l = cost_lhst(u, v), h = cost_hst(u, v);
      CHECK(l <= h + 1e-12);
      CHECK(h <= double(n) * l + 1e-12);
    }
  }
}

TEST_CASE("average fidelity agrees with a Monte-Carlo Haar average") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const Matrix u = haar_unitary(d, rng);
    // A nearby V keeps the fidelity away from the Haar floor.
    const Matrix v = u * expm_hermitian(testing::random_hermitian(d, rng), 0.3);
    const int samples = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vector psi = haar_state(d, rng);
      const double f = std::norm((u * psi).dot(v * psi));
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
    CHECK(std::abs(average_fidelity(u, v) - mean) <= 3 * se);
    CHECK(average_fidelity(u, v) == doctest::Approx(1.0 - double(d) * cost_hst(u, v) / double(d + 1)));
  }
}

TEST_CASE("cost-scaling inequality on near-identity perturbations") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Matrix u = haar_unitary(8, rng);
    const Matrix v = u * expm_hermitian(testing::random_hermitian(8, rng), 1e-3);
    for (std::size_t n = 1; n <= 20; ++n) {
      const CostScalingCheck c = check_cost_scaling(u, v, n);
      if (!c.precondition_violated) CHECK(c.exact.holds());
    }
  }
}

TEST_CASE("phase matching finds the optimal permutation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (std::size_t d : {2u, 4u, 6u, 8u}) {
    for (int t = 0; t < (d == 8 ? 3 : 20); ++t) {
      std::vector<double> a(d), b(d);
      for (double& x : a) x = ang(rng);
      for (double& x : b) x = ang(rng);
      std::vector<std::size_t> sigma;
      const double got = matched_phase_error(a, b, &sigma);
      CHECK(got == doctest::Approx(brute_force_matching(a, b)).epsilon(1e-12));
      double again = 0.0;
      for (std::size_t i = 0; i < d; ++i) again += std::norm(std::polar(1.0, a[i]) - std::polar(1.0, b[sigma[i]]));
      CHECK(again == doctest::Approx(got).epsilon(1e-12));
    }
  }
}

TEST_CASE("Hoffman-Wielandt check respects both bounds") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const Matrix u = haar_unitary(4, rng);
    const Matrix v = u * expm_hermitian(testing::random_hermitian(4, rng), 0.05);
    const HoffmanWielandt hw = hoffman_wielandt_check(u, v);
    CHECK(hw.matched_error <= hw.bound_2norm + 1e-9);
    if (hw.lhst_bound_valid) CHECK(hw.matched_error <= hw.bound_lhst + 1e-9);
    const double aligned = std::pow(schatten_norm(u - std::polar(1.0, hw.phi0) * v, SchattenP::Two), 2);
    CHECK(hw.bound_2norm == doctest::Approx(aligned).epsilon(1e-9));
  }
}

TEST_CASE("eigenphases are sorted and wrapped") {
  std::mt19937_64 rng(7);
  const auto ph = eigenphases(haar_unitary(8, rng));
  CHECK(std::is_sorted(ph.begin(), ph.end()));
  for (double p : ph) CHECK((p > -std::numbers::pi - 1e-12 && p <= std::numbers::pi + 1e-12));
}

TEST_CASE("fidelity bounds lower-bound the fast-forwarded fidelity of a trained Hubbard model") {
  // Cold starts at u > 0 can park on a shallow saddle just above 1e-6.
  const Trained t = train_hubbard(0.05, 1e-6);
  REQUIRE(t.cost <= 1e-5);
  for (long long n : {1LL, 5LL, 20LL, 60LL}) {
    const FidelityReport r = fast_forward_report(t.h, t.trotter, t.layout, t.params, n, t.cost);
    if (r.bound_preconditions) CHECK(r.lower_bound_exact <= r.avg_fidelity + 1e-9);
    CHECK(r.lower_bound_exact >= r.lower_bound_compact - 1e-12);
  }
  CHECK(fast_forward_window(t.h, t.trotter, t.layout, t.params, 1e-2, 200) >= 20);
}

TEST_CASE("fast-forward window is measured against powers of the Trotter step") {
  const Trained t = train_hubbard(0.1, 1e-6);
  REQUIRE(t.cost <= 1e-5);
  const auto d = static_cast<Eigen::Index>(4);
  Matrix step = Matrix::Identity(d, d);
  for (const PauliTerm& term : t.h.terms())
    step = testing::taylor_expm(term.coeff * testing::pauli_string(term.pauli), t.trotter.dt) * step;
  const Matrix v = circuit_to_unitary(build_V_circuit(t.params, t.layout));
  Matrix un = step, vn = v;
  long long expected = 0;
  for (long long n = 1; n <= 300; ++n) {
    if (n > 1) {
      un = step * un;
      vn = v * vn;
    }
    if (1.0 - average_fidelity(un, vn) > 1e-2) break;
    expected = n;
  }
  CHECK(fast_forward_window(t.h, t.trotter, t.layout, t.params, 1e-2, 300) == expected);
}

TEST_CASE("at N = 1 the fast-forward cost is the training cost for commuting terms") {
  const Trained t = train_hubbard(0.0, 1e-6);
  const FidelityReport r = fast_forward_report(t.h, t.trotter, t.layout, t.params, 1, t.cost);
  CHECK(r.cost_lhst_ff == doctest::Approx(t.cost).epsilon(1e-8));
}

TEST_CASE("fidelity_lower_bound preconditions") {
  CHECK_FALSE(fidelity_lower_bound(0.0, 0.9, 2, 1).precondition_ok);
  CHECK_FALSE(fidelity_lower_bound(0.0, 1e-2, 2, 100).precondition_ok);
  const FidelityBound b = fidelity_lower_bound(0.0, 0.0, 2, 10);
  CHECK(b.precondition_ok);
  CHECK(b.exact == doctest::Approx(1.0));
}

TEST_CASE("noiseless comparison reproduces the pure-state fidelities") {
  const Trained t = train_hubbard(0.0, 1e-6);
  const Vector psi = uniform_superposition(2);
  const NoiseComparison c = compare_under_noise(t.h, t.trotter, t.layout, t.params, NoiseModel::noiseless(), psi, 10);
  REQUIRE(c.trotter.fidelity.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const long long n = c.vff.n_steps[i];
    const Vector exact = exact_evolution(t.h, 0.1 * double(n)) * psi;
    const Vector ff = build_V(fast_forward_params(t.params, n), t.layout) * psi;
    CHECK(c.vff.fidelity[i] == doctest::Approx(std::norm(exact.dot(ff))).epsilon(1e-9));
    // Commuting terms: Trotter is exact.
    CHECK(c.trotter.fidelity[i] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("depolarizing noise makes VFF overtake Trotter") {
  const Trained t = train_hubbard(0.05, 1e-6);
  std::mt19937_64 rng(8);
  const NoiseModel nm{};
  const NoiseComparison c = compare_under_noise(t.h, t.trotter, t.layout, t.params, nm, haar_state(4, rng), 400, 0.2);
  CHECK(c.crossover_N > 0);
  CHECK(c.R_ff > 1.0);
}
