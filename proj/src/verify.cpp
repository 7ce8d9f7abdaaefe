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

// Property suites behind `vff verify`. Each case is a randomized sweep of
// one invariant; the detail string carries the worst value seen.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "vff/analysis.hpp"
#include "vff/cost.hpp"
#include "vff/experiment.hpp"

namespace vff {

namespace {

Circuit random_circuit(std::size_t n, std::size_t gates, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-3.2, 3.2);
  std::uniform_int_distribution<int> kind(0, 6);
  std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
  Circuit c(n);
  for (std::size_t g = 0; g < gates; ++g) {
    const int k = n == 1 ? kind(rng) % 3 : kind(rng);
    const std::size_t a = qubit(rng);
    std::size_t b = qubit(rng);
    if (n > 1) {
      while (b == a) b = qubit(rng);
    }
    switch (k) {
      case 0: c.add(Gate::rotation(GateKind::Rx, {a}, angle(rng))); break;
      case 1: c.add(Gate::rotation(GateKind::Ry, {a}, angle(rng))); break;
      case 2: c.add(Gate::rotation(GateKind::Rz, {a}, angle(rng))); break;
      case 3: c.add(Gate::rotation(GateKind::ZZ, {a, b}, angle(rng))); break;
      case 4: c.add(Gate::rotation(GateKind::XX, {a, b}, angle(rng))); break;
      case 5: c.add(Gate::cnot(a, b)); break;
      default: c.add(Gate::hadamard(a)); break;
    }
  }
  return c;
}

std::string worst(const char* what, double x) {
  std::ostringstream s;
  s << what << " " << x;
  return s.str();
}

}  // namespace

std::vector<VerifyCase> run_verify(std::uint64_t seed) {
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(seed);

  {
    double w = 0.0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
      w = std::max(w, unitarity_defect(circuit_to_unitary(random_circuit(n, 20, rng))));
    }
    out.push_back({"circuit unitarity", w < 1e-9, worst("max ||U^dagger U - I||", w)});
  }
  {
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
      const std::size_t d = std::size_t{1} << (1 + t % 3);
      const Matrix m = Matrix::Random(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const double n1 = schatten_norm(m, SchattenP::One), n2 = schatten_norm(m, SchattenP::Two),
                   ni = schatten_norm(m, SchattenP::Inf);
      ok = ok && ni <= n2 + 1e-12 && n2 <= n1 + 1e-12 && n2 <= std::sqrt(double(d)) * ni + 1e-12;
    }
    out.push_back({"Schatten norm ordering", ok, ""});
  }
  {
    double w = 0.0;
    const PauliSum h = build_heisenberg(3, 0.7, -1.1, 2.0, 0.5);
    for (int t = 0; t < 20; ++t) {
      std::uniform_real_distribution<double> ts(-2.0, 2.0);
      const double a = ts(rng), b = ts(rng);
      w = std::max(w, (exact_evolution(h, a) * exact_evolution(h, b) - exact_evolution(h, a + b))
                          .cwiseAbs()
                          .maxCoeff());
    }
    out.push_back({"evolution group law", w < 1e-9, worst("max entry error", w)});
  }
  {
    double tr = 0.0, neg = 0.0;
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
      DensityMatrix rho = DensityMatrix::from_state(haar_state(std::size_t{1} << n, rng));
      rho = apply_noisy_circuit(random_circuit(n, 10, rng), std::move(rho), NoiseModel{0.05, 0.1});
      tr = std::max(tr, std::abs(rho.trace() - 1.0));
      neg = std::min(neg, rho.min_eigenvalue());
    }
    out.push_back({"depolarizing channel trace and positivity", tr < 1e-10 && neg > -1e-8,
                   worst("max |Tr rho - 1|", tr)});
  }
  {
    bool ok = true;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (int t = 0; t < 100; ++t) {
        const Matrix u = haar_unitary(std::size_t{1} << n, rng);
        const Matrix v = haar_unitary(std::size_t{1} << n, rng);
        const double l = cost_lhst(u, v), h = cost_hst(u, v);
        ok = ok && l <= h + 1e-12 && h <= double(n) * l + 1e-12;
      }
    }
    out.push_back({"C_LHST <= C_HST <= n C_LHST", ok, ""});
  }
  {
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
      const Matrix u1 = haar_unitary(4, rng), u2 = haar_unitary(4, rng);
      for (std::size_t n = 1; n <= 8; ++n) {
        for (SchattenP p : {SchattenP::One, SchattenP::Two, SchattenP::Inf}) {
          ok = ok && check_power_lemma(u1, u2, n, p).holds();
        }
      }
    }
    out.push_back({"power lemma", ok, ""});
  }
  {
    bool ok = true;
    for (int t = 0; t < 30; ++t) {
      const Matrix u = haar_unitary(4, rng);
      // V = U exp(-i eps K) for a small random Hermitian K.
      const Matrix k = haar_unitary(4, rng);
      const Matrix herm = 0.5 * (k + k.adjoint());
      const Matrix v = u * expm_hermitian(herm, 1e-3 * (1 + t % 5));
      for (std::size_t n = 1; n <= 16; ++n) {
        const CostScalingCheck c = check_cost_scaling(u, v, n);
        ok = ok && (c.precondition_violated || c.exact.holds());
      }
    }
    out.push_back({"cost scaling inequality", ok, ""});
  }
  {
    double w = 0.0;
    for (Entangler e : {Entangler::CNOT, Entangler::ZZ, Entangler::XX}) {
      AnsatzLayout layout;
      layout.w = WLayout::layered(2, 2, e);
      layout.d_locality = 2;
      const AnsatzParams p = random_init(layout, rng(), 3.0, 1.0);
      const Matrix u = haar_unitary(4, rng);
      CostOptions opts;
      const Gradient g = full_gradient(u, layout, p, opts);
      const double h = 1e-5;
      for (std::size_t k = 0; k < p.theta.size(); ++k) {
        AnsatzParams a = p, b = p;
        a.theta[k] += h;
        b.theta[k] -= h;
        const double fd = (cost_lhst(u, build_V(a, layout)) - cost_lhst(u, build_V(b, layout))) / (2 * h);
        w = std::max(w, std::abs(fd - g.theta[k]));
      }
      for (std::size_t k = 0; k < p.gamma.size(); ++k) {
        AnsatzParams a = p, b = p;
        a.gamma[k] += h;
        b.gamma[k] -= h;
        const double fd = (cost_lhst(u, build_V(a, layout)) - cost_lhst(u, build_V(b, layout))) / (2 * h);
        w = std::max(w, std::abs(fd - g.gamma[k]));
      }
    }
    out.push_back({"parameter shift vs finite difference", w < 1e-6, worst("max deviation", w)});
  }
  {
    double w = 0.0;
    for (int t = 0; t < 20; ++t) {
      AnsatzLayout layout;
      layout.w = WLayout::layered(3, 2, Entangler::ZZ);
      layout.d_locality = 3;
      const AnsatzParams p = random_init(layout, rng(), 3.0, 1.0);
      const Grown g = grow_ansatz(layout.w, p.theta);
      AnsatzLayout grown = layout;
      grown.w = g.layout;
      const Matrix u = haar_unitary(8, rng);
      w = std::max(w, std::abs(cost_lhst(u, build_V(p, layout)) -
                               cost_lhst(u, build_V({g.theta, p.gamma}, grown))));
    }
    out.push_back({"grown ansatz keeps the cost", w < 1e-10, worst("max change", w)});
  }
  {
    bool ok = true;
    for (double eps : {0.0, 1e-4, 1e-3}) {
      for (double c : {0.0, 1e-8, 1e-6, 1e-4}) {
        for (long long n : {1LL, 10LL, 30LL}) {
          const FidelityBound b = fidelity_lower_bound(eps, c, 2, n);
          if (b.precondition_ok) ok = ok && b.exact >= b.compact - 1e-9;
        }
      }
    }
    out.push_back({"exact fidelity bound dominates the compact form", ok, ""});
  }
  {
    bool ok = true;
    for (int t = 0; t < 30; ++t) {
      const Matrix u = haar_unitary(4, rng);
      const Matrix k = haar_unitary(4, rng);
      const Matrix v = u * expm_hermitian(0.5 * (k + k.adjoint()), 0.05);
      const HoffmanWielandt hw = hoffman_wielandt_check(u, v);
      ok = ok && hw.matched_error <= hw.bound_2norm + 1e-9 &&
           (!hw.lhst_bound_valid || hw.matched_error <= hw.bound_lhst + 1e-9);
    }
    out.push_back({"Hoffman-Wielandt bounds", ok, ""});
  }
  return out;
}

}  // namespace vff
