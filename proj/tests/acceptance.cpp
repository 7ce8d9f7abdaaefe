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

// Acceptance run: trains the Hubbard-2 and Heisenberg-3 sweeps from the
// shipped configs, then checks every criterion and prints one PASS/FAIL line
// each. Usage: vff_acceptance <configs dir> [work dir].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vff/analysis.hpp"
#include "vff/cost.hpp"
#include "vff/experiment.hpp"

namespace {

using namespace vff;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentConfig load_with_output(const fs::path& config, const fs::path& out) {
  std::ifstream in(config);
  if (!in) throw std::runtime_error("cannot open " + config.string());
  return ExperimentConfig::from_json(apply_overrides(json::parse(in), {{}, out.string(), {}, {}}));
}

struct Trained {
  ExperimentConfig cfg;
  DiagonalizeResult diag;
  std::vector<TrainedPoint> points;
  std::vector<FastForwardPoint> ff;
  double seconds = 0.0;
};

Trained train(const fs::path& config, const fs::path& out) {
  Trained t{load_with_output(config, out), {}, {}, {}, 0.0};
  const auto t0 = Clock::now();
  t.diag = run_diagonalize(t.cfg);
  t.points = load_trained(t.cfg);
  t.ff = run_fastforward(t.cfg, t.points);
  t.seconds = seconds_since(t0);
  return t;
}

Outcome sweep_criterion(const Trained& t, long long min_window, double max_seconds) {
  std::size_t converged = 0, rescued = 0;
  double worst_cost = 0.0;
  long long min_w = -1;
  for (std::size_t i = 0; i < t.diag.points.size(); ++i) {
    const PointResult& p = t.diag.points[i];
    if (p.converged) ++converged;
    if (!p.warm_start_kept) ++rescued;
    worst_cost = std::max(worst_cost, p.trace.final_cost());
    if (min_w < 0 || t.ff[i].window < min_w) min_w = t.ff[i].window;
  }
  const std::size_t n = t.diag.points.size();
  const bool ok = converged == n && min_w >= min_window && t.seconds < max_seconds;
  std::string d = fmt("%zu/%zu points reached %.0e (worst %.3g), %zu by cold restart after a stalled warm start; "
                      "min window %lld steps (need %lld); %.0f s (limit %.0f s)",
                      converged, n, t.cfg.optimizer.base.threshold, worst_cost, rescued, min_w, min_window,
                      t.seconds, max_seconds);
  if (t.diag.budget_exhausted) d += "; time budget exhausted";
  return {ok, d};
}

Outcome error_bounds(const std::vector<const Trained*>& trained) {
  std::mt19937_64 rng(2026);
  std::size_t lemma_checks = 0, lemma_fail = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const std::size_t d = std::size_t{1} << (1 + pair % 3);
    const Matrix a = haar_unitary(d, rng), b = haar_unitary(d, rng);
    for (std::size_t n = 1; n <= 8; ++n) {
      for (SchattenP p : {SchattenP::One, SchattenP::Two, SchattenP::Inf}) {
        ++lemma_checks;
        if (!check_power_lemma(a, b, n, p).holds()) ++lemma_fail;
      }
    }
  }
  std::size_t scaling_checks = 0, scaling_fail = 0, bound_checks = 0, bound_fail = 0;
  for (const Trained* t : trained) {
    for (const FastForwardPoint& fp : t->ff) {
      for (const CostScalingCheck& c : fp.scaling) {
        if (c.precondition_violated) continue;
        ++scaling_checks;
        if (!c.exact.holds()) ++scaling_fail;
      }
      for (const FidelityReport& r : fp.reports) {
        if (!r.bound_preconditions) continue;
        ++bound_checks;
        if (r.lower_bound_exact > r.avg_fidelity + 1e-9) ++bound_fail;
      }
    }
  }
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = std::size_t{1} << (1 + k % 3);
    const Matrix u = haar_unitary(d, rng);
    const Matrix g = haar_unitary(d, rng);
    const Matrix v = u * expm_hermitian(0.5 * (g + g.adjoint()), 1e-4 * (1 + k % 10));
    for (std::size_t n = 1; n <= 30; ++n) {
      const CostScalingCheck c = check_cost_scaling(u, v, n);
      if (c.precondition_violated) continue;
      ++scaling_checks;
      if (!c.exact.holds()) ++scaling_fail;
    }
  }
  const bool ok = lemma_fail == 0 && scaling_fail == 0 && bound_fail == 0 && scaling_checks > 0 && bound_checks > 0;
  return {ok, fmt("power lemma %zu/%zu, cost scaling %zu/%zu, exact fidelity bound %zu/%zu",
                  lemma_checks - lemma_fail, lemma_checks, scaling_checks - scaling_fail, scaling_checks,
                  bound_checks - bound_fail, bound_checks)};
}

Outcome gradients() {
  std::mt19937_64 rng(27);
  double worst = 0.0;
  std::size_t slots = 0;
  const Entangler kinds[] = {Entangler::CNOT, Entangler::ZZ, Entangler::XX};
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    AnsatzLayout layout;
    layout.w = WLayout::layered(n, 2, kinds[(t / 3) % 3]);
    layout.d_locality = n;  // every Walsh order up to 3-local
    const AnsatzParams p = random_init(layout, rng(), 3.0, 1.0);
    const Matrix u = haar_unitary(std::size_t{1} << n, rng);
    const CostOptions opts;
    const Gradient g = full_gradient(u, layout, p, opts);
    const double h = 1e-5;
    auto fd = [&](auto&& shift) {
      AnsatzParams a = p, b = p;
      shift(a, h);
      shift(b, -h);
      return (cost_lhst(u, build_V(a, layout)) - cost_lhst(u, build_V(b, layout))) / (2 * h);
    };
    for (std::size_t k = 0; k < p.theta.size(); ++k, ++slots) {
      worst = std::max(worst, std::abs(g.theta[k] - fd([k](AnsatzParams& q, double s) { q.theta[k] += s; })));
    }
    for (std::size_t l = 0; l < p.gamma.size(); ++l, ++slots) {
      worst = std::max(worst, std::abs(g.gamma[l] - fd([l](AnsatzParams& q, double s) { q.gamma[l] += s; })));
    }
  }
  return {worst < 1e-6, fmt("%zu slots on 20 instances, max |shift - FD| = %.2e (tol 1e-6)", slots, worst)};
}

Outcome cost_relations() {
  std::mt19937_64 rng(5);
  std::size_t sandwich = 0, sandwich_fail = 0, mc = 0, mc_fail = 0;
  double worst_z = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    for (int t = 0; t < 100; ++t) {
      const Matrix u = haar_unitary(d, rng), v = haar_unitary(d, rng);
      const double l = cost_lhst(u, v), h = cost_hst(u, v);
      ++sandwich;
      if (!(l <= h + 1e-12 && h <= double(n) * l + 1e-12)) ++sandwich_fail;
    }
    for (int t = 0; t < 3; ++t) {
      const Matrix u = haar_unitary(d, rng), v = haar_unitary(d, rng);
      const int samples = 10000;
      double s1 = 0.0, s2 = 0.0;
      for (int k = 0; k < samples; ++k) {
        const Vector psi = haar_state(d, rng);
        const double f = std::norm((u * psi).dot(v * psi));
        s1 += f;
        s2 += f * f;
      }
      const double mean = s1 / samples;
      const double se = std::sqrt(std::max(s2 / samples - mean * mean, 0.0) / samples);
      const double closed = 1.0 - double(d) * cost_hst(u, v) / double(d + 1);
      const double z = std::abs(closed - mean) / se;
      worst_z = std::max(worst_z, z);
      ++mc;
      if (z > 3.0) ++mc_fail;
    }
  }
  return {sandwich_fail == 0 && mc_fail == 0,
          fmt("sandwich %zu/%zu; Haar average %zu/%zu within 3 SE (worst %.2f SE)", sandwich - sandwich_fail,
              sandwich, mc - mc_fail, mc, worst_z)};
}

Outcome sampled_statistics() {
  std::mt19937_64 rng(6);
  const std::size_t n_samp = 1000000;
  int inside = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 2);
    AnsatzLayout layout;
    layout.w = WLayout::layered(n, 1, Entangler::CNOT);
    layout.d_locality = n;
    const Circuit vc = build_V_circuit(random_init(layout, rng(), 3.0, 1.0), layout);
    Circuit uc(n);
    std::uniform_real_distribution<double> a(-3, 3);
    for (std::size_t q = 0; q < n; ++q) uc.add(Gate::rotation(GateKind::Ry, {q}, a(rng)));
    if (n == 2) uc.add(Gate::rotation(GateKind::XX, {0, 1}, a(rng)));
    const SampledFidelity s = entanglement_fidelity_sampled(uc, vc, t % n, n_samp, derive_seed(6, t));
    const double p = s.exact;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-300) / double(n_samp));
    if (std::abs(s.estimate - p) <= 5 * se) ++inside;
  }
  return {inside >= 95, fmt("%d/100 estimates within 5 SE at n_samp = 1e6 (need 95)", inside)};
}

Outcome spectrum(const Trained& hub) {
  const auto pts = run_spectrum(hub.cfg, hub.points);
  std::size_t peaks = 0, bad_peaks = 0, hw_fail = 0, ratios = 0, bad_ratios = 0;
  double worst_offset_frac = 0.0, rmin = 1e9, rmax = 0.0;
  for (const SpectrumPoint& sp : pts) {
    const double u = sp.model.at("u");
    const std::vector<double> exact = {-std::sqrt(4 + u * u), -u, u, std::sqrt(4 + u * u)};
    const SpectrumEstimate* e500 = nullptr;
    const SpectrumEstimate* e1000 = nullptr;
    for (const auto& e : sp.estimates) {
      if (std::abs(e.t_max - 500 * hub.cfg.dt) < 1e-9) e500 = &e;
      if (std::abs(e.t_max - 1000 * hub.cfg.dt) < 1e-9) e1000 = &e;
    }
    if (!e500 || !e1000) return {false, "config lacks t_max = 500 dt and 1000 dt"};
    for (double p : e500->peaks) {
      double best = 1e9;
      for (double l : exact) best = std::min(best, std::abs(p - l));
      ++peaks;
      worst_offset_frac = std::max(worst_offset_frac, best / e500->resolution);
      if (best > e500->resolution) ++bad_peaks;
    }
    const double bound = sp.hw.lhst_bound_valid ? sp.hw.bound_lhst : sp.hw.bound_2norm;
    if (sp.hw.matched_error > bound + 1e-12) ++hw_fail;
    // Width ratio of the isolated outer peaks.
    for (double target : {exact.front(), exact.back()}) {
      auto width_at = [&](const SpectrumEstimate& e) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < e.peaks.size(); ++i) {
          if (std::abs(e.peaks[i] - target) < std::abs(e.peaks[k] - target)) k = i;
        }
        return e.widths.empty() ? 0.0 : e.widths[k];
      };
      const double w1 = width_at(*e1000);
      if (!(w1 > 0.0)) continue;
      const double r = width_at(*e500) / w1;
      ++ratios;
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      if (r < 1.5 || r > 2.5) ++bad_ratios;
    }
  }
  const bool ok = peaks > 0 && bad_peaks == 0 && hw_fail == 0 && ratios > 0 && bad_ratios == 0;
  return {ok, fmt("%zu/%zu peaks within one resolution width (worst %.2f widths); HW bound violated at %zu/%zu "
                  "points; width ratio 500/1000 dt in [%.3f, %.3f] (need 2 +- 25%%)",
                  peaks - bad_peaks, peaks, worst_offset_frac, hw_fail, pts.size(), rmin, rmax)};
}

Outcome beyond_coherence(const Trained& hub) {
  const NoiseModel nm{};
  std::size_t used = 0, fail = 0;
  double r_min = 1e300;
  long long cross_max = 0;
  for (std::size_t i = 0; i < hub.points.size(); ++i) {
    const TrainedPoint& tp = hub.points[i];
    if (!(tp.final_cost < 1e-3)) continue;
    std::mt19937_64 rng(derive_seed(hub.cfg.seed, 0x7517, i));
    const PauliSum h = build_model(hub.cfg.model.name, tp.model);
    const NoiseComparison c =
        compare_under_noise(h, hub.cfg.trotter(), hub.cfg.layout, tp.params, nm, haar_state(4, rng), 400, 0.2);
    ++used;
    r_min = std::min(r_min, c.R_ff);
    cross_max = std::max(cross_max, c.crossover_N);
    if (!(c.crossover_N > 0 && c.R_ff > 1.0)) ++fail;
  }
  return {used > 0 && fail == 0,
          fmt("p1 = %.0e, p2 = %.0e, delta 0.2: %zu/%zu trained points cross over (latest N* = %lld), min R_ff = %.3g",
              nm.p1, nm.p2, used - fail, used, cross_max, r_min)};
}

Outcome gate_counts(const fs::path& configs, const fs::path& work) {
  std::string detail;
  bool ok = true;
  for (const char* name : {"hubbard2", "heisenberg3"}) {
    const ExperimentConfig cfg = load_with_output(configs / (std::string(name) + ".json"), work / name);
    const GateCountReport r = report_gate_counts(cfg);
    const auto& g = cfg.analysis.gatecount;
    const GateCounts v = r.vff.at(g.vff_convention);
    const GateCounts t = r.trotter.at(g.trotter_convention);
    detail += fmt("%s%s VFF (%lld, %lld) = %lld vs Trotter x%lld (%lld, %lld) = %lld", detail.empty() ? "" : "; ", name,
                  v.one_qubit, v.two_qubit, v.total(), r.trotter_steps, t.one_qubit, t.two_qubit, t.total());
    for (const auto& f : r.failures) detail += " [" + f + "]";
    ok = ok && r.checks_passed;
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <configs dir> [work dir]\n", argv[0]);
    return 2;
  }
  const fs::path configs = argv[1];
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::current_path() / "acceptance_out";
  fs::create_directories(work);

  std::vector<std::pair<std::string, Outcome>> results;
  auto run = [&](const std::string& name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, o);
  };

  std::optional<Trained> hub, heis;
  try {
    hub = train(configs / "hubbard2.json", work / "hubbard2");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "Hubbard-2 training failed: %s\n", e.what());
  }
  run("1 Hubbard-2 sweep and fast-forward window", [&] {
    if (!hub) return Outcome{false, "training did not run"};
    return sweep_criterion(*hub, 20, 300.0);
  });
  try {
    heis = train(configs / "heisenberg3.json", work / "heisenberg3");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "Heisenberg-3 training failed: %s\n", e.what());
  }
  run("2 Heisenberg-3 sweep and fast-forward window", [&] {
    if (!heis) return Outcome{false, "training did not run"};
    return sweep_criterion(*heis, 50, 1200.0);
  });
  run("3 error-bound suite", [&] {
    std::vector<const Trained*> t;
    if (hub) t.push_back(&*hub);
    if (heis) t.push_back(&*heis);
    return error_bounds(t);
  });
  run("4 parameter-shift gradients", gradients);
  run("5 cost relations", cost_relations);
  run("6 sampled-mode statistics", sampled_statistics);
  run("7 spectrum estimation", [&] {
    if (!hub) return Outcome{false, "no trained Hubbard-2 set"};
    return spectrum(*hub);
  });
  run("8 fast forwarding beyond the noisy Trotter horizon", [&] {
    if (!hub) return Outcome{false, "no trained Hubbard-2 set"};
    return beyond_coherence(*hub);
  });
  run("9 gate-count compression", [&] { return gate_counts(configs, work); });

  std::size_t passed = 0;
  for (const auto& [name, o] : results) passed += o.pass ? 1 : 0;
  std::printf("%zu/%zu criteria passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}
