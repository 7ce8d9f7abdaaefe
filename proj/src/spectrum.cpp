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

#include "vff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vff {

std::vector<double> time_grid(double dt, double t_max, double step_fraction) {
  if (!(dt > 0.0) || !(t_max > 0.0) || !(step_fraction > 0.0)) {
    throw std::invalid_argument("time_grid: dt, t_max and step must be positive");
  }
  const double h = step_fraction * dt;
  const auto count = static_cast<std::size_t>(std::floor(t_max / h + 1e-9)) + 1;
  std::vector<double> t(count);
  for (std::size_t j = 0; j < count; ++j) t[j] = static_cast<double>(j) * h;
  return t;
}

std::vector<double> diagonal_energies(const AnsatzParams& params, const AnsatzLayout& layout,
                                      double dt, double phase_offset) {
  if (!(dt > 0.0)) throw std::invalid_argument("diagonal_energies: dt must be positive");
  layout.validate(params);
  const RealVector phi = walsh_phases(layout.n_qubits(), params.gamma, layout.d_locality);
  std::vector<double> out(static_cast<std::size_t>(phi.size()));
  for (Eigen::Index z = 0; z < phi.size(); ++z) {
    double a = std::remainder(phi[z] + phase_offset, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    out[static_cast<std::size_t>(z)] = -a / dt;
  }
  return out;
}

std::vector<cplx> time_series_g(const AnsatzParams& params, const AnsatzLayout& layout,
                                double dt, const std::vector<double>& t_grid,
                                double phase_offset, const std::optional<SeriesShots>& shots) {
  const auto lambdas = diagonal_energies(params, layout, dt, phase_offset);
  const double d = static_cast<double>(lambdas.size());
  std::vector<cplx> g(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    cplx acc = 0.0;
    for (double l : lambdas) acc += std::polar(1.0, -l * t_grid[j]);
    g[j] = acc;
  }
  if (!shots) return g;
  if (shots->n_samp == 0) throw std::invalid_argument("time_series_g: n_samp must be positive");
  // Each quadrature is a +-1 outcome with mean Re(g/d) or Im(g/d).
  std::mt19937_64 rng(shots->seed);
  const double n = static_cast<double>(shots->n_samp);
  auto draw = [&](double mean) {
    const double p = std::clamp(0.5 * (1.0 + mean), 0.0, 1.0);
    std::binomial_distribution<std::size_t> bin(shots->n_samp, p);
    return 2.0 * static_cast<double>(bin(rng)) / n - 1.0;
  };
  for (cplx& x : g) {
    const double re = draw(x.real() / d);
    const double im = draw(x.imag() / d);
    x = d * cplx(re, im);
  }
  return g;
}

SpectrumEstimate spectrum_from_series(const std::vector<cplx>& g, const std::vector<double>& t_grid,
                                      double lambda_min, double lambda_max, std::size_t n_lambda,
                                      const SpectrumConventions& conv) {
  if (g.size() != t_grid.size()) throw std::invalid_argument("spectrum: g and t_grid differ in size");
  if (g.size() < 8) throw std::invalid_argument("spectrum: need at least 8 samples");
  if (!(lambda_max > lambda_min) || n_lambda < 3) {
    throw std::invalid_argument("spectrum: empty lambda range");
  }
  const double h = t_grid[1] - t_grid[0];
  if (!(h > 0.0)) throw std::invalid_argument("spectrum: t_grid must increase");
  for (std::size_t j = 1; j < t_grid.size(); ++j) {
    if (std::abs((t_grid[j] - t_grid[j - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument("spectrum: t_grid is not uniform");
    }
  }

  SpectrumEstimate est;
  est.conventions = conv;
  est.t_max = t_grid.back() - t_grid.front();
  est.resolution = conv.c / est.t_max;

  const double centre = t_grid.front() + 0.5 * est.t_max;
  const double sigma = conv.window_fraction * est.t_max;
  std::vector<cplx> wg(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = (t_grid[j] - centre) / sigma;
    wg[j] = std::exp(-0.5 * x * x) * g[j];
  }

  est.lambda_grid.resize(n_lambda);
  est.power.resize(n_lambda);
  const double dl = (lambda_max - lambda_min) / static_cast<double>(n_lambda - 1);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n_lambda; ++k) {
    const double l = lambda_min + static_cast<double>(k) * dl;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < wg.size(); ++j) acc += wg[j] * std::polar(1.0, l * t_grid[j]);
    est.lambda_grid[k] = l;
    est.power[k] = std::norm(acc);
  }

  const double smax = *std::max_element(est.power.begin(), est.power.end());
  if (smax <= 0.0) return est;
  const double floor = conv.peak_threshold * smax;
  for (std::size_t k = 1; k + 1 < n_lambda; ++k) {
    const double s = est.power[k];
    if (s < floor || s < est.power[k - 1] || s <= est.power[k + 1]) continue;
    // Parabolic refinement of the maximum.
    const double a = est.power[k - 1], b = s, c = est.power[k + 1];
    const double denom = a - 2.0 * b + c;
    const double off = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
    est.peaks.push_back(est.lambda_grid[k] + off * dl);
    est.peak_heights.push_back(s);

    const double half = 0.5 * s;
    std::size_t lo = k, hi = k;
    while (lo > 0 && est.power[lo] > half) --lo;
    while (hi + 1 < n_lambda && est.power[hi] > half) ++hi;
    auto cross = [&](std::size_t i, std::size_t j) {
      const double si = est.power[i], sj = est.power[j];
      const double f = (sj == si) ? 0.0 : (half - si) / (sj - si);
      return est.lambda_grid[i] + f * (est.lambda_grid[j] - est.lambda_grid[i]);
    };
    const double left = est.power[lo] <= half ? cross(lo, lo + 1) : est.lambda_grid[lo];
    const double right = est.power[hi] <= half ? cross(hi - 1, hi) : est.lambda_grid[hi];
    est.widths.push_back(right - left);
  }
  return est;
}

void compare_to_reference(SpectrumEstimate& est, std::vector<double> lambdas_ref, double dt) {
  std::sort(lambdas_ref.begin(), lambdas_ref.end());
  est.lambdas_ref = std::move(lambdas_ref);
  est.matched_error = 0.0;
  est.max_peak_offset = 0.0;
  if (est.peaks.empty()) {
    est.matched_error = std::numeric_limits<double>::infinity();
    est.max_peak_offset = std::numeric_limits<double>::infinity();
    return;
  }
  for (double l : est.lambdas_ref) {
    double best = std::numeric_limits<double>::infinity();
    for (double p : est.peaks) {
      best = std::min(best, std::norm(std::polar(1.0, -l * dt) - std::polar(1.0, -p * dt)));
    }
    est.matched_error += best;
  }
  for (double p : est.peaks) {
    double best = std::numeric_limits<double>::infinity();
    for (double l : est.lambdas_ref) best = std::min(best, std::abs(p - l));
    est.max_peak_offset = std::max(est.max_peak_offset, best);
  }
}

}  // namespace vff
