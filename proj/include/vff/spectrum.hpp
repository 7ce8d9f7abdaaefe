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

// Energy estimation from the trained diagonal: the phase sum
// g(t) = sum_z exp(-i lambda_z t) and its windowed periodogram.
//
// Energies follow lambda = -arg(eigenvalue) / dt on the branch
// (-pi/dt, pi/dt]; values outside that window alias and are not unfolded.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vff/ansatz.hpp"
#include "vff/linalg.hpp"

namespace vff {

/// Conventions written next to every spectrum result.
struct SpectrumConventions {
  /// Resolution constant: resolution = c / t_max.
  double c = 6.283185307179586;
  /// Gaussian window centred at t_max/2 with standard deviation
  /// window_fraction * t_max.
  double window_fraction = 0.25;
  /// Peaks are local maxima above this fraction of max S.
  double peak_threshold = 0.05;
  /// Sample spacing in units of dt.
  double step_fraction = 0.2;
  std::string window = "gaussian";
};

/// Uniform grid 0, h, 2h, ..., t_max with h = step_fraction * dt.
std::vector<double> time_grid(double dt, double t_max, double step_fraction = 0.2);

/// Shot settings for the one-clean-qubit estimate of g(t): Re and Im of
/// g/d are each estimated from n_samp +-1 outcomes.
struct SeriesShots {
  std::size_t n_samp = 10000;
  std::uint64_t seed = 0;
};

/// Energies -(phi_z + phase_offset)/dt of the diagonal, wrapped to the
/// principal branch, one per basis state.
std::vector<double> diagonal_energies(const AnsatzParams& params, const AnsatzLayout& layout,
                                      double dt, double phase_offset = 0.0);

/// g(t_j) = sum_z exp(-i lambda_z t_j), exact or shot-sampled.
std::vector<cplx> time_series_g(const AnsatzParams& params, const AnsatzLayout& layout,
                                double dt, const std::vector<double>& t_grid,
                                double phase_offset = 0.0,
                                const std::optional<SeriesShots>& shots = std::nullopt);

struct SpectrumEstimate {
  std::vector<double> lambdas_ref;  // ascending
  std::vector<double> lambda_grid;
  std::vector<double> power;  // S(lambda) on lambda_grid
  std::vector<double> peaks;  // ascending
  std::vector<double> peak_heights;
  std::vector<double> widths;  // full width at half maximum per peak
  double t_max = 0.0;
  double resolution = 0.0;
  /// sum over reference energies of |e^{-i l dt} - e^{-i p dt}|^2 with each
  /// reference matched to its nearest peak.
  double matched_error = 0.0;
  /// max over peaks of the distance to the nearest reference energy.
  double max_peak_offset = 0.0;
  SpectrumConventions conventions;
};

/// S(lambda) = |sum_j w_j g(t_j) e^{i lambda t_j}|^2 on a uniform grid of
/// n_lambda points in [lambda_min, lambda_max], with peak detection.
/// Throws if fewer than 8 samples or the grid is not uniform.
SpectrumEstimate spectrum_from_series(const std::vector<cplx>& g, const std::vector<double>& t_grid,
                                      double lambda_min, double lambda_max,
                                      std::size_t n_lambda = 4001,
                                      const SpectrumConventions& conv = {});

/// Fills lambdas_ref, matched_error and max_peak_offset.
void compare_to_reference(SpectrumEstimate& est, std::vector<double> lambdas_ref, double dt);

}  // namespace vff
