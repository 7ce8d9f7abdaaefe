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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vff/ansatz.hpp"
#include "vff/cost.hpp"
#include "vff/linalg.hpp"

namespace vff {

struct OptimizerConfig {
  double eta = 1.0;
  std::size_t max_iters = 2000;
  double threshold = 1e-6;
  CostMode mode = CostMode::Exact;
  std::size_t n_samp = 1000000;
  std::uint64_t seed = 0;
  /// Wall-clock stop; the run ends after the next cost evaluation past it.
  std::optional<std::chrono::steady_clock::time_point> deadline;

  /// 1.0 for exact costs, 0.5 for sampled ones.
  static double default_eta(CostMode mode) { return mode == CostMode::Exact ? 1.0 : 0.5; }
  void validate() const;
};

enum class Termination { Threshold, MaxIters, Deadline };
std::string to_string(Termination t);

struct OptimizationTrace {
  std::vector<double> costs;     // cost before each update, then the final cost
  std::vector<double> std_errs;  // zero in exact mode
  std::vector<bool> clamped;
  AnsatzParams params;
  std::size_t iterations = 0;  // gradient steps taken
  Termination terminated_by = Termination::MaxIters;
  double eta = 0.0;

  double final_cost() const { return costs.empty() ? 1.0 : costs.back(); }
};

struct Gradient {
  std::vector<double> theta;
  std::vector<double> gamma;
};

/// Every theta and gamma component. Components are evaluated concurrently;
/// each draws from its own slot-derived shot stream, so the result matches
/// sequential grad_theta / grad_gamma calls exactly.
Gradient full_gradient(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                       const CostOptions& opts);

/// Plain gradient descent theta <- theta - eta dC/dtheta, gamma <- gamma -
/// eta dC/dgamma until the cost reaches the threshold or max_iters steps
/// have been taken.
OptimizationTrace optimize(const Matrix& u_target, const AnsatzLayout& layout,
                           const AnsatzParams& init, const OptimizerConfig& cfg);

}  // namespace vff
