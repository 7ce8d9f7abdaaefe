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

#include "vff/optimizer.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace vff {

void OptimizerConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("optimizer eta must be positive");
  if (!(threshold >= 0.0)) throw std::invalid_argument("optimizer threshold must be >= 0");
  if (mode == CostMode::Sampled && n_samp == 0) {
    throw std::invalid_argument("sampled mode needs n_samp > 0");
  }
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Threshold: return "threshold";
    case Termination::MaxIters: return "max_iters";
    case Termination::Deadline: return "deadline";
  }
  return "?";
}

Gradient full_gradient(const Matrix& u, const AnsatzLayout& layout, const AnsatzParams& params,
                       const CostOptions& opts) {
  layout.validate(params);
  const std::size_t nt = params.theta.size();
  const std::size_t total = nt + params.gamma.size();
  Gradient g{std::vector<double>(nt), std::vector<double>(params.gamma.size())};
  const GradientContext ctx = make_gradient_context(u, layout, params);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < total; ++s) {
    try {
      if (s < nt) {
        g.theta[s] = grad_theta(ctx, s, opts);
      } else {
        g.gamma[s - nt] = grad_gamma(layout, params, ctx, s - nt, opts);
      }
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return g;
}

OptimizationTrace optimize(const Matrix& u_target, const AnsatzLayout& layout,
                           const AnsatzParams& init, const OptimizerConfig& cfg) {
  cfg.validate();
  layout.validate(init);
  OptimizationTrace trace;
  trace.params = init;
  trace.eta = cfg.eta;

  for (std::size_t it = 0;; ++it) {
    CostOptions opts;
    opts.mode = cfg.mode;
    opts.n_samp = cfg.n_samp;
    opts.seed = derive_seed(cfg.seed, it);
    const CostReport r = evaluate_cost(u_target, layout, trace.params, opts, 0xC057);
    trace.costs.push_back(r.value);
    trace.std_errs.push_back(r.std_err);
    trace.clamped.push_back(r.clamped);
    if (r.value <= cfg.threshold) {
      trace.terminated_by = Termination::Threshold;
      break;
    }
    if (cfg.deadline && std::chrono::steady_clock::now() >= *cfg.deadline) {
      trace.terminated_by = Termination::Deadline;
      break;
    }
    if (it == cfg.max_iters) {
      trace.terminated_by = Termination::MaxIters;
      break;
    }
    const Gradient g = full_gradient(u_target, layout, trace.params, opts);
    for (std::size_t k = 0; k < g.theta.size(); ++k) trace.params.theta[k] -= cfg.eta * g.theta[k];
    for (std::size_t k = 0; k < g.gamma.size(); ++k) trace.params.gamma[k] -= cfg.eta * g.gamma[k];
    trace.iterations = it + 1;
  }
  return trace;
}

}  // namespace vff
