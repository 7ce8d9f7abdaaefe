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

// Config-driven experiment runners behind the command-line tool.
//
// A config is one JSON document:
//
//   {
//     "model": "hubbard2 tau=1 u=0",
//     "sweep": [{"vary": ["u"], "from": 0.0, "to": 0.1, "step": 0.01}],
//     "dt": 0.1,
//     "ansatz": {"w_layers": 3, "entangler": "cnot", "d_locality": 2},
//     "optimizer": {"threshold": 1e-6, "max_iters": 10000},
//     "analysis": {...},
//     "output": "out/hubbard2",
//     "seed": 1
//   }
//
// Sweep stages run in order. Each stage moves the listed parameters together
// from `from` to `to` in increments of `step`, starting from the values the
// previous stage ended on; a point equal to the previous one is skipped.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vff/analysis.hpp"
#include "vff/ansatz.hpp"
#include "vff/hamiltonians.hpp"
#include "vff/noise.hpp"
#include "vff/optimizer.hpp"
#include "vff/spectrum.hpp"

namespace vff {

/// Config problem at a JSON path such as "/optimizer/eta".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;

  /// "hubbard2 tau=1 u=0.05".
  static ModelSpec parse(const std::string& text);
  std::string to_string() const;
};

struct SweepStage {
  std::vector<std::string> vary;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};

struct OptimizerSettings {
  OptimizerConfig base;
  bool eta_set = false;
  /// theta ~ U(-init_spread, init_spread) for cold starts.
  double init_spread = 3.141592653589793;
  double gamma_spread = 0.01;
  /// Independent cold starts for the first point; the lowest cost wins.
  std::size_t restarts = 1;
  /// Warm-started points move to the new parameters in this many equal
  /// increments, each optimized in turn.
  std::size_t substeps = 1;
  /// Threshold for the intermediate increments.
  double substep_threshold = 1e-5;
  /// Cold starts tried when a warm-started point misses the threshold.
  std::size_t fallback_restarts = 0;
  /// Iteration budget of each fallback cold start; 0 means max_iters.
  std::size_t fallback_iters = 0;
  /// Wall-clock budget for a whole diagonalize run in seconds; 0 is none.
  /// Points reached after it expires stop at their first cost evaluation.
  double time_budget_s = 0.0;
};

struct SpectrumSettings {
  std::vector<double> t_max_steps;  // t_max in units of dt
  double lambda_min = -5.0;
  double lambda_max = 5.0;
  std::size_t n_lambda = 4001;
  std::size_t shots = 0;  // 0 = exact g(t)
};

struct GateCountSettings {
  long long trotter_steps = 30;
  std::string vff_convention = "layers";
  std::string trotter_convention = "native";
  std::optional<std::pair<long long, long long>> expect_vff;      // (1q, 2q)
  std::optional<std::pair<long long, long long>> expect_trotter;  // (1q, 2q)
  std::optional<long long> expect_vff_total;
  std::optional<long long> expect_trotter_total;
};

struct AnalysisSettings {
  std::vector<long long> ff_steps;  // empty: 1..ff_max
  long long ff_max = 100;
  double ff_tol = 1e-2;
  /// Minimum window required by the fastforward check; 0 disables it.
  long long min_window = 0;
  std::optional<NoiseModel> noise;
  double delta = 0.2;
  long long noise_n_max = 200;
  SpectrumSettings spectrum;
  GateCountSettings gatecount;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<SweepStage> sweep;
  double dt = 0.1;
  std::vector<std::size_t> term_order;
  AnsatzLayout layout;
  OptimizerSettings optimizer;
  AnalysisSettings analysis;
  std::string output = "out";
  std::uint64_t seed = 0;
  /// Parsed document after overrides, used for the hash.
  nlohmann::json raw;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);

  /// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
  /// Model parameters of every sweep point, in run order.
  std::vector<std::map<std::string, double>> points() const;
  TrotterConfig trotter() const;
  OptimizerConfig optimizer_config() const;
};

/// CLI flag overrides, applied to the JSON before parsing.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::size_t> n_samp;
};
nlohmann::json apply_overrides(nlohmann::json j, const Overrides& o);

/// Convention strings recorded in every output.
nlohmann::json conventions(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);

struct PointResult {
  std::map<std::string, double> model;
  OptimizationTrace trace;
  std::size_t restarts_used = 0;
  bool warm_start_kept = true;
  double warm_start_cost = 0.0;  // final cost of the warm-started run
  bool converged = false;
};

struct DiagonalizeResult {
  std::vector<PointResult> points;
  double wall_seconds = 0.0;
  bool budget_exhausted = false;
  bool all_converged() const;
};

/// Optimizes every sweep point, warm-starting each from the previous one.
/// Writes trace_<i>.csv, params_<i>.json and diagonalize.json to cfg.output.
DiagonalizeResult run_diagonalize(const ExperimentConfig& cfg);

/// Trained parameters read from params_<i>.json files.
struct TrainedPoint {
  std::map<std::string, double> model;
  AnsatzParams params;
  double final_cost = 1.0;
};
std::vector<TrainedPoint> load_trained(const ExperimentConfig& cfg,
                                       const std::optional<std::string>& params_path = std::nullopt);

struct FastForwardPoint {
  std::map<std::string, double> model;
  double c_train = 0.0;
  std::vector<FidelityReport> reports;
  std::vector<double> cost_power;  // C_LHST(U^N, V^N)
  std::vector<CostScalingCheck> scaling;
  long long window = 0;
  std::optional<NoiseComparison> noise;
  bool checks_passed = true;
  std::vector<std::string> failures;
};

std::vector<FastForwardPoint> run_fastforward(const ExperimentConfig& cfg,
                                              const std::vector<TrainedPoint>& trained);

struct SpectrumPoint {
  std::map<std::string, double> model;
  std::vector<SpectrumEstimate> estimates;  // one per t_max
  HoffmanWielandt hw;
  bool checks_passed = true;
  std::vector<std::string> failures;
};

std::vector<SpectrumPoint> run_spectrum(const ExperimentConfig& cfg,
                                        const std::vector<TrainedPoint>& trained);

struct GateCounts {
  long long one_qubit = 0;
  long long two_qubit = 0;
  long long total() const { return one_qubit + two_qubit; }
};

/// VFF counts under one of "gates" (every gate as built, native ZZ/XX),
/// "compiled" (one SU(2) gate per qubit per rotation sub-layer, ZZ/XX/Z-string
/// terms as CNOT ladders around an Rz) or "layers" (single-qubit sub-layers
/// counted once, two-qubit gates native).
GateCounts count_vff_gates(const AnsatzLayout& layout, const std::string& convention);
/// One Trotter step under "native" (one gate per term) or "cnot" (2-local
/// terms as CNOT Rz CNOT with basis changes).
GateCounts count_trotter_gates(const PauliSum& h, const std::string& convention);

struct GateCountReport {
  std::map<std::string, GateCounts> vff;      // by convention
  std::map<std::string, GateCounts> trotter;  // by convention, N steps
  long long trotter_steps = 0;
  bool checks_passed = true;
  std::vector<std::string> failures;
};

GateCountReport report_gate_counts(const ExperimentConfig& cfg);

/// Property suites run by `vff verify`.
struct VerifyCase {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<VerifyCase> run_verify(std::uint64_t seed);

}  // namespace vff
