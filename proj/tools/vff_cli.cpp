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

// vff: command-line front end for the experiment runners.
//
// Exit codes: 0 all requested checks passed, 1 a check failed or an
// optimization missed its threshold, 2 bad config or input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vff/experiment.hpp"

namespace {

using nlohmann::json;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::size_t> nsamp;
  std::optional<std::string> params;
};

void add_common(CLI::App* sub, Common& c, bool needs_config, bool takes_params) {
  auto* opt = sub->add_option("--config", c.config, "Experiment config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "Override the config seed");
  sub->add_option("--out", c.out, "Override the output directory");
  sub->add_option("--mode", c.mode, "Cost evaluation mode")->check(CLI::IsMember({"exact", "sampled"}));
  sub->add_option("--nsamp", c.nsamp, "Shots per sampled cost evaluation")->check(CLI::PositiveNumber);
  if (takes_params) {
    sub->add_option("--params", c.params, "Trained parameter file (default: the diagonalize output)");
  }
}

vff::ExperimentConfig load_config(const Common& c) {
  std::ifstream in(c.config);
  if (!in) throw vff::ConfigError(c.config, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw vff::ConfigError(c.config, std::string("invalid JSON: ") + e.what());
  }
  return vff::ExperimentConfig::from_json(vff::apply_overrides(j, {c.seed, c.out, c.mode, c.nsamp}));
}

int report(bool ok, const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::fprintf(stderr, "check failed: %s\n", f.c_str());
  return ok ? 0 : 1;
}

int cmd_diagonalize(const Common& c) {
  const auto cfg = load_config(c);
  const auto r = vff::run_diagonalize(cfg);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    std::printf("point %zu: cost %.3e after %zu iterations (%s)\n", i, p.trace.final_cost(),
                p.trace.iterations, vff::to_string(p.trace.terminated_by).c_str());
  }
  std::printf("config %s, outputs in %s\n", cfg.hash().c_str(), cfg.output.c_str());
  return r.all_converged() ? 0 : 1;
}

int cmd_fastforward(const Common& c) {
  const auto cfg = load_config(c);
  const auto pts = vff::run_fastforward(cfg, vff::load_trained(cfg, c.params));
  bool ok = true;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    std::printf("point %zu: C_train %.3e, window %lld steps", i, p.c_train, p.window);
    if (p.noise) std::printf(", R_ff %.3g, crossover N %lld", p.noise->R_ff, p.noise->crossover_N);
    std::printf("\n");
    ok = ok && p.checks_passed;
    for (const auto& f : p.failures) failures.push_back("point " + std::to_string(i) + ": " + f);
  }
  return report(ok, failures);
}

int cmd_spectrum(const Common& c) {
  const auto cfg = load_config(c);
  const auto pts = vff::run_spectrum(cfg, vff::load_trained(cfg, c.params));
  bool ok = true;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    for (const auto& e : p.estimates) {
      std::printf("point %zu, t_max %.1f: %zu peaks, max offset %.3g (resolution %.3g)\n", i, e.t_max,
                  e.peaks.size(), e.max_peak_offset, e.resolution);
    }
    ok = ok && p.checks_passed;
    for (const auto& f : p.failures) failures.push_back("point " + std::to_string(i) + ": " + f);
  }
  return report(ok, failures);
}

int cmd_gatecount(const Common& c) {
  const auto cfg = load_config(c);
  const auto r = vff::report_gate_counts(cfg);
  for (const auto& [k, g] : r.vff) {
    std::printf("vff %-9s 1q %4lld  2q %4lld  total %4lld\n", k.c_str(), g.one_qubit, g.two_qubit, g.total());
  }
  for (const auto& [k, g] : r.trotter) {
    std::printf("trotter x%lld %-6s 1q %4lld  2q %4lld  total %4lld\n", r.trotter_steps, k.c_str(),
                g.one_qubit, g.two_qubit, g.total());
  }
  return report(r.checks_passed, r.failures);
}

int cmd_verify(const Common& c) {
  std::uint64_t seed = c.seed.value_or(0);
  std::optional<vff::ExperimentConfig> cfg;
  if (!c.config.empty()) {
    cfg = load_config(c);
    if (!c.seed) seed = cfg->seed;
  }
  const auto cases = vff::run_verify(seed);
  bool ok = true;
  json arr = json::array();
  for (const auto& k : cases) {
    std::printf("%s %s%s%s\n", k.passed ? "PASS" : "FAIL", k.name.c_str(), k.detail.empty() ? "" : ": ",
                k.detail.c_str());
    ok = ok && k.passed;
    arr.push_back({{"name", k.name}, {"passed", k.passed}, {"detail", k.detail}});
  }
  const std::string out_dir = c.out ? *c.out : (cfg ? cfg->output : "");
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    json body = {{"seed", seed}, {"cases", arr}, {"all_passed", ok}};
    if (cfg) {
      body["config_hash"] = cfg->hash();
      body["conventions"] = vff::conventions(*cfg);
    }
    std::ofstream f(std::filesystem::path(out_dir) / "verify.json");
    f << body.dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational fast forwarding: diagonalize a Trotter step and fast-forward it"};
  app.require_subcommand(1);
  Common c;
  auto* diag = app.add_subcommand("diagonalize", "Train W and D for every sweep point");
  auto* ff = app.add_subcommand("fastforward", "Fast-forward trained points and check the error bounds");
  auto* spec = app.add_subcommand("spectrum", "Estimate energies from the trained diagonal");
  auto* gc = app.add_subcommand("gatecount", "Count VFF and Trotter gates");
  auto* ver = app.add_subcommand("verify", "Run the property suites");
  add_common(diag, c, true, false);
  add_common(ff, c, true, true);
  add_common(spec, c, true, true);
  add_common(gc, c, true, false);
  add_common(ver, c, false, false);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*diag) return cmd_diagonalize(c);
    if (*ff) return cmd_fastforward(c);
    if (*spec) return cmd_spectrum(c);
    if (*gc) return cmd_gatecount(c);
    if (*ver) return cmd_verify(c);
  } catch (const vff::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
