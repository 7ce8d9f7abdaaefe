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

#include "vff/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "vff/cost.hpp"

namespace vff {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  return v->get<double>();
}

double get_positive(const json& j, const std::string& key, const std::string& path,
                    double fallback) {
  const double x = get_number(j, key, path, fallback);
  if (!(x > 0.0)) throw ConfigError(join(path, key), "must be positive");
  return x;
}

std::size_t get_count(const json& j, const std::string& key, const std::string& path,
                      std::size_t fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer() && !(v->is_number() && std::floor(v->get<double>()) == v->get<double>())) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  const double x = v->get<double>();
  if (x < 0) throw ConfigError(join(path, key), "expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

bool get_bool(const json& j, const std::string& key, const std::string& path, bool fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path,
                       const std::string& fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(join(path, it.key()), "unknown field");
  }
}

std::optional<std::pair<long long, long long>> get_pair(const json& j, const std::string& key,
                                                        const std::string& path) {
  const json* v = find(j, key);
  if (!v) return std::nullopt;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() ||
      !(*v)[1].is_number_integer()) {
    throw ConfigError(join(path, key), "expected [one_qubit, two_qubit]");
  }
  return std::make_pair((*v)[0].get<long long>(), (*v)[1].get<long long>());
}

std::optional<long long> get_optional_int(const json& j, const std::string& key,
                                          const std::string& path) {
  const json* v = find(j, key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v->get<long long>();
}

}  // namespace

ModelSpec ModelSpec::parse(const std::string& text) {
  std::istringstream in(text);
  ModelSpec m;
  if (!(in >> m.name)) throw std::invalid_argument("empty model spec");
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("model parameter '" + tok + "' is not name=value");
    }
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty()) {
      throw std::invalid_argument("model parameter '" + key + "' has non-numeric value '" + val + "'");
    }
    m.params[key] = x;
  }
  return m;
}

std::string ModelSpec::to_string() const {
  std::ostringstream out;
  out << name;
  for (const auto& [k, v] : params) out << ' ' << k << '=' << v;
  return out.str();
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j, "", {"model", "sweep", "dt", "term_order", "ansatz", "optimizer", "analysis",
                         "output", "seed"});
  ExperimentConfig c;
  c.raw = j;

  const json* model = find(j, "model");
  if (!model) throw ConfigError("/model", "required");
  try {
    if (model->is_string()) {
      c.model = ModelSpec::parse(model->get<std::string>());
    } else if (model->is_object()) {
      reject_unknown(*model, "/model", {"name", "params"});
      c.model.name = get_string(*model, "name", "/model", "");
      if (const json* p = find(*model, "params")) {
        if (!p->is_object()) throw ConfigError("/model/params", "expected an object");
        for (auto it = p->begin(); it != p->end(); ++it) {
          if (!it->is_number()) throw ConfigError("/model/params/" + it.key(), "expected a number");
          c.model.params[it.key()] = it->get<double>();
        }
      }
    } else {
      throw ConfigError("/model", "expected a string or an object");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/model", e.what());
  }

  if (const json* sw = find(j, "sweep")) {
    if (!sw->is_array() || sw->empty()) throw ConfigError("/sweep", "expected a nonempty array");
    for (std::size_t i = 0; i < sw->size(); ++i) {
      const std::string p = "/sweep/" + std::to_string(i);
      const json& st = (*sw)[i];
      reject_unknown(st, p, {"vary", "from", "to", "step"});
      SweepStage s;
      const json* vary = find(st, "vary");
      if (!vary) throw ConfigError(p + "/vary", "required");
      if (vary->is_string()) {
        s.vary.push_back(vary->get<std::string>());
      } else if (vary->is_array() && !vary->empty()) {
        for (const auto& v : *vary) {
          if (!v.is_string()) throw ConfigError(p + "/vary", "expected parameter names");
          s.vary.push_back(v.get<std::string>());
        }
      } else {
        throw ConfigError(p + "/vary", "expected a name or a nonempty list of names");
      }
      if (!find(st, "from") || !find(st, "to")) throw ConfigError(p, "needs from and to");
      s.from = get_number(st, "from", p, 0.0);
      s.to = get_number(st, "to", p, 0.0);
      s.step = get_number(st, "step", p, std::abs(s.to - s.from));
      if (s.to != s.from && !(s.step > 0.0)) throw ConfigError(p + "/step", "must be positive");
      c.sweep.push_back(s);
    }
  }

  c.dt = get_positive(j, "dt", "", 0.1);
  if (const json* to = find(j, "term_order")) {
    if (!to->is_array()) throw ConfigError("/term_order", "expected an array of term indices");
    for (const auto& v : *to) {
      if (!v.is_number_unsigned()) throw ConfigError("/term_order", "expected term indices");
      c.term_order.push_back(v.get<std::size_t>());
    }
  }

  const json empty = json::object();
  const json& an = find(j, "ansatz") ? j["ansatz"] : empty;
  reject_unknown(an, "/ansatz", {"w_layers", "entangler", "d_locality", "weight_sharing",
                                 "rotation_block", "final_layer"});
  try {
    PauliSum h = build_model(c.model.name, c.model.params);
    c.layout.w = WLayout::layered(h.n_qubits(), get_count(an, "w_layers", "/ansatz", 1),
                                  entangler_from_string(get_string(an, "entangler", "/ansatz", "cnot")));
  } catch (const std::invalid_argument& e) {
    if (find(an, "entangler") && std::string(e.what()).find("entangler") != std::string::npos) {
      throw ConfigError("/ansatz/entangler", e.what());
    }
    throw ConfigError("/model", e.what());
  }
  try {
    c.layout.w.block = rotation_block_from_string(get_string(an, "rotation_block", "/ansatz", "zxz"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/ansatz/rotation_block", e.what());
  }
  c.layout.w.weight_sharing = get_bool(an, "weight_sharing", "/ansatz", false);
  c.layout.w.final_layer = get_bool(an, "final_layer", "/ansatz", true);
  c.layout.d_locality = get_count(an, "d_locality", "/ansatz", 2);
  if (c.layout.d_locality < 1 || c.layout.d_locality > 3) {
    throw ConfigError("/ansatz/d_locality", "must be 1, 2 or 3");
  }

  const json& op = find(j, "optimizer") ? j["optimizer"] : empty;
  reject_unknown(op, "/optimizer", {"eta", "max_iters", "threshold", "mode", "n_samp", "init_spread",
                                    "gamma_spread", "restarts", "substeps", "substep_threshold",
                                    "fallback_restarts", "fallback_iters", "time_budget_s"});
  auto& o = c.optimizer;
  try {
    o.base.mode = cost_mode_from_string(get_string(op, "mode", "/optimizer", "exact"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/optimizer/mode", e.what());
  }
  o.eta_set = find(op, "eta") != nullptr;
  o.base.eta = get_positive(op, "eta", "/optimizer", OptimizerConfig::default_eta(o.base.mode));
  o.base.max_iters = get_count(op, "max_iters", "/optimizer", 2000);
  o.base.threshold = get_number(op, "threshold", "/optimizer", 1e-6);
  if (o.base.threshold < 0.0) throw ConfigError("/optimizer/threshold", "must be >= 0");
  o.base.n_samp = get_count(op, "n_samp", "/optimizer", 1000000);
  if (o.base.n_samp == 0) throw ConfigError("/optimizer/n_samp", "must be positive");
  o.init_spread = get_number(op, "init_spread", "/optimizer", o.init_spread);
  if (o.init_spread < 0.0) throw ConfigError("/optimizer/init_spread", "must be >= 0");
  o.gamma_spread = get_number(op, "gamma_spread", "/optimizer", o.gamma_spread);
  if (o.gamma_spread < 0.0) throw ConfigError("/optimizer/gamma_spread", "must be >= 0");
  o.restarts = get_count(op, "restarts", "/optimizer", 1);
  if (o.restarts == 0) throw ConfigError("/optimizer/restarts", "must be >= 1");
  o.substeps = get_count(op, "substeps", "/optimizer", 1);
  if (o.substeps == 0) throw ConfigError("/optimizer/substeps", "must be >= 1");
  o.substep_threshold = get_number(op, "substep_threshold", "/optimizer", 1e-5);
  o.fallback_restarts = get_count(op, "fallback_restarts", "/optimizer", 0);
  o.fallback_iters = get_count(op, "fallback_iters", "/optimizer", 0);
  o.time_budget_s = get_number(op, "time_budget_s", "/optimizer", 0.0);
  if (o.time_budget_s < 0.0) throw ConfigError("/optimizer/time_budget_s", "must be >= 0");

  const json& aj = find(j, "analysis") ? j["analysis"] : empty;
  reject_unknown(aj, "/analysis", {"ff_steps", "ff_max", "ff_tol", "min_window", "noise", "delta",
                                   "noise_n_max", "spectrum", "gatecount"});
  auto& a = c.analysis;
  if (const json* fs_ = find(aj, "ff_steps")) {
    if (!fs_->is_array() || fs_->empty()) throw ConfigError("/analysis/ff_steps", "expected a nonempty array");
    for (const auto& v : *fs_) {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError("/analysis/ff_steps", "entries must be integers >= 1");
      }
      a.ff_steps.push_back(v.get<long long>());
    }
  }
  a.ff_max = static_cast<long long>(get_count(aj, "ff_max", "/analysis", 100));
  if (a.ff_max < 1) throw ConfigError("/analysis/ff_max", "must be >= 1");
  a.ff_tol = get_positive(aj, "ff_tol", "/analysis", 1e-2);
  a.min_window = static_cast<long long>(get_count(aj, "min_window", "/analysis", 0));
  if (const json* nz = find(aj, "noise")) {
    reject_unknown(*nz, "/analysis/noise", {"p1", "p2"});
    NoiseModel nm;
    nm.p1 = get_number(*nz, "p1", "/analysis/noise", nm.p1);
    nm.p2 = get_number(*nz, "p2", "/analysis/noise", nm.p2);
    try {
      nm.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/analysis/noise", e.what());
    }
    a.noise = nm;
  }
  a.delta = get_number(aj, "delta", "/analysis", 0.2);
  if (!(a.delta > 0.0 && a.delta < 1.0)) throw ConfigError("/analysis/delta", "must lie in (0, 1)");
  a.noise_n_max = static_cast<long long>(get_count(aj, "noise_n_max", "/analysis", 200));
  if (a.noise_n_max < 1) throw ConfigError("/analysis/noise_n_max", "must be >= 1");

  if (const json* sp = find(aj, "spectrum")) {
    const std::string p = "/analysis/spectrum";
    reject_unknown(*sp, p, {"t_max_steps", "lambda_min", "lambda_max", "n_lambda", "shots"});
    if (const json* tm = find(*sp, "t_max_steps")) {
      if (!tm->is_array() || tm->empty()) throw ConfigError(p + "/t_max_steps", "expected a nonempty array");
      for (const auto& v : *tm) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          throw ConfigError(p + "/t_max_steps", "entries must be positive");
        }
        a.spectrum.t_max_steps.push_back(v.get<double>());
      }
    }
    a.spectrum.lambda_min = get_number(*sp, "lambda_min", p, a.spectrum.lambda_min);
    a.spectrum.lambda_max = get_number(*sp, "lambda_max", p, a.spectrum.lambda_max);
    if (!(a.spectrum.lambda_max > a.spectrum.lambda_min)) {
      throw ConfigError(p + "/lambda_max", "must exceed lambda_min");
    }
    a.spectrum.n_lambda = get_count(*sp, "n_lambda", p, a.spectrum.n_lambda);
    if (a.spectrum.n_lambda < 3) throw ConfigError(p + "/n_lambda", "must be >= 3");
    a.spectrum.shots = get_count(*sp, "shots", p, 0);
  }
  if (a.spectrum.t_max_steps.empty()) a.spectrum.t_max_steps = {500.0};

  if (const json* gc = find(aj, "gatecount")) {
    const std::string p = "/analysis/gatecount";
    reject_unknown(*gc, p, {"trotter_steps", "vff_convention", "trotter_convention", "expect_vff",
                            "expect_trotter", "expect_vff_total", "expect_trotter_total"});
    auto& g = a.gatecount;
    g.trotter_steps = static_cast<long long>(get_count(*gc, "trotter_steps", p, 30));
    g.vff_convention = get_string(*gc, "vff_convention", p, g.vff_convention);
    if (g.vff_convention != "gates" && g.vff_convention != "compiled" && g.vff_convention != "layers") {
      throw ConfigError(p + "/vff_convention", "expected gates, compiled or layers");
    }
    g.trotter_convention = get_string(*gc, "trotter_convention", p, g.trotter_convention);
    if (g.trotter_convention != "native" && g.trotter_convention != "cnot") {
      throw ConfigError(p + "/trotter_convention", "expected native or cnot");
    }
    g.expect_vff = get_pair(*gc, "expect_vff", p);
    g.expect_trotter = get_pair(*gc, "expect_trotter", p);
    g.expect_vff_total = get_optional_int(*gc, "expect_vff_total", p);
    g.expect_trotter_total = get_optional_int(*gc, "expect_trotter_total", p);
  }

  c.output = get_string(j, "output", "", "out");
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }

  // Every sweep point must name parameters the model accepts.
  try {
    for (const auto& pt : c.points()) build_model(c.model.name, pt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/sweep", e.what());
  }
  try {
    c.trotter().validate(build_model(c.model.name, c.model.params));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/term_order", e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(raw.dump())));
  return buf;
}

std::vector<std::map<std::string, double>> ExperimentConfig::points() const {
  std::vector<std::map<std::string, double>> out;
  std::map<std::string, double> cur = model.params;
  if (sweep.empty()) return {cur};
  for (const SweepStage& s : sweep) {
    const double span = s.to - s.from;
    const std::size_t count =
        span == 0.0 ? 1 : static_cast<std::size_t>(std::floor(std::abs(span) / s.step + 1e-9)) + 1;
    const double dir = span < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < count; ++k) {
      // Integer multiples keep 0.1 sweeps free of accumulated drift.
      double x = s.from + dir * static_cast<double>(k) * s.step;
      x = std::round(x * 1e12) / 1e12;
      for (const auto& name : s.vary) cur[name] = x;
      if (out.empty() || out.back() != cur) out.push_back(cur);
    }
  }
  return out;
}

TrotterConfig ExperimentConfig::trotter() const {
  TrotterConfig t;
  t.dt = dt;
  t.term_order = term_order;
  return t;
}

OptimizerConfig ExperimentConfig::optimizer_config() const {
  OptimizerConfig o = optimizer.base;
  o.seed = seed;
  return o;
}

json apply_overrides(json j, const Overrides& o) {
  if (o.seed) j["seed"] = *o.seed;
  if (o.out) j["output"] = *o.out;
  if (o.mode || o.n_samp) {
    if (!j.contains("optimizer")) j["optimizer"] = json::object();
    if (o.mode) j["optimizer"]["mode"] = *o.mode;
    if (o.n_samp) j["optimizer"]["n_samp"] = *o.n_samp;
  }
  return j;
}

json conventions(const ExperimentConfig& cfg) {
  const SpectrumConventions sc;
  json terms = json::array();
  const PauliSum h = build_model(cfg.model.name, cfg.model.params);
  if (cfg.term_order.empty()) {
    for (const auto& t : h.terms()) terms.push_back(t.pauli);
  } else {
    for (std::size_t k : cfg.term_order) terms.push_back(h.terms()[k].pauli);
  }
  return {
      {"rotation", "R_P(phi) = exp(-i phi P / 2)"},
      {"qubit_order", "qubit 0 is the most significant bit and the leftmost Pauli factor"},
      {"diagonal_term", "exp(+i gamma Z_S), applied as R_{Z_S}(-2 gamma)"},
      {"gamma_order", "1-local, then 2-local, then 3-local; lexicographic within each"},
      {"w_layer", "rotations, even-odd entanglers, odd-even entanglers; final rotation layer"},
      {"rotation_block", to_string(cfg.layout.w.block)},
      {"trotter_order", 1},
      {"term_order", terms},
      {"cost_gradient_shift", "(s/2)[C(a + pi/2) - C(a - pi/2)] per gate angle a = s x"},
      {"energy_branch", "lambda = -arg(eigenvalue)/dt in (-pi/dt, pi/dt]"},
      {"spectrum_window", "gaussian, centre t_max/2, sigma t_max/4"},
      {"spectrum_c", sc.c},
      {"peak_threshold", sc.peak_threshold},
      {"series_step", "0.2 dt"},
      {"delta_noise", cfg.analysis.delta},
      {"ff_tol", cfg.analysis.ff_tol},
      {"ff_window", "largest N with 1 - F(U(dt)^N, V^N) <= ff_tol, U(dt) the Trotter step"},
  };
}

// ---------------------------------------------------------------------------
// Output helpers

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << std::setprecision(12);
  return f;
}

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& name, const std::string& header) {
  std::ofstream f = open_out((fs::path(cfg.output) / name).string());
  f << "# config_hash=" << cfg.hash() << '\n';
  f << "# conventions=" << conventions(cfg).dump() << '\n';
  f << header << '\n';
  return f;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, json body) {
  body["config_hash"] = cfg.hash();
  body["conventions"] = conventions(cfg);
  std::ofstream f = open_out((fs::path(cfg.output) / name).string());
  f << body.dump(2) << '\n';
}

json model_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

Matrix trotter_unitary(const ExperimentConfig& cfg, const std::map<std::string, double>& point) {
  return circuit_to_unitary(trotter_step(build_model(cfg.model.name, point), cfg.trotter()));
}

void append_trace(OptimizationTrace& acc, const OptimizationTrace& part) {
  if (acc.costs.empty()) {
    acc = part;
    return;
  }
  // The first entry of `part` repeats the previous final cost.
  acc.costs.insert(acc.costs.end(), part.costs.begin() + 1, part.costs.end());
  acc.std_errs.insert(acc.std_errs.end(), part.std_errs.begin() + 1, part.std_errs.end());
  acc.clamped.insert(acc.clamped.end(), part.clamped.begin() + 1, part.clamped.end());
  acc.params = part.params;
  acc.iterations += part.iterations;
  acc.terminated_by = part.terminated_by;
}

}  // namespace

bool DiagonalizeResult::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const PointResult& p) { return p.converged; });
}

DiagonalizeResult run_diagonalize(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output);
  const auto pts = cfg.points();
  DiagonalizeResult result;
  json summary = json::array();
  AnsatzParams current;
  std::map<std::string, double> previous;
  const auto start = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.optimizer.time_budget_s > 0.0) {
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(cfg.optimizer.time_budget_s));
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    OptimizerConfig oc = cfg.optimizer_config();
    oc.deadline = deadline;
    PointResult pr;
    pr.model = pts[i];
    // Cold starts until one reaches the threshold; the lowest cost wins.
    auto cold = [&](std::size_t count, std::size_t iters, std::uint64_t stream) {
      OptimizationTrace best;
      OptimizerConfig c = oc;
      if (iters > 0) c.max_iters = iters;
      for (std::size_t r = 0; r < count; ++r) {
        const AnsatzParams init =
            random_init(cfg.layout, derive_seed(cfg.seed, 0x1417 + stream, r),
                        cfg.optimizer.init_spread, cfg.optimizer.gamma_spread);
        c.seed = derive_seed(derive_seed(cfg.seed, i, r), stream);
        OptimizationTrace tr = optimize(trotter_unitary(cfg, pts[i]), cfg.layout, init, c);
        pr.restarts_used = r + 1;
        const bool done = tr.terminated_by == Termination::Threshold;
        if (r == 0 || tr.final_cost() < best.final_cost()) best = std::move(tr);
        if (done) break;
      }
      return best;
    };
    if (i == 0) {
      pr.trace = cold(cfg.optimizer.restarts, 0, 0);
    } else {
      const std::size_t sub = cfg.optimizer.substeps;
      AnsatzParams p = perturbative_init(current);
      for (std::size_t s = 1; s <= sub; ++s) {
        std::map<std::string, double> mid = pts[i];
        const double f = static_cast<double>(s) / static_cast<double>(sub);
        for (auto& [k, v] : mid) {
          const auto it = previous.find(k);
          if (it != previous.end()) v = it->second + f * (v - it->second);
        }
        OptimizerConfig stage = oc;
        stage.threshold = s == sub ? oc.threshold : std::max(oc.threshold, cfg.optimizer.substep_threshold);
        stage.seed = derive_seed(cfg.seed, i, s);
        const OptimizationTrace tr = optimize(trotter_unitary(cfg, mid), cfg.layout, p, stage);
        p = tr.params;
        append_trace(pr.trace, tr);
      }
      pr.warm_start_cost = pr.trace.final_cost();
      if (pr.trace.terminated_by != Termination::Threshold && cfg.optimizer.fallback_restarts > 0) {
        OptimizationTrace alt = cold(cfg.optimizer.fallback_restarts, cfg.optimizer.fallback_iters, i);
        if (alt.final_cost() < pr.trace.final_cost()) {
          pr.trace = std::move(alt);
          pr.warm_start_kept = false;
        }
      }
    }
    pr.converged = pr.trace.terminated_by == Termination::Threshold;
    current = pr.trace.params;
    previous = pts[i];

    const std::string stem = std::to_string(i);
    {
      std::ofstream f = open_csv(cfg, "trace_" + stem + ".csv", "iter,cost,std_err");
      for (std::size_t k = 0; k < pr.trace.costs.size(); ++k) {
        f << k << ',' << pr.trace.costs[k] << ',' << pr.trace.std_errs[k] << '\n';
      }
    }
    write_json(cfg, "params_" + stem + ".json",
               {{"model", model_json(pts[i])},
                {"theta", pr.trace.params.theta},
                {"gamma", pr.trace.params.gamma},
                {"final_cost", pr.trace.final_cost()}});
    summary.push_back({{"index", i},
                       {"model", model_json(pts[i])},
                       {"initial_cost", pr.trace.costs.front()},
                       {"final_cost", pr.trace.final_cost()},
                       {"iterations", pr.trace.iterations},
                       {"terminated_by", to_string(pr.trace.terminated_by)},
                       {"restarts_used", pr.restarts_used},
                       {"warm_start_kept", pr.warm_start_kept},
                       {"warm_start_cost", i == 0 ? json(nullptr) : json(pr.warm_start_cost)},
                       {"converged", pr.converged},
                       {"trace", "trace_" + stem + ".csv"},
                       {"params", "params_" + stem + ".json"}});
    result.points.push_back(std::move(pr));
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.budget_exhausted = deadline && std::chrono::steady_clock::now() >= *deadline;

  const OptimizerConfig oc = cfg.optimizer_config();
  write_json(cfg, "diagonalize.json",
             {{"model", cfg.model.name},
              {"dt", cfg.dt},
              {"eta", oc.eta},
              {"threshold", oc.threshold},
              {"max_iters", oc.max_iters},
              {"mode", to_string(oc.mode)},
              {"n_samp", oc.n_samp},
              {"seed", cfg.seed},
              {"points", summary},
              {"wall_seconds", result.wall_seconds},
              {"time_budget_s", cfg.optimizer.time_budget_s},
              {"budget_exhausted", result.budget_exhausted},
              {"all_converged", result.all_converged()}});
  return result;
}

namespace {

TrainedPoint read_params_file(const std::string& path, const ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing params file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("params file '" + path + "' is not valid JSON: " + e.what());
  }
  TrainedPoint t;
  if (!j.contains("theta") || !j.contains("gamma")) {
    throw std::runtime_error("params file '" + path + "' lacks theta or gamma");
  }
  t.params.theta = j["theta"].get<std::vector<double>>();
  t.params.gamma = j["gamma"].get<std::vector<double>>();
  if (j.contains("model")) {
    for (auto it = j["model"].begin(); it != j["model"].end(); ++it) t.model[it.key()] = it->get<double>();
  } else {
    t.model = cfg.model.params;
  }
  t.final_cost = j.value("final_cost", 1.0);
  try {
    cfg.layout.validate(t.params);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("params file '" + path + "' does not fit the ansatz: " + e.what());
  }
  return t;
}

}  // namespace

std::vector<TrainedPoint> load_trained(const ExperimentConfig& cfg,
                                       const std::optional<std::string>& params_path) {
  if (params_path) return {read_params_file(*params_path, cfg)};
  const fs::path summary = fs::path(cfg.output) / "diagonalize.json";
  std::ifstream in(summary);
  if (!in) throw std::runtime_error("missing '" + summary.string() + "'; run diagonalize first");
  const json j = json::parse(in);
  std::vector<TrainedPoint> out;
  for (const auto& p : j.at("points")) {
    out.push_back(read_params_file((fs::path(cfg.output) / p.at("params").get<std::string>()).string(), cfg));
  }
  return out;
}

std::vector<FastForwardPoint> run_fastforward(const ExperimentConfig& cfg,
                                              const std::vector<TrainedPoint>& trained) {
  ensure_dir(cfg.output);
  const auto& a = cfg.analysis;
  std::vector<long long> steps = a.ff_steps;
  if (steps.empty()) {
    for (long long n = 1; n <= a.ff_max; ++n) steps.push_back(n);
  }
  const long long n_top = *std::max_element(steps.begin(), steps.end());
  const TrotterConfig tc = cfg.trotter();
  std::vector<FastForwardPoint> out;
  json summary = json::array();

  for (std::size_t i = 0; i < trained.size(); ++i) {
    const TrainedPoint& tp = trained[i];
    FastForwardPoint fp;
    fp.model = tp.model;
    const PauliSum h = build_model(cfg.model.name, tp.model);
    const Matrix u = circuit_to_unitary(trotter_step(h, tc));
    const Matrix v = build_V(tp.params, cfg.layout);
    fp.c_train = cost_lhst(u, v);

    const std::string stem = std::to_string(i);
    std::ofstream f = open_csv(cfg, "fastforward_" + stem + ".csv",
                               "N,T,cost_lhst_ff,cost_lhst_power,infidelity,avg_fidelity,"
                               "lower_bound_exact,lower_bound_compact,lower_bound_approx,"
                               "bound_preconditions,scaling_lhs,scaling_rhs,eps_ff_2,eps_ff_inf");
    for (long long n : steps) {
      const FidelityReport r = fast_forward_report(h, tc, cfg.layout, tp.params, n, fp.c_train);
      const auto nn = static_cast<std::size_t>(n);
      const double cp = cost_lhst(matrix_power(u, nn), matrix_power(v, nn));
      const CostScalingCheck sc = check_cost_scaling(u, v, nn);
      if (r.bound_preconditions && r.lower_bound_exact > r.avg_fidelity + 1e-9) {
        fp.failures.push_back("N=" + std::to_string(n) + ": fidelity below the exact lower bound");
      }
      if (!sc.precondition_violated && !sc.exact.holds()) {
        fp.failures.push_back("N=" + std::to_string(n) + ": cost-scaling inequality violated");
      }
      f << n << ',' << r.T << ',' << r.cost_lhst_ff << ',' << cp << ',' << 1.0 - r.avg_fidelity << ','
        << r.avg_fidelity << ',' << r.lower_bound_exact << ',' << r.lower_bound_compact << ','
        << r.lower_bound_approx << ',' << (r.bound_preconditions ? 1 : 0) << ',' << sc.exact.lhs << ','
        << sc.exact.rhs << ',' << r.eps_ff_2 << ',' << r.eps_ff_inf << '\n';
      fp.reports.push_back(r);
      fp.cost_power.push_back(cp);
      fp.scaling.push_back(sc);
    }
    fp.window = fast_forward_window(h, tc, cfg.layout, tp.params, a.ff_tol, n_top);
    if (a.min_window > 0 && fp.window < a.min_window) {
      fp.failures.push_back("fast-forward window " + std::to_string(fp.window) + " < " +
                            std::to_string(a.min_window));
    }

    json entry = {{"index", i},
                  {"model", model_json(tp.model)},
                  {"c_train", fp.c_train},
                  {"window", fp.window},
                  {"window_tol", a.ff_tol},
                  {"curve", "fastforward_" + stem + ".csv"}};
    if (a.noise) {
      std::mt19937_64 rng(derive_seed(cfg.seed, 0x7517));
      const Vector psi0 = haar_state(std::size_t{1} << h.n_qubits(), rng);
      NoiseComparison nc = compare_under_noise(h, tc, cfg.layout, tp.params, *a.noise, psi0,
                                               a.noise_n_max, a.delta);
      std::ofstream g = open_csv(cfg, "noise_" + stem + ".csv", "N,T,fidelity_trotter,fidelity_vff");
      for (std::size_t k = 0; k < nc.trotter.n_steps.size(); ++k) {
        g << nc.trotter.n_steps[k] << ',' << static_cast<double>(nc.trotter.n_steps[k]) * cfg.dt << ','
          << nc.trotter.fidelity[k] << ',' << nc.vff.fidelity[k] << '\n';
      }
      entry["noise"] = {{"p1", a.noise->p1},
                        {"p2", a.noise->p2},
                        {"delta", a.delta},
                        {"T_delta_trotter", nc.trotter.T_delta},
                        {"T_delta_vff", nc.vff.T_delta},
                        {"R_ff", std::isfinite(nc.R_ff) ? json(nc.R_ff) : json("inf")},
                        {"crossover_N", nc.crossover_N},
                        {"curve", "noise_" + stem + ".csv"}};
      fp.noise = std::move(nc);
    }
    fp.checks_passed = fp.failures.empty();
    entry["checks_passed"] = fp.checks_passed;
    entry["failures"] = fp.failures;
    summary.push_back(entry);
    out.push_back(std::move(fp));
  }
  const bool ok = std::all_of(out.begin(), out.end(), [](const auto& p) { return p.checks_passed; });
  write_json(cfg, "fastforward.json", {{"points", summary}, {"checks_passed", ok}});
  return out;
}

std::vector<SpectrumPoint> run_spectrum(const ExperimentConfig& cfg,
                                        const std::vector<TrainedPoint>& trained) {
  ensure_dir(cfg.output);
  const auto& s = cfg.analysis.spectrum;
  const TrotterConfig tc = cfg.trotter();
  std::vector<SpectrumPoint> out;
  json summary = json::array();

  for (std::size_t i = 0; i < trained.size(); ++i) {
    const TrainedPoint& tp = trained[i];
    SpectrumPoint sp;
    sp.model = tp.model;
    const PauliSum h = build_model(cfg.model.name, tp.model);
    const Matrix u = circuit_to_unitary(trotter_step(h, tc));
    const Matrix v = build_V(tp.params, cfg.layout);
    sp.hw = hoffman_wielandt_check(u, v);
    if (sp.hw.matched_error > sp.hw.bound_2norm + 1e-9) {
      sp.failures.push_back("matched error exceeds the 2-norm bound");
    }
    if (sp.hw.lhst_bound_valid && sp.hw.matched_error > sp.hw.bound_lhst + 1e-9) {
      sp.failures.push_back("matched error exceeds the LHST bound");
    }
    const RealVector ev = hermitian_eigenvalues(h.to_matrix());
    const std::vector<double> ref(ev.data(), ev.data() + ev.size());
    // Align the unidentifiable global phase of V with e^{-iH dt}.
    const double phi0 = hoffman_wielandt_check(exact_evolution(h, cfg.dt), v).phi0;

    json est_json = json::array();
    for (std::size_t k = 0; k < s.t_max_steps.size(); ++k) {
      const double t_max = s.t_max_steps[k] * cfg.dt;
      const auto grid = time_grid(cfg.dt, t_max);
      std::optional<SeriesShots> shots;
      if (s.shots > 0) shots = SeriesShots{s.shots, derive_seed(cfg.seed, i, k)};
      const auto g = time_series_g(tp.params, cfg.layout, cfg.dt, grid, phi0, shots);
      SpectrumEstimate est = spectrum_from_series(g, grid, s.lambda_min, s.lambda_max, s.n_lambda);
      compare_to_reference(est, ref, cfg.dt);
      if (est.max_peak_offset > est.resolution) {
        sp.failures.push_back("t_max=" + std::to_string(s.t_max_steps[k]) +
                              "dt: a peak lies more than one resolution width from the spectrum");
      }
      const std::string tag = std::to_string(i) + "_" + std::to_string(k);
      {
        std::ofstream f = open_csv(cfg, "g_" + tag + ".csv", "t,re,im");
        for (std::size_t j = 0; j < grid.size(); ++j) f << grid[j] << ',' << g[j].real() << ',' << g[j].imag() << '\n';
      }
      {
        std::ofstream f = open_csv(cfg, "S_" + tag + ".csv", "lambda,value");
        for (std::size_t j = 0; j < est.lambda_grid.size(); ++j) {
          f << est.lambda_grid[j] << ',' << est.power[j] << '\n';
        }
      }
      est_json.push_back({{"t_max", est.t_max},
                          {"t_max_steps", s.t_max_steps[k]},
                          {"resolution", est.resolution},
                          {"peaks", est.peaks},
                          {"peak_heights", est.peak_heights},
                          {"widths", est.widths},
                          {"lambdas_ref", est.lambdas_ref},
                          {"matched_error", est.matched_error},
                          {"max_peak_offset", est.max_peak_offset},
                          {"series", "g_" + tag + ".csv"},
                          {"periodogram", "S_" + tag + ".csv"}});
      sp.estimates.push_back(std::move(est));
    }
    sp.checks_passed = sp.failures.empty();
    summary.push_back({{"index", i},
                       {"model", model_json(tp.model)},
                       {"phase_alignment", phi0},
                       {"hoffman_wielandt",
                        {{"matched_error", sp.hw.matched_error},
                         {"abs_phase_error", sp.hw.abs_phase_error},
                         {"bound_2norm", sp.hw.bound_2norm},
                         {"bound_lhst", sp.hw.bound_lhst},
                         {"lhst_bound_valid", sp.hw.lhst_bound_valid}}},
                       {"estimates", est_json},
                       {"checks_passed", sp.checks_passed},
                       {"failures", sp.failures}});
    out.push_back(std::move(sp));
  }
  const bool ok = std::all_of(out.begin(), out.end(), [](const auto& p) { return p.checks_passed; });
  write_json(cfg, "spectrum.json", {{"points", summary}, {"checks_passed", ok}});
  return out;
}

// ---------------------------------------------------------------------------
// Gate counts

GateCounts count_vff_gates(const AnsatzLayout& layout, const std::string& convention) {
  const WLayout& w = layout.w;
  const auto n = static_cast<long long>(w.n_qubits);
  const auto layers = static_cast<long long>(w.n_layers());
  const long long rot_layers = layers + (w.final_layer ? 1 : 0);
  const long long per_qubit = w.block == RotationBlock::ZXZ ? 3 : 2;
  const long long ent = layers * static_cast<long long>(entangler_pairs(w.n_qubits, false).size() +
                                                        entangler_pairs(w.n_qubits, true).size());
  long long d1 = 0, d2 = 0, d3 = 0;
  for (const auto& t : walsh_terms(w.n_qubits, layout.d_locality)) {
    (t.size() == 1 ? d1 : t.size() == 2 ? d2 : d3) += 1;
  }

  GateCounts c;
  if (convention == "gates") {
    c.one_qubit = 2 * rot_layers * n * per_qubit + d1 + d3;
    c.two_qubit = 2 * ent + d2 + 4 * d3;
  } else if (convention == "compiled") {
    c.one_qubit = 2 * rot_layers * n + d1 + d2 + d3;
    c.two_qubit = 2 * d2 + 4 * d3;
    if (w.entangler == Entangler::CNOT) {
      c.two_qubit += 2 * ent;
    } else {
      c.two_qubit += 2 * 2 * ent;
      c.one_qubit += 2 * ent * (w.entangler == Entangler::XX ? 5 : 1);
    }
  } else if (convention == "layers") {
    c.one_qubit = 2 * rot_layers + (d1 > 0 ? 1 : 0) + (d3 > 0 ? 1 : 0);
    c.two_qubit = 2 * ent + d2 + 4 * d3;
  } else {
    throw std::invalid_argument("unknown VFF gate-count convention '" + convention + "'");
  }
  return c;
}

GateCounts count_trotter_gates(const PauliSum& h, const std::string& convention) {
  if (convention != "native" && convention != "cnot") {
    throw std::invalid_argument("unknown Trotter gate-count convention '" + convention + "'");
  }
  GateCounts c;
  for (const PauliTerm& t : h.terms()) {
    const std::size_t wt = t.weight();
    if (wt == 0) continue;
    if (wt == 1) {
      c.one_qubit += 1;
    } else if (wt == 2) {
      if (convention == "native") {
        c.two_qubit += 1;
      } else {
        c.two_qubit += 2;
        c.one_qubit += 1;
        for (char p : t.pauli) c.one_qubit += (p == 'X' || p == 'Y') ? 2 : 0;
      }
    } else {
      throw std::invalid_argument("Trotter gate count: weight-" + std::to_string(wt) + " term");
    }
  }
  return c;
}

GateCountReport report_gate_counts(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output);
  const auto& g = cfg.analysis.gatecount;
  GateCountReport r;
  r.trotter_steps = g.trotter_steps;
  for (const char* conv : {"gates", "compiled", "layers"}) r.vff[conv] = count_vff_gates(cfg.layout, conv);
  const PauliSum h = build_model(cfg.model.name, cfg.model.params);
  for (const char* conv : {"native", "cnot"}) {
    const GateCounts step = count_trotter_gates(h, conv);
    r.trotter[conv] = {step.one_qubit * g.trotter_steps, step.two_qubit * g.trotter_steps};
  }
  const GateCounts v = r.vff.at(g.vff_convention);
  const GateCounts t = r.trotter.at(g.trotter_convention);
  auto fmt = [](const GateCounts& x) {
    return "(" + std::to_string(x.one_qubit) + ", " + std::to_string(x.two_qubit) + ")";
  };
  if (g.expect_vff && (v.one_qubit != g.expect_vff->first || v.two_qubit != g.expect_vff->second)) {
    r.failures.push_back("VFF counts " + fmt(v) + " differ from the expected (" +
                         std::to_string(g.expect_vff->first) + ", " + std::to_string(g.expect_vff->second) + ")");
  }
  if (g.expect_trotter &&
      (t.one_qubit != g.expect_trotter->first || t.two_qubit != g.expect_trotter->second)) {
    r.failures.push_back("Trotter counts " + fmt(t) + " differ from the expected (" +
                         std::to_string(g.expect_trotter->first) + ", " +
                         std::to_string(g.expect_trotter->second) + ")");
  }
  if (g.expect_vff_total && v.total() != *g.expect_vff_total) {
    r.failures.push_back("VFF total " + std::to_string(v.total()) + " differs from the expected " +
                         std::to_string(*g.expect_vff_total));
  }
  if (g.expect_trotter_total && t.total() != *g.expect_trotter_total) {
    r.failures.push_back("Trotter total " + std::to_string(t.total()) + " differs from the expected " +
                         std::to_string(*g.expect_trotter_total));
  }
  r.checks_passed = r.failures.empty();

  auto counts_json = [](const std::map<std::string, GateCounts>& m) {
    json j = json::object();
    for (const auto& [k, c] : m) {
      j[k] = {{"one_qubit", c.one_qubit}, {"two_qubit", c.two_qubit}, {"total", c.total()}};
    }
    return j;
  };
  const auto ratio = [](long long a, long long b) { return b == 0 ? json(nullptr) : json(double(a) / double(b)); };
  write_json(cfg, "gatecount.json",
             {{"model", cfg.model.to_string()},
              {"trotter_steps", g.trotter_steps},
              {"vff", counts_json(r.vff)},
              {"trotter", counts_json(r.trotter)},
              {"reported",
               {{"vff_convention", g.vff_convention},
                {"trotter_convention", g.trotter_convention},
                {"compression_total", ratio(t.total(), v.total())},
                {"compression_two_qubit", ratio(t.two_qubit, v.two_qubit)}}},
              {"checks_passed", r.checks_passed},
              {"failures", r.failures}});
  return r;
}

}  // namespace vff
