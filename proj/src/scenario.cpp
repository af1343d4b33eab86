// Copyright 2026 The holonomy Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "holo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "holo/adiabatic.hpp"
#include "holo/compiler.hpp"
#include "holo/connection.hpp"
#include "holo/error.hpp"
#include "holo/holonomy.hpp"
#include "holo/report.hpp"

namespace holo {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::config, "field " + path + ": " + message);
}

// Typed access to one JSON object with unknown-key detection.
class Fields {
 public:
  Fields(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) fail(at(key), "missing");
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  long long integer(const std::string& key, long long fallback, long long lo, long long hi) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) fail(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key())) fail(at(item.key()), "unknown key");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

ControlPoint parse_point(const json& v, const std::string& path, int dimension) {
  if (!v.is_array() || static_cast<int>(v.size()) != dimension)
    fail(path, "expected " + std::to_string(dimension) + " coordinates");
  ControlPoint p(dimension);
  for (int i = 0; i < dimension; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) fail(path, "coordinates must be numbers");
    p(i) = v[static_cast<std::size_t>(i)].get<double>();
    if (!std::isfinite(p(i))) fail(path, "coordinates must be finite");
  }
  return p;
}

int model_control_dimension(const ModelConfig& m) {
  switch (m.kind) {
    case ModelKind::spin: return 3;
    case ModelKind::cp: return control_dimension(m.cp);
    case ModelKind::bosonic: return 4;
  }
  return 0;
}

int model_levels(const ModelConfig& m) {
  switch (m.kind) {
    case ModelKind::spin: return 2;
    case ModelKind::cp: return 2;
    case ModelKind::bosonic: return m.bosonic.truncation;
  }
  return 0;
}

int default_level(const ModelConfig& m) { return m.kind == ModelKind::cp ? code_level(m.cp) : 0; }

int level_dimension(const ModelConfig& m, int level) {
  switch (m.kind) {
    case ModelKind::spin: return 1;
    case ModelKind::cp: return level == code_level(m.cp) ? m.cp.n - 1 : 1;
    case ModelKind::bosonic: return level == 0 ? 2 : 1;
  }
  return 0;
}

ControlPoint model_origin(const ModelConfig& m) {
  if (m.kind == ModelKind::spin) {
    ControlPoint b(3);
    b << 0.0, 0.0, m.field;
    return b;
  }
  return ControlPoint::Zero(model_control_dimension(m));
}

const char* model_name(const ModelConfig& m) {
  switch (m.kind) {
    case ModelKind::spin: return "spin";
    case ModelKind::cp: return "cp";
    case ModelKind::bosonic: return "bosonic";
  }
  return "unknown";
}

ModelConfig parse_model(const json& node) {
  Fields f(node, "model");
  ModelConfig m;
  const std::string id = f.text("id", "");
  if (id == "spin") {
    m.kind = ModelKind::spin;
    m.field = f.number("field", 1.0);
    if (!(m.field >= kSpinGapFloor)) fail(f.at("field"), "must be at least 1e-6");
  } else if (id == "cp") {
    m.kind = ModelKind::cp;
    m.cp.n = static_cast<int>(f.integer("n", 3, 2, 12));
    m.cp.code_energy = f.number("code_energy", 0.0);
    m.cp.single_energy = f.number("single_energy", 1.0);
    if (m.cp.code_energy == m.cp.single_energy) fail(f.at("single_energy"), "must differ from code_energy");
  } else if (id == "bosonic") {
    m.kind = ModelKind::bosonic;
    m.bosonic.truncation = static_cast<int>(f.integer("truncation", 40, 10, 400));
    m.bosonic.omega = f.number("omega", 1.0);
    if (!(m.bosonic.omega > 0.0)) fail(f.at("omega"), "must be positive");
  } else {
    fail(f.at("id"), "expected one of spin, cp, bosonic");
  }
  f.finish();
  return m;
}

LoopConfig parse_loop(const std::string& id, const json& node, const ModelConfig& model) {
  const std::string path = "loops." + id;
  Fields f(node, path);
  LoopConfig loop;
  loop.id = id;
  const int d = model_control_dimension(model);
  int kinds = 0;
  if (f.has("nodes")) {
    ++kinds;
    loop.kind = LoopConfig::Kind::nodes;
    const json& nodes = f.raw("nodes");
    if (!nodes.is_array() || nodes.size() < 2) fail(f.at("nodes"), "expected at least two nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i)
      loop.nodes.push_back(parse_point(nodes[i], f.at("nodes") + "[" + std::to_string(i) + "]", d));
  }
  if (f.has("generic")) {
    ++kinds;
    loop.kind = LoopConfig::Kind::generic;
    loop.generic_index = static_cast<int>(f.integer("generic", 1, 1, 2));
  }
  if (f.has("trigonometric")) {
    ++kinds;
    loop.kind = LoopConfig::Kind::trigonometric;
    Fields t(f.raw("trigonometric"), f.at("trigonometric"));
    loop.seed = static_cast<std::uint64_t>(t.integer("seed", 0, 0, std::numeric_limits<long long>::max()));
    loop.amplitude = t.number("amplitude", 0.6);
    loop.harmonics = static_cast<int>(t.integer("harmonics", 3, 1, 16));
    if (!(loop.amplitude > 0.0)) fail(t.at("amplitude"), "must be positive");
    t.finish();
  }
  if (f.has("equator")) {
    ++kinds;
    loop.kind = LoopConfig::Kind::equator;
    if (model.kind != ModelKind::spin) fail(f.at("equator"), "only defined for the spin model");
    Fields e(f.raw("equator"), f.at("equator"));
    e.finish();
  }
  if (kinds != 1) fail(path, "expected exactly one of nodes, generic, trigonometric, equator");
  if (f.has("base")) {
    if (loop.kind == LoopConfig::Kind::generic || loop.kind == LoopConfig::Kind::equator)
      fail(f.at("base"), "not allowed for this loop kind");
    loop.base = parse_point(f.raw("base"), f.at("base"), d);
  }
  f.finish();
  return loop;
}

Matrix parse_target(const json& node, const std::string& path, int n) {
  Fields f(node, path);
  Matrix target;
  if (f.has("diagonal_phases") == f.has("matrix")) fail(path, "expected exactly one of diagonal_phases, matrix");
  if (f.has("diagonal_phases")) {
    const json& phases = f.raw("diagonal_phases");
    if (!phases.is_array() || static_cast<int>(phases.size()) != n)
      fail(f.at("diagonal_phases"), "expected " + std::to_string(n) + " phases");
    target = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const json& p = phases[static_cast<std::size_t>(i)];
      if (!p.is_number()) fail(f.at("diagonal_phases"), "phases must be numbers");
      target(i, i) = std::polar(1.0, p.get<double>());
    }
  } else {
    const json& rows = f.raw("matrix");
    const std::string mp = f.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(mp, "expected " + std::to_string(n) + " rows");
    target.resize(n, n);
    for (int r = 0; r < n; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) fail(mp, "expected " + std::to_string(n) + " columns");
      for (int c = 0; c < n; ++c) {
        const json& e = row[static_cast<std::size_t>(c)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          fail(mp, "entries must be [re, im] pairs");
        target(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  if (!target.allFinite() || unitarity_defect(target) > 1e-10) fail(path, "target must be unitary to 1e-10");
  f.finish();
  return target;
}

const std::map<std::string, std::set<std::string>>& expectation_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"group_laws", {"max_residual", "max_reparametrization_residual"}},
      {"curvature_span", {"dimension", "irreducible", "max_error"}},
      {"holonomy", {"max_method_difference", "max_defect"}},
      {"adiabatic_sweep",
       {"max_leakage", "max_residual", "residual_ratio_min", "residual_ratio_max", "residual_non_increasing"}},
      {"compile", {"max_distance", "max_consistency", "improves_on_length"}},
      {"truncation", {"max_difference", "converged"}},
  };
  return keys;
}

std::vector<std::string> parse_loop_refs(Fields& f, const std::string& key, const std::set<std::string>& known) {
  std::vector<std::string> out;
  if (!f.has(key)) return out;
  const json& v = f.raw(key);
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const json& item : v) {
      if (!item.is_string()) fail(f.at(key), "expected loop names");
      out.push_back(item.get<std::string>());
    }
  } else {
    fail(f.at(key), "expected a loop name or a list of loop names");
  }
  for (const std::string& name : out)
    if (!known.count(name)) fail(f.at(key), "unknown loop '" + name + "'");
  return out;
}

ExperimentConfig parse_experiment(const json& node, const std::string& path, const ModelConfig& model,
                                  const std::set<std::string>& loops) {
  Fields f(node, path);
  ExperimentConfig e;
  e.id = f.text("id", "");
  const auto& keys = expectation_keys();
  if (!keys.count(e.id))
    fail(f.at("id"), "expected one of group_laws, curvature_span, holonomy, adiabatic_sweep, compile, truncation");

  if (f.has("level")) e.level = static_cast<int>(f.integer("level", 0, 0, model_levels(model) - 1));
  const int level = e.level.value_or(default_level(model));
  e.steps = static_cast<int>(f.integer("K", 4096, 2, 1 << 20));
  e.h = f.number("h", 0.0);
  if (e.h < 0.0) fail(f.at("h"), "must be non-negative");
  e.loops = parse_loop_refs(f, f.has("loop") ? "loop" : "loops", loops);

  std::size_t min_loops = 0, max_loops = 0;
  if (e.id == "group_laws") min_loops = 1, max_loops = 2;
  if (e.id == "holonomy" || e.id == "adiabatic_sweep") min_loops = max_loops = 1;
  if (e.id == "compile") min_loops = max_loops = 2;
  if (e.id == "truncation") max_loops = 1;
  if (e.loops.size() < min_loops || e.loops.size() > max_loops)
    fail(path + ".loops", "expected " + std::to_string(min_loops) + (min_loops == max_loops ? "" : "-" + std::to_string(max_loops)) +
                              " loops");

  if (e.id == "adiabatic_sweep") {
    const json& times = f.raw("T");
    if (!times.is_array() || times.empty()) fail(f.at("T"), "expected a nonempty list of times");
    for (const json& t : times) {
      if (!t.is_number() || !(t.get<double>() > 0.0)) fail(f.at("T"), "times must be positive numbers");
      e.times.push_back(t.get<double>());
    }
    e.ramp = f.text("ramp", "identity");
    if (e.ramp != "identity" && e.ramp != "smoothstep") fail(f.at("ramp"), "expected identity or smoothstep");
    e.integrator = f.text("integrator", "magnus4");
    if (e.integrator != "magnus4" && e.integrator != "midpoint") fail(f.at("integrator"), "expected magnus4 or midpoint");
    e.integrator_steps = static_cast<int>(f.integer("M", 0, 0, 100'000'000));
    if (e.integrator_steps != 0 && e.integrator_steps < 100) fail(f.at("M"), "must be 0 (default) or at least 100");
  }
  if (e.id == "compile") {
    const int n = level_dimension(model, level);
    if (n < 2) fail(path, "compilation needs a code of dimension at least 2");
    e.target = parse_target(f.raw("target"), f.at("target"), n);
    e.epsilon = f.number("epsilon", 1e-9);
    if (!(e.epsilon > 0.0)) fail(f.at("epsilon"), "must be positive");
    e.max_length = static_cast<int>(f.integer("max_len", 8, 1, 40));
    e.net_radius = f.number("net_radius", 0.05);
    if (e.net_radius < 0.0) fail(f.at("net_radius"), "must be non-negative");
    e.max_nodes = static_cast<std::size_t>(f.integer("max_nodes", 4'000'000, 1, 1'000'000'000));
  }
  if (e.id == "truncation") {
    if (model.kind != ModelKind::bosonic) fail(path, "truncation experiments need the bosonic model");
    const json& list = f.raw("M");
    if (!list.is_array() || list.size() < 2) fail(f.at("M"), "expected at least two truncations");
    for (const json& m : list) {
      if (!m.is_number_integer() || m.get<int>() < 10 || m.get<int>() > 400) fail(f.at("M"), "truncations must be integers in [10, 400]");
      if (!e.truncations.empty() && m.get<int>() <= e.truncations.back()) fail(f.at("M"), "must be increasing");
      e.truncations.push_back(m.get<int>());
    }
    e.quantity = f.text("quantity", "curvature_origin");
    if (e.quantity != "curvature_origin" && e.quantity != "span_dimension" && e.quantity != "holonomy")
      fail(f.at("quantity"), "expected curvature_origin, span_dimension or holonomy");
    if (e.quantity == "holonomy" && e.loops.empty()) fail(path + ".loops", "holonomy convergence needs a loop");
  }
  if (f.has("expect")) {
    Fields x(f.raw("expect"), f.at("expect"));
    for (const auto& item : f.raw("expect").items()) {
      if (!keys.at(e.id).count(item.key())) fail(x.at(item.key()), "not an expectation of " + e.id);
      const json& v = item.value();
      if (v.is_boolean()) {
        e.expect[item.key()] = v.get<bool>() ? 1.0 : 0.0;
      } else if (v.is_number()) {
        e.expect[item.key()] = v.get<double>();
      } else {
        fail(x.at(item.key()), "expected a number or boolean");
      }
    }
  }
  f.finish();
  return e;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  Fields f(root, "scenario");
  ScenarioConfig config;
  config.name = f.text("name", "scenario");
  config.seed = static_cast<std::uint64_t>(f.integer("seed", 42, 0, std::numeric_limits<long long>::max()));
  config.out_dir = f.text("out", "out");
  config.model = parse_model(f.raw("model"));

  std::set<std::string> names;
  if (f.has("loops")) {
    const json& loops = f.raw("loops");
    if (!loops.is_object()) fail("scenario.loops", "expected an object of named loops");
    for (const auto& item : loops.items()) {
      config.loops.push_back(parse_loop(item.key(), item.value(), config.model));
      names.insert(item.key());
    }
  }
  const json& experiments = f.raw("experiments");
  if (!experiments.is_array() || experiments.empty()) fail("scenario.experiments", "expected a nonempty list");
  for (std::size_t i = 0; i < experiments.size(); ++i)
    config.experiments.push_back(
        parse_experiment(experiments[i], "experiments[" + std::to_string(i) + "]", config.model, names));
  f.finish();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::config, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario(buffer.str());
}

// ------------------------------------------------------------------ running

namespace {

struct Outputs {
  std::ostringstream summary;
  std::vector<std::string> holonomies;
  std::vector<std::string> curvatures;
  std::vector<SweepRow> sweep;
  std::vector<std::string> compiled;
  std::vector<std::string> failures;
};

class Runner {
 public:
  Runner(const ScenarioConfig& config, const RunOptions& options)
      : config_(config), options_(options), seed_(options.seed.value_or(config.seed)), family_(make_family()) {}

  void run(std::size_t index, const ExperimentConfig& e, Outputs& out) {
    const int level = e.level.value_or(default_level(config_.model));
    out.summary << "experiment " << index << " " << e.id << "\n";
    out.summary << "  level: " << level << "\n";
    if (e.id == "group_laws") group_laws(index, e, level, out);
    if (e.id == "curvature_span") curvature_span(index, e, level, out);
    if (e.id == "holonomy") holonomy(index, e, level, out);
    if (e.id == "adiabatic_sweep") adiabatic_sweep(index, e, out);
    if (e.id == "compile") compile_word(index, e, level, out);
    if (e.id == "truncation") truncation(index, e, out);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  HamiltonianFamily make_family() const {
    switch (config_.model.kind) {
      case ModelKind::spin: return spin_family();
      case ModelKind::cp: return cp_family(config_.model.cp);
      case ModelKind::bosonic: return bosonic_family(config_.model.bosonic);
    }
    throw Error(ErrorKind::config, "unknown model");
  }

  const LoopConfig& loop_config(const std::string& id) const {
    for (const LoopConfig& l : config_.loops)
      if (l.id == id) return l;
    throw Error(ErrorKind::config, "unknown loop '" + id + "'");
  }

  Loop loop(const std::string& id) {
    const LoopConfig& c = loop_config(id);
    const ControlPoint origin = model_origin(config_.model);
    switch (c.kind) {
      case LoopConfig::Kind::nodes:
        return (c.base ? Loop::from_nodes(*c.base, c.nodes) : Loop::from_nodes(c.nodes)).named(id);
      case LoopConfig::Kind::trigonometric:
        return random_trigonometric_loop(c.base.value_or(origin), c.seed, c.amplitude, c.harmonics).named(id);
      case LoopConfig::Kind::equator:
        return spin_equator_loop(config_.model.field).named(id);
      case LoopConfig::Kind::generic: {
        if (!generic_) generic_ = generate_generic_loops(family_, default_level(config_.model), origin, seed_);
        return (c.generic_index == 1 ? generic_->first : generic_->second).named(id);
      }
    }
    throw Error(ErrorKind::config, "unknown loop kind");
  }

  void check_at_most(const ExperimentConfig& e, std::size_t index, const std::string& key, double value,
                     Outputs& out) {
    const auto it = e.expect.find(key);
    if (it == e.expect.end()) return;
    const bool ok = value <= it->second;
    out.summary << "  expect " << key << " <= " << format_double(it->second) << ": " << (ok ? "pass" : "FAIL") << "\n";
    if (!ok)
      out.failures.push_back("experiment " + std::to_string(index) + " " + e.id + ": " + key + " = " +
                             format_double(value) + " exceeds " + format_double(it->second));
  }

  void check_at_least(const ExperimentConfig& e, std::size_t index, const std::string& key, double value,
                      Outputs& out) {
    const auto it = e.expect.find(key);
    if (it == e.expect.end()) return;
    const bool ok = value >= it->second;
    out.summary << "  expect " << key << " >= " << format_double(it->second) << ": " << (ok ? "pass" : "FAIL") << "\n";
    if (!ok)
      out.failures.push_back("experiment " + std::to_string(index) + " " + e.id + ": " + key + " = " +
                             format_double(value) + " below " + format_double(it->second));
  }

  void check_equal(const ExperimentConfig& e, std::size_t index, const std::string& key, double value, Outputs& out) {
    const auto it = e.expect.find(key);
    if (it == e.expect.end()) return;
    const bool ok = value == it->second;
    out.summary << "  expect " << key << " == " << format_double(it->second) << ": " << (ok ? "pass" : "FAIL") << "\n";
    if (!ok)
      out.failures.push_back("experiment " + std::to_string(index) + " " + e.id + ": " + key + " = " +
                             format_double(value) + " differs from " + format_double(it->second));
  }

  static void line(Outputs& out, const std::string& key, double value) {
    out.summary << "  " << key << ": " << format_double(value) << "\n";
  }

  void group_laws(std::size_t index, const ExperimentConfig& e, int level, Outputs& out) {
    const int k = e.steps;
    const Loop a = loop(e.loops[0]);
    const Loop b = e.loops.size() > 1 ? loop(e.loops[1]) : a;
    const Holonomy ha = holonomy_frame(family_, a, level, k);
    const Holonomy hb = holonomy_frame(family_, b, level, k);
    const Holonomy composite = holonomy_frame(family_, compose(a, b), level, 2 * k);
    const Holonomy constant = holonomy_frame(family_, constant_loop(a.base()), level, k);
    const Holonomy inverse = holonomy_frame(family_, invert(a), level, k);
    const Holonomy reparam = holonomy_frame(
        family_, reparametrize(a, [](double t) { return t - std::sin(2.0 * std::numbers::pi * t) / (4.0 * std::numbers::pi); }),
        level, k);
    const auto n = ha.unitary.rows();
    const double composition = (composite.unitary - hb.unitary * ha.unitary).norm();
    const double identity = (constant.unitary - Matrix::Identity(n, n)).norm();
    const double inversion = (inverse.unitary - ha.unitary.adjoint()).norm();
    const double reparametrization = (reparam.unitary - ha.unitary).norm();
    line(out, "composition_residual", composition);
    line(out, "identity_residual", identity);
    line(out, "inverse_residual", inversion);
    line(out, "reparametrization_residual", reparametrization);
    out.holonomies.push_back(holonomy_json(ha));
    if (e.loops.size() > 1) out.holonomies.push_back(holonomy_json(hb));
    check_at_most(e, index, "max_residual", std::max({composition, identity, inversion}), out);
    check_at_most(e, index, "max_reparametrization_residual", reparametrization, out);
  }

  void curvature_span(std::size_t index, const ExperimentConfig& e, int level, Outputs& out) {
    const ControlPoint point = model_origin(config_.model);
    const CurvatureTensor numerical = curvature_at(family_, point, level, e.h, Evaluation::numerical);
    const SpanResult span = irreducibility_dimension(numerical);
    line(out, "dimension", span.dimension);
    out.summary << "  irreducible: " << (span.irreducible ? "true" : "false") << "\n";
    double error = 0.0;
    const auto compare = [&](const CurvatureTensor& reference) {
      for (int mu = 0; mu < numerical.directions(); ++mu)
        for (int nu = 0; nu < numerical.directions(); ++nu)
          error = std::max(error, (numerical(mu, nu) - reference(mu, nu)).cwiseAbs().maxCoeff());
    };
    if (family_.has_gauge()) {
      const CurvatureTensor analytic = curvature_at(family_, point, level, e.h, Evaluation::analytic);
      compare(analytic);
      line(out, "analytic_dimension", irreducibility_dimension(analytic).dimension);
    }
    if (config_.model.kind == ModelKind::cp && level == code_level(config_.model.cp))
      compare(cp_curvature_origin(config_.model.cp.n));
    line(out, "max_error", error);
    out.curvatures.push_back(curvature_json(numerical));
    check_equal(e, index, "dimension", span.dimension, out);
    check_equal(e, index, "irreducible", span.irreducible ? 1.0 : 0.0, out);
    check_at_most(e, index, "max_error", error, out);
  }

  void holonomy(std::size_t index, const ExperimentConfig& e, int level, Outputs& out) {
    const Loop g = loop(e.loops[0]);
    std::vector<Holonomy> results = {holonomy_frame(family_, g, level, e.steps),
                                     holonomy_projector(family_, g, level, e.steps)};
    if (family_.has_gauge()) results.push_back(holonomy_connection(family_, g, level, e.steps));
    // The connection route carries an extra finite-difference error, so it
    // is reported but kept out of the method-agreement check.
    const double difference = (results[0].unitary - results[1].unitary).norm();
    double defect = 0.0;
    for (const Holonomy& h : results) {
      defect = std::max(defect, h.defect);
      out.holonomies.push_back(holonomy_json(h));
      line(out, std::string(to_string(h.method)) + "_defect", h.defect);
    }
    line(out, "max_method_difference", difference);
    if (results.size() > 2) line(out, "connection_difference", (results[0].unitary - results[2].unitary).norm());
    check_at_most(e, index, "max_method_difference", difference, out);
    check_at_most(e, index, "max_defect", defect, out);
  }

  void adiabatic_sweep(std::size_t index, const ExperimentConfig& e, Outputs& out) {
    const Loop g = loop(e.loops[0]);
    const int levels = family_.signature().levels();
    std::vector<Holonomy> hol;
    for (int l = 0; l < levels; ++l) {
      hol.push_back(holonomy_frame(family_, g, l, e.steps));
      out.holonomies.push_back(holonomy_json(hol.back()));
    }
    const Ramp ramp = e.ramp == "smoothstep" ? Ramp(smoothstep_ramp) : Ramp(identity_ramp);
    const Integrator integrator = e.integrator == "midpoint" ? Integrator::exponential_midpoint : Integrator::magnus4;

    struct Cell {
      SweepRow row;
      std::vector<double> residuals, leakage, phases;
    };
    const auto cell = [&](double total_time) {
      const AdiabaticSchedule schedule = make_schedule(family_, g, total_time, ramp, e.integrator_steps, integrator);
      const EvolutionResult ev = evolve(family_, schedule);
      Cell c;
      c.row = SweepRow{model_name(config_.model), g.name(), total_time, schedule.steps, e.steps, 0.0, 0.0,
                       adiabaticity_ratio(family_, schedule)};
      for (int l = 0; l < levels; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        c.residuals.push_back(compare_holonomy(ev, hol[lu], ev.dynamical_phases[lu]));
        c.leakage.push_back(ev.leakage[lu]);
        c.phases.push_back(ev.dynamical_phases[lu]);
        c.row.residual = std::max(c.row.residual, c.residuals.back());
        c.row.leakage = std::max(c.row.leakage, c.leakage.back());
      }
      return c;
    };

    std::vector<Cell> cells;
    if (options_.parallel) {
      std::vector<std::future<Cell>> pending;
      for (double t : e.times) pending.push_back(std::async(std::launch::async, cell, t));
      for (auto& p : pending) cells.push_back(p.get());
    } else {
      for (double t : e.times) cells.push_back(cell(t));
    }

    for (const Cell& c : cells) {
      out.summary << "  T " << format_double(c.row.total_time) << " (M " << c.row.integrator_steps << ")\n";
      for (int l = 0; l < levels; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        out.summary << "    level " << l << ": residual " << format_double(c.residuals[lu]) << ", leakage "
                    << format_double(c.leakage[lu]) << ", dynamical_phase " << format_double(c.phases[lu]) << "\n";
      }
      out.summary << "    adiabaticity_ratio " << format_double(c.row.ratio) << "\n";
      out.sweep.push_back(c.row);
    }

    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    bool non_increasing = true;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const double r = cells[i].row.residual / cells[i - 1].row.residual;
      ratio_min = std::min(ratio_min, r);
      ratio_max = std::max(ratio_max, r);
      if (cells[i].row.residual > cells[i - 1].row.residual) non_increasing = false;
    }
    // Expectations refer to the largest T.
    const auto last = std::max_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.row.total_time < b.row.total_time; });
    check_at_most(e, index, "max_leakage", last->row.leakage, out);
    check_at_most(e, index, "max_residual", last->row.residual, out);
    if (cells.size() > 1) {
      line(out, "residual_ratio_min", ratio_min);
      line(out, "residual_ratio_max", ratio_max);
      check_at_least(e, index, "residual_ratio_min", ratio_min, out);
      check_at_most(e, index, "residual_ratio_max", ratio_max, out);
    }
    check_equal(e, index, "residual_non_increasing", non_increasing ? 1.0 : 0.0, out);
  }

  static std::string compile_json(const ExperimentConfig& e, const CompilerResult& r, double consistency,
                                  bool budget) {
    std::ostringstream j;
    j << "{\"target\": " << matrix_json(e.target) << ", \"word\": [";
    for (std::size_t i = 0; i < r.word.size(); ++i) j << (i ? ", " : "") << r.word[i].loop * r.word[i].exponent;
    j << "], \"distance\": " << format_double(r.distance) << ", \"explored\": " << r.explored << ", \"trace\": [";
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      j << (i ? ", " : "") << "[" << r.trace[i].length << ", " << format_double(r.trace[i].distance) << "]";
    j << "], \"converged\": " << (r.converged ? "true" : "false") << ", \"budget_exceeded\": "
      << (budget ? "true" : "false");
    if (!budget) j << ", \"consistency\": " << format_double(consistency);
    j << "}";
    return j.str();
  }

  void compile_word(std::size_t index, const ExperimentConfig& e, int level, Outputs& out) {
    const Loop a = loop(e.loops[0]);
    const Loop b = loop(e.loops[1]);
    const Holonomy ha = holonomy_frame(family_, a, level, e.steps);
    const Holonomy hb = holonomy_frame(family_, b, level, e.steps);
    out.holonomies.push_back(holonomy_json(ha));
    out.holonomies.push_back(holonomy_json(hb));
    CompileOptions opts;
    opts.max_length = e.max_length;
    opts.net_radius = e.net_radius;
    opts.max_nodes = e.max_nodes;
    opts.parallel = options_.parallel;
    CompilerResult r;
    try {
      r = compile(GateTarget{e.target, e.epsilon, true}, ha.unitary, hb.unitary, opts);
    } catch (const BudgetExceeded& budget) {
      out.compiled.push_back(compile_json(e, budget.best(), 0.0, true));
      out.summary << "  budget exceeded; best distance " << format_double(budget.best().distance) << "\n";
      throw;
    }
    const Holonomy again = holonomy_of_word(r.word, a, b, family_, level, e.steps, WordRoute::composite_loop);
    const double consistency = (again.unitary - r.unitary).norm();
    out.summary << "  word: " << (r.word.empty() ? "(empty)" : to_string(r.word)) << "\n";
    line(out, "distance", r.distance);
    line(out, "explored", static_cast<double>(r.explored));
    line(out, "consistency", consistency);
    for (const TracePoint& p : r.trace)
      out.summary << "  trace " << p.length << ": " << format_double(p.distance) << "\n";
    out.compiled.push_back(compile_json(e, r, consistency, false));
    check_at_most(e, index, "max_distance", r.distance, out);
    check_at_most(e, index, "max_consistency", consistency, out);
    if (const auto it = e.expect.find("improves_on_length"); it != e.expect.end()) {
      const auto length = static_cast<int>(it->second);
      double reference = std::numeric_limits<double>::quiet_NaN();
      for (const TracePoint& p : r.trace)
        if (p.length == length) reference = p.distance;
      const bool ok = r.distance < reference;
      out.summary << "  expect distance < trace[" << length << "]: " << (ok ? "pass" : "FAIL") << "\n";
      if (!ok)
        out.failures.push_back("experiment " + std::to_string(index) + " compile: no improvement over length " +
                               std::to_string(length));
    }
  }

  void truncation(std::size_t index, const ExperimentConfig& e, Outputs& out) {
    TruncationQuantity q = TruncationQuantity::curvature_origin;
    if (e.quantity == "span_dimension") q = TruncationQuantity::span_dimension;
    if (e.quantity == "holonomy") q = TruncationQuantity::holonomy;
    std::optional<Loop> g;
    if (!e.loops.empty()) g = loop(e.loops[0]);
    const TruncationReport report =
        truncation_convergence(config_.model.bosonic, q, e.truncations, g ? &*g : nullptr, e.steps);
    for (std::size_t i = 0; i < report.differences.size(); ++i)
      out.summary << "  M " << report.truncations[i] << " -> " << report.truncations[i + 1] << ": "
                  << format_double(report.differences[i]) << "\n";
    for (const std::string& w : report.warnings) out.summary << "  warning: " << w << "\n";
    out.summary << "  converged: " << (report.converged ? "true" : "false") << "\n";
    check_at_most(e, index, "max_difference", report.differences.back(), out);
    check_equal(e, index, "converged", report.converged ? 1.0 : 0.0, out);
  }

  const ScenarioConfig& config_;
  const RunOptions& options_;
  std::uint64_t seed_;
  HamiltonianFamily family_;
  std::optional<GenericLoops> generic_;
};

std::string matrices_document(const Outputs& out) {
  std::string doc = "{\n  \"holonomies\": [";
  for (std::size_t i = 0; i < out.holonomies.size(); ++i) doc += (i ? ",\n    " : "\n    ") + out.holonomies[i];
  doc += out.holonomies.empty() ? "],\n" : "\n  ],\n";
  doc += "  \"curvatures\": [";
  for (std::size_t i = 0; i < out.curvatures.size(); ++i) doc += (i ? ",\n    " : "\n    ") + out.curvatures[i];
  doc += out.curvatures.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return doc;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& log) {
  const std::filesystem::path dir = options.out_dir.value_or(config.out_dir);
  Outputs out;
  RunResult result;
  out.summary << "scenario " << config.name << "\n";
  out.summary << "model " << model_name(config.model) << "\n";
  out.summary << "seed " << options.seed.value_or(config.seed) << "\n";

  try {
    Runner runner(config, options);
    for (std::size_t i = 0; i < config.experiments.size(); ++i) {
      log << "running experiment " << i << " (" << config.experiments[i].id << ")\n";
      runner.run(i, config.experiments[i], out);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    out.summary << "error: " << e.what() << "\n";
    result.exit_code = e.kind() == ErrorKind::budget ? kExitBudget : kExitModel;
    log << e.what() << "\n";
  }

  result.failures = out.failures;
  if (result.exit_code == kExitOk && !out.failures.empty()) result.exit_code = kExitAssertion;
  out.summary << "status " << (result.exit_code == kExitOk ? "ok" : "failed") << "\n";
  for (const std::string& f : out.failures) out.summary << "failure: " << f << "\n";
  result.summary = out.summary.str();

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory " + dir.string());
  write_text(dir / "summary.txt", result.summary);
  write_text(dir / "matrices.json", matrices_document(out));
  if (!out.sweep.empty()) emit_convergence_csv(out.sweep, dir / "sweep.csv");
  if (!out.compiled.empty()) {
    std::string doc = "[\n";
    for (std::size_t i = 0; i < out.compiled.size(); ++i) doc += (i ? ",\n  " : "  ") + out.compiled[i];
    write_text(dir / "compile.json", doc + "\n]\n");
  }
  return result;
}

}  // namespace holo
