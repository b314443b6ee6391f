// Copyright 2026 The ethsigma Authors
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

#include "ethsigma/cli/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ethsigma/cli/matrix_io.h"
#include "ethsigma/errors.h"
#include "ethsigma/random.h"

namespace ethsigma::cli {
namespace {

using KeyValues = std::map<std::string, std::string>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// A number, "pi", "sqrt2", or a '*'-separated product of those.
double parse_number(std::string_view text, const std::string& field) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty numeric value", field);
  double product = 1.0;
  for (const std::string& factor : split(s, '*')) {
    if (factor == "pi") {
      product *= std::numbers::pi;
    } else if (factor == "sqrt2") {
      product *= std::numbers::sqrt2;
    } else {
      double v = 0.0;
      const char* begin = factor.data();
      const char* end = begin + factor.size();
      if (!factor.empty() && *begin == '+') ++begin;
      const auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc() || res.ptr != end || factor.empty()) {
        throw ConfigError("'" + s + "' is not a number", field);
      }
      product *= v;
    }
  }
  if (!std::isfinite(product)) throw ConfigError("value is not finite", field);
  return product;
}

long long parse_integer(std::string_view text, const std::string& field) {
  const std::string s = trim(text);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + s + "' is not an integer", field);
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, const std::string& field) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + s + "' is not a nonnegative integer", field);
  }
  return v;
}

std::vector<double> parse_number_list(std::string_view text, const std::string& field) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    out.push_back(parse_number(item, field));
  }
  return out;
}

std::string format_number_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::vector<MaskEntry> parse_mask_entries(std::string_view text,
                                          const std::string& field) {
  std::vector<MaskEntry> out;
  if (trim(text).empty()) return out;
  for (const std::string& entry : split(text, ';')) {
    const std::vector<std::string> parts = split(entry, ',');
    if (parts.size() < 2 || parts.size() > 4) {
      throw ConfigError("mask entry '" + entry + "' must be row,col[,re[,im]]", field);
    }
    MaskEntry e;
    e.row = parse_unsigned(parts[0], field);
    e.col = parse_unsigned(parts[1], field);
    const double re = parts.size() > 2 ? parse_number(parts[2], field) : 1.0;
    const double im = parts.size() > 3 ? parse_number(parts[3], field) : 0.0;
    e.value = Complex(re, im);
    out.push_back(e);
  }
  return out;
}

std::string format_mask_entries(const std::vector<MaskEntry>& entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) out += "; ";
    const MaskEntry& e = entries[i];
    out += std::to_string(e.row) + "," + std::to_string(e.col) + "," +
           format_double(e.value.real());
    if (e.value.imag() != 0.0) out += "," + format_double(e.value.imag());
  }
  return out;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

KeyValues parse_text_pairs(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value",
                        content);
    }
    const std::string key = trim(content.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key", content);
    }
    if (!kv.emplace(key, unquote(trim(content.substr(eq + 1)))).second) {
      throw ConfigError("duplicate key", key);
    }
  }
  return kv;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, KeyValues& kv) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, kv);
    }
    return;
  }
  std::string value;
  if (j.is_string()) {
    value = j.get<std::string>();
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) value += ", ";
      value += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
  } else if (j.is_number_float()) {
    value = format_double(j.get<double>());
  } else {
    value = j.dump();
  }
  if (!kv.emplace(prefix, value).second) throw ConfigError("duplicate key", prefix);
}

KeyValues parse_json_pairs(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "");
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object", "");
  KeyValues kv;
  flatten_json(j, "", kv);
  return kv;
}

// Tracks which keys were consumed so leftovers can be reported.
class Reader {
 public:
  explicit Reader(KeyValues kv) : kv_(std::move(kv)) {}

  std::optional<std::string> get(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }
  std::string str(const std::string& key, const std::string& fallback) {
    return get(key).value_or(fallback);
  }
  double num(const std::string& key, double fallback) {
    const auto v = get(key);
    return v ? parse_number(*v, key) : fallback;
  }
  long long integer(const std::string& key, long long fallback) {
    const auto v = get(key);
    return v ? parse_integer(*v, key) : fallback;
  }
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    const auto v = get(key);
    return v ? parse_unsigned(*v, key) : fallback;
  }
  void finish() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.contains(key)) throw ConfigError("unknown configuration key", key);
    }
  }

 private:
  KeyValues kv_;
  std::set<std::string> used_;
};

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

int check_int_range(long long v, long long lo, long long hi, const std::string& field) {
  if (v < lo || v > hi) {
    throw ConfigError(field + " = " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]",
                      field);
  }
  return static_cast<int>(v);
}

ExperimentConfig build(KeyValues kv, const std::string& base_dir) {
  Reader r(std::move(kv));
  ExperimentConfig c;
  c.name = r.str("name", c.name);
  c.target = parse_target(r.str("target", std::string(target_name(c.target))));

  c.problem_kind = r.str("problem.kind", c.problem_kind);
  if (auto v = r.get("problem.terms")) c.problem_terms = parse_pauli_terms(*v, "problem.terms");
  c.problem_path = resolve_path(r.str("problem.path", ""), base_dir);
  c.problem_name = r.str("problem.name", c.problem_name);
  if (auto v = r.get("problem.eigenvalues")) {
    c.problem_eigenvalues = parse_number_list(*v, "problem.eigenvalues");
  }
  c.problem_seed = r.u64("problem.seed", c.problem_seed);

  c.delta_kind = r.str("delta.kind", c.delta_kind);
  c.delta_state = r.str("delta.state", c.delta_state);
  c.delta_scale = r.num("delta.scale", c.delta_scale);
  if (auto v = r.get("delta.entries")) c.delta_entries = parse_mask_entries(*v, "delta.entries");
  if (auto v = r.get("delta.terms")) c.delta_terms = parse_pauli_terms(*v, "delta.terms");
  c.delta_path = resolve_path(r.str("delta.path", ""), base_dir);

  c.weight.kind = parse_weight_kind(r.str("weight.kind", "unit"));
  const std::string policy = r.str("weight.policy", "reject");
  if (policy == "reject") {
    c.weight.policy = SingularityPolicy::kReject;
  } else if (policy == "regularize") {
    c.weight.policy = SingularityPolicy::kRegularize;
  } else {
    throw ConfigError("weight.policy must be reject or regularize", "weight.policy");
  }
  c.weight.eta = r.num("weight.eta", 0.0);

  c.eth.dt = r.num("eth.dt", c.eth.dt);
  c.eth.num_steps = r.integer("eth.num_steps", c.eth.num_steps);
  const std::string sampling = r.str("eth.sampling", "exact");
  if (sampling == "exact") {
    c.eth.sampling = Sampling::kExact;
  } else if (sampling == "shots") {
    c.eth.sampling = Sampling::kShots;
  } else {
    throw ConfigError("eth.sampling must be exact or shots", "eth.sampling");
  }
  c.eth.shots = r.integer("eth.shots", c.eth.shots);
  c.eth.seed = r.u64("eth.seed", c.eth.seed);
  c.initial = r.str("eth.initial", c.initial);
  c.eth.repetitions =
      check_int_range(r.integer("eth.repetitions", c.eth.repetitions), 1, 1000000,
                      "eth.repetitions");

  c.eth.method = parse_evolution_method(r.str("evolution.method", "exact"));
  c.eth.steps_per_dt = check_int_range(
      r.integer("evolution.steps_per_dt", c.eth.steps_per_dt), 1, 1000000,
      "evolution.steps_per_dt");

  c.qpe.m = check_int_range(r.integer("qpe.m", c.qpe.m), 1, kMaxRegisterQubits, "qpe.m");
  c.qpe.shift = r.num("qpe.shift", c.qpe.shift);
  c.qpe.scale = r.num("qpe.scale", c.qpe.scale);
  c.qpe.mode = parse_qpe_mode(r.str("qpe.mode", "exact-binning"));

  c.phi = r.str("phi.state", c.phi);
  c.form = parse_form(r.str("form", std::string(form_name(c.form))));
  const bool form_target =
      c.target == Target::kOperatorForm || c.target == Target::kVectorForm;
  c.check_reference = r.str("check.reference", form_target ? "trace" : "exact");
  c.check_tolerance = r.num("check.tolerance", c.check_tolerance);
  if (auto v = r.get("sweep.conditions")) {
    c.sweep_conditions = parse_number_list(*v, "sweep.conditions");
  }
  c.output_format = r.str("output.format", c.output_format);
  r.finish();
  c.validate();
  return c;
}

}  // namespace

Target parse_target(std::string_view name) {
  if (name == "operator-form") return Target::kOperatorForm;
  if (name == "vector-form") return Target::kVectorForm;
  if (name == "inverse-expectation") return Target::kInverseExpectation;
  if (name == "logdet-gradient") return Target::kLogdetGradient;
  if (name == "condition-sweep") return Target::kConditionSweep;
  throw ConfigError("unknown target '" + std::string(name) + "'", "target");
}

std::string_view target_name(Target t) {
  switch (t) {
    case Target::kOperatorForm:
      return "operator-form";
    case Target::kVectorForm:
      return "vector-form";
    case Target::kInverseExpectation:
      return "inverse-expectation";
    case Target::kLogdetGradient:
      return "logdet-gradient";
    case Target::kConditionSweep:
      return "condition-sweep";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> problem_kinds{"pauli", "matrix-file", "named"};
  static const std::set<std::string> named{"sigma-z", "sigma-x", "dyadic-unbiased"};
  static const std::set<std::string> delta_kinds{
      "projector", "all-ones", "derivative-mask", "identity", "pauli", "matrix-file"};
  if (!problem_kinds.contains(problem_kind)) {
    throw ConfigError("unknown problem kind '" + problem_kind + "'", "problem.kind");
  }
  if (problem_kind == "pauli" && problem_terms.empty()) {
    throw ConfigError("pauli problem needs terms", "problem.terms");
  }
  if (problem_kind == "matrix-file" && problem_path.empty()) {
    throw ConfigError("matrix-file problem needs a path", "problem.path");
  }
  if (problem_kind == "named" && !named.contains(problem_name)) {
    throw ConfigError("unknown named problem '" + problem_name + "'", "problem.name");
  }
  if (problem_kind == "named" && problem_name == "dyadic-unbiased" &&
      target != Target::kConditionSweep && problem_eigenvalues.size() < 2) {
    throw ConfigError("dyadic-unbiased needs eigenvalues", "problem.eigenvalues");
  }
  if (!delta_kinds.contains(delta_kind)) {
    throw ConfigError("unknown delta kind '" + delta_kind + "'", "delta.kind");
  }
  if (delta_kind == "derivative-mask" && delta_entries.empty()) {
    throw ConfigError("derivative mask needs entries", "delta.entries");
  }
  if (delta_kind == "pauli" && delta_terms.empty()) {
    throw ConfigError("pauli delta needs terms", "delta.terms");
  }
  if (delta_kind == "matrix-file" && delta_path.empty()) {
    throw ConfigError("matrix-file delta needs a path", "delta.path");
  }
  if (weight.eta < 0.0) throw ConfigError("weight.eta must be >= 0", "weight.eta");
  eth.validate();
  if (eth.method != EvolutionMethod::kExact && problem_kind != "pauli") {
    throw ConfigError("product-formula evolution needs a pauli problem",
                      "evolution.method");
  }
  qpe.validate();
  const bool form_target =
      target == Target::kOperatorForm || target == Target::kVectorForm;
  if (form_target && check_reference != "trace" &&
      check_reference != "diagonal-ensemble") {
    throw ConfigError("check.reference must be trace or diagonal-ensemble",
                      "check.reference");
  }
  if (!form_target && check_reference != "exact") {
    throw ConfigError("check.reference must be exact for this target",
                      "check.reference");
  }
  if (check_tolerance < 0.0) {
    throw ConfigError("check.tolerance must be >= 0", "check.tolerance");
  }
  if (target == Target::kConditionSweep) {
    if (sweep_conditions.empty()) {
      throw ConfigError("sweep needs at least one condition number", "sweep.conditions");
    }
    for (double k : sweep_conditions) {
      if (!(k > 1.0)) {
        throw ConfigError("condition numbers must exceed 1", "sweep.conditions");
      }
    }
  }
  if (output_format != "csv" && output_format != "json") {
    throw ConfigError("output.format must be csv or json", "output.format");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  const std::string t = trim(text);
  KeyValues kv = !t.empty() && t.front() == '{' ? parse_json_pairs(t)
                                                : parse_text_pairs(text);
  return build(std::move(kv), base_dir);
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_text_file(path, "config");
  return parse_config(text, std::filesystem::path(path).parent_path().string());
}

std::map<std::string, std::string> config_key_values(const ExperimentConfig& c) {
  std::map<std::string, std::string> kv;
  kv["name"] = c.name;
  kv["target"] = target_name(c.target);
  kv["problem.kind"] = c.problem_kind;
  if (c.problem_kind == "pauli") kv["problem.terms"] = format_pauli_terms(c.problem_terms);
  if (c.problem_kind == "matrix-file") kv["problem.path"] = c.problem_path;
  if (c.problem_kind == "named") kv["problem.name"] = c.problem_name;
  if (!c.problem_eigenvalues.empty()) {
    kv["problem.eigenvalues"] = format_number_list(c.problem_eigenvalues);
  }
  kv["problem.seed"] = std::to_string(c.problem_seed);
  kv["delta.kind"] = c.delta_kind;
  kv["delta.state"] = c.delta_state;
  kv["delta.scale"] = format_double(c.delta_scale);
  if (!c.delta_entries.empty()) kv["delta.entries"] = format_mask_entries(c.delta_entries);
  if (!c.delta_terms.empty()) kv["delta.terms"] = format_pauli_terms(c.delta_terms);
  if (!c.delta_path.empty()) kv["delta.path"] = c.delta_path;
  kv["weight.kind"] = weight_kind_name(c.weight.kind);
  kv["weight.policy"] =
      c.weight.policy == SingularityPolicy::kReject ? "reject" : "regularize";
  kv["weight.eta"] = format_double(c.weight.eta);
  kv["eth.dt"] = format_double(c.eth.dt);
  kv["eth.num_steps"] = std::to_string(c.eth.num_steps);
  kv["eth.sampling"] = c.eth.sampling == Sampling::kExact ? "exact" : "shots";
  kv["eth.shots"] = std::to_string(c.eth.shots);
  kv["eth.seed"] = std::to_string(c.eth.seed);
  kv["eth.initial"] = c.initial;
  kv["eth.repetitions"] = std::to_string(c.eth.repetitions);
  kv["evolution.method"] = evolution_method_name(c.eth.method);
  kv["evolution.steps_per_dt"] = std::to_string(c.eth.steps_per_dt);
  kv["qpe.m"] = std::to_string(c.qpe.m);
  kv["qpe.shift"] = format_double(c.qpe.shift);
  kv["qpe.scale"] = format_double(c.qpe.scale);
  kv["qpe.mode"] = qpe_mode_name(c.qpe.mode);
  kv["phi.state"] = c.phi;
  kv["form"] = form_name(c.form);
  kv["check.reference"] = c.check_reference;
  kv["check.tolerance"] = format_double(c.check_tolerance);
  kv["sweep.conditions"] = format_number_list(c.sweep_conditions);
  kv["output.format"] = c.output_format;
  return kv;
}

std::string emit_config_text(const ExperimentConfig& c) {
  std::string out = "# ethsigma experiment: " + c.name + "\n";
  for (const auto& [key, value] : config_key_values(c)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

std::vector<PauliTerm> parse_pauli_terms(std::string_view text,
                                         const std::string& field) {
  std::vector<PauliTerm> out;
  for (const std::string& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto star = item.rfind('*');
    PauliTerm term;
    std::string axes;
    if (star == std::string::npos) {
      term.coefficient = 1.0;
      axes = item;
    } else {
      term.coefficient = parse_number(item.substr(0, star), field);
      axes = trim(item.substr(star + 1));
    }
    if (axes.empty() || axes.find_first_not_of("IXYZ") != std::string::npos) {
      throw ConfigError("Pauli string '" + axes + "' must use only I, X, Y, Z", field);
    }
    if (!out.empty() && out.front().axes.size() != axes.size()) {
      throw ConfigError("Pauli strings have different lengths", field);
    }
    term.axes = axes;
    out.push_back(term);
  }
  if (out.empty()) throw ConfigError("no Pauli terms", field);
  return out;
}

std::string format_pauli_terms(const std::vector<PauliTerm>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_double(terms[i].coefficient) + "*" + terms[i].axes;
  }
  return out;
}

namespace {

struct SpecParts {
  std::string head;
  std::optional<std::string> arg;
};

SpecParts split_spec(std::string_view spec) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, std::nullopt};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

StateVector parse_amplitudes(const std::string& text, int n, const std::string& field) {
  const std::vector<std::string> items = split(text, ';');
  const std::size_t dim = std::size_t{1} << n;
  if (items.size() != dim) {
    throw ConfigError("expected " + std::to_string(dim) + " amplitudes", field);
  }
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const std::vector<std::string> parts = split(items[k], ',');
    if (parts.empty() || parts.size() > 2) {
      throw ConfigError("amplitude '" + items[k] + "' must be re[,im]", field);
    }
    const double re = parse_number(parts[0], field);
    const double im = parts.size() > 1 ? parse_number(parts[1], field) : 0.0;
    v[static_cast<Eigen::Index>(k)] = Complex(re, im);
  }
  if (std::abs(v.squaredNorm() - 1.0) > kNormTolerance) {
    throw ConfigError("amplitudes are not normalized", field);
  }
  return StateVector(n, std::move(v));
}

std::uint64_t parse_basis_index(const std::optional<std::string>& arg, int n,
                                const std::string& field) {
  if (!arg) throw ConfigError("basis state needs an index, e.g. basis:0", field);
  const std::uint64_t k = parse_unsigned(*arg, field);
  if (k >= (std::uint64_t{1} << n)) {
    throw ConfigError("basis index " + std::to_string(k) + " out of range", field);
  }
  return k;
}

}  // namespace

StateVector parse_state_spec(std::string_view spec, int n, std::uint64_t seed,
                             const std::string& field) {
  const SpecParts p = split_spec(spec);
  if (p.head == "uniform" && !p.arg) return uniform_superposition(n);
  if (p.head == "haar" || p.head == "phase-random") {
    const std::uint64_t s = p.arg ? parse_unsigned(*p.arg, field) : seed;
    return random_state(n, s,
                        p.head == "haar" ? RandomEnsemble::kHaar
                                         : RandomEnsemble::kPhaseRandomProduct);
  }
  if (p.head == "basis") return basis_state(n, parse_basis_index(p.arg, n, field));
  if (p.head == "amplitudes" && p.arg) return parse_amplitudes(*p.arg, n, field);
  throw ConfigError("unknown state spec '" + std::string(spec) + "'", field);
}

InitialState parse_initial_spec(std::string_view spec, int n,
                                const std::string& field) {
  const SpecParts p = split_spec(spec);
  if (p.head == "uniform" && !p.arg) return InitialState::uniform();
  if (p.head == "haar" && !p.arg) return InitialState::haar();
  if (p.head == "phase-random" && !p.arg) return InitialState::phase_random();
  if (p.head == "basis") return InitialState::basis(parse_basis_index(p.arg, n, field));
  return InitialState::explicit_state(parse_state_spec(spec, n, 0, field));
}

}  // namespace ethsigma::cli
