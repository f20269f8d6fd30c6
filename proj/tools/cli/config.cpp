#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nsledger::cli {

namespace {

using json = nlohmann::ordered_json;

// Reads typed members of one JSON object and remembers which keys were
// consumed so leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(field(key) + ": must be finite");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(field(key) + ": expected a nonnegative integer");
      }
      out = static_cast<Int>(v->get<std::uint64_t>());
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key) + ": unknown key");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_forcing(const json& node, ForcingConfig& f) {
  ObjectReader r(node, "forcing");
  r.text("type", f.type);
  r.integer("dual_mode", f.dual_mode);
  r.number("dual_amplitude", f.dual_amplitude);
  r.integer("h_mode", f.h_mode);
  r.number("h_amplitude", f.h_amplitude);
  r.number("omega", f.omega);
  r.text("dual_file", f.dual_file);
  r.text("h_file", f.h_file);
  r.finish();
}

void read_solver(const json& node, SolverConfig& s) {
  ObjectReader r(node, "solver");
  r.number("rel_tol", s.rel_tol);
  r.number("abs_tol", s.abs_tol);
  r.number("max_step", s.max_step);
  r.integer("dense_output_points", s.dense_output_points);
  r.finish();
}

void read_checks(const json& node, CheckConfig& c) {
  ObjectReader r(node, "checks");
  if (const json* v = r.get("selection")) {
    if (!v->is_array()) throw ConfigError("checks.selection: expected an array of names");
    c.selection.clear();
    for (const json& item : *v) {
      if (!item.is_string()) throw ConfigError("checks.selection: expected an array of names");
      c.selection.push_back(item.get<std::string>());
    }
  }
  r.number("equality_tol", c.equality_tol);
  r.number("inequality_tol", c.inequality_tol);
  r.number("bounded_variation_tol", c.bounded_variation_tol);
  r.number("continuity_tol", c.continuity_tol);
  r.number("continuity_spread", c.continuity_spread);
  r.finish();
}

void read_problem_c(const json& node, ProblemCConfig& p) {
  ObjectReader r(node, "problem_c");
  r.text("drift", p.drift);
  r.text("mode", p.mode);
  r.integer("z_seed", p.z_seed);
  r.number("zero_tol", p.zero_tol);
  r.number("envelope_slack", p.envelope_slack);
  r.number("fixed_point_tol", p.fixed_point_tol);
  r.finish();
}

void read_continuity(const json& node, ContinuityConfig& c) {
  ObjectReader r(node, "continuity");
  r.integer("trials", c.trials);
  r.number("safety", c.safety);
  r.finish();
}

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0)) throw ConfigError(field + ": must be positive");
}

void require_one_of(const std::string& value, std::initializer_list<const char*> options,
                    const std::string& field) {
  for (const char* o : options) {
    if (value == o) return;
  }
  std::string list;
  for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
  throw ConfigError(field + ": '" + value + "' is not one of " + list);
}

}  // namespace

SolverConfig Config::solver_config() const {
  SolverConfig s = solver;
  s.nu = nu;
  return s;
}

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  Config cfg;
  ObjectReader r(root, "");
  r.text("scenario", cfg.scenario);
  r.number("nu", cfg.nu);
  if (const json* v = r.get("interval")) {
    ObjectReader ir(*v, "interval");
    ir.number("tau", cfg.interval.tau);
    ir.number("T", cfg.interval.T);
    ir.finish();
  }
  r.integer("m", cfg.m);
  r.integer("basis_size", cfg.basis_size);
  r.number("amplitude", cfg.amplitude);
  if (const json* v = r.get("seed")) {
    if (!v->is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = v->get<std::uint64_t>();
  }
  r.text("initial_file", cfg.initial_file);
  r.text("output_dir", cfg.output_dir);
  if (const json* v = r.get("levels")) {
    if (!v->is_array()) throw ConfigError("levels: expected an array of integers");
    cfg.levels.clear();
    for (const json& item : *v) {
      if (!item.is_number_unsigned()) throw ConfigError("levels: expected an array of integers");
      cfg.levels.push_back(item.get<std::size_t>());
    }
  }
  if (const json* v = r.get("forcing")) read_forcing(*v, cfg.forcing);
  if (const json* v = r.get("solver")) read_solver(*v, cfg.solver);
  if (const json* v = r.get("checks")) read_checks(*v, cfg.checks);
  if (const json* v = r.get("problem_c")) read_problem_c(*v, cfg.problem_c);
  if (const json* v = r.get("continuity")) read_continuity(*v, cfg.continuity);
  r.finish();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const Config& cfg) {
  require_one_of(cfg.scenario, {"shear_mode", "taylor_green", "random_field", "from_file"},
                 "scenario");
  require_positive(cfg.nu, "nu");
  if (!(cfg.interval.tau < cfg.interval.T)) {
    throw ConfigError("interval: tau must be smaller than T");
  }
  if (cfg.m == 0) throw ConfigError("m: must be at least 1");
  if (cfg.basis_size != 0 && cfg.basis_size < cfg.m) {
    throw ConfigError("basis_size: must be at least m");
  }
  if (cfg.scenario == "shear_mode" && cfg.effective_basis_size() < 9) {
    throw ConfigError("m: shear_mode needs at least 9 modes to contain k=(1,0,0)");
  }
  if (cfg.scenario == "random_field" && !cfg.seed) {
    throw ConfigError("seed: required for scenario random_field");
  }
  if (cfg.scenario == "from_file" && cfg.initial_file.empty()) {
    throw ConfigError("initial_file: required for scenario from_file");
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (cfg.levels.empty()) throw ConfigError("levels: must not be empty");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.levels[i] == 0) throw ConfigError("levels: entries must be at least 1");
    if (i > 0 && cfg.levels[i] < cfg.levels[i - 1]) {
      throw ConfigError("levels: must be nondecreasing");
    }
  }

  const ForcingConfig& f = cfg.forcing;
  require_one_of(f.type, {"none", "modal_sinusoid", "file"}, "forcing.type");
  if (f.type == "modal_sinusoid") {
    if (f.dual_mode >= cfg.m) throw ConfigError("forcing.dual_mode: must be below m");
    if (f.h_mode >= cfg.m) throw ConfigError("forcing.h_mode: must be below m");
  }
  if (f.type == "file" && f.dual_file.empty() && f.h_file.empty()) {
    throw ConfigError("forcing.dual_file: file forcing needs dual_file or h_file");
  }

  try {
    cfg.solver_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }

  const CheckConfig& c = cfg.checks;
  for (const std::string& name : c.selection) {
    require_one_of(name,
                   {"all", "energy_equality", "energy_inequality", "bounded_variation",
                    "right_continuity"},
                   "checks.selection");
  }
  if (c.equality_tol < 0.0) throw ConfigError("checks.equality_tol: must be nonnegative");
  if (c.inequality_tol < 0.0) throw ConfigError("checks.inequality_tol: must be nonnegative");
  if (c.bounded_variation_tol < 0.0) {
    throw ConfigError("checks.bounded_variation_tol: must be nonnegative");
  }
  if (c.continuity_tol < 0.0) throw ConfigError("checks.continuity_tol: must be nonnegative");
  require_positive(c.continuity_spread, "checks.continuity_spread");

  const ProblemCConfig& p = cfg.problem_c;
  require_one_of(p.mode, {"zero", "decay", "fixed_point"}, "problem_c.mode");
  require_positive(p.zero_tol, "problem_c.zero_tol");
  if (p.envelope_slack < 0.0) throw ConfigError("problem_c.envelope_slack: must be nonnegative");
  require_positive(p.fixed_point_tol, "problem_c.fixed_point_tol");

  if (cfg.continuity.trials == 0) throw ConfigError("continuity.trials: must be at least 1");
  require_positive(cfg.continuity.safety, "continuity.safety");
}

std::string dump_config(const Config& cfg) {
  json root;
  root["scenario"] = cfg.scenario;
  root["nu"] = cfg.nu;
  root["interval"] = {{"tau", cfg.interval.tau}, {"T", cfg.interval.T}};
  root["m"] = cfg.m;
  root["basis_size"] = cfg.basis_size;
  root["amplitude"] = cfg.amplitude;
  root["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  root["initial_file"] = cfg.initial_file;
  root["output_dir"] = cfg.output_dir;
  root["levels"] = cfg.levels;
  root["forcing"] = {{"type", cfg.forcing.type},
                     {"dual_mode", cfg.forcing.dual_mode},
                     {"dual_amplitude", cfg.forcing.dual_amplitude},
                     {"h_mode", cfg.forcing.h_mode},
                     {"h_amplitude", cfg.forcing.h_amplitude},
                     {"omega", cfg.forcing.omega},
                     {"dual_file", cfg.forcing.dual_file},
                     {"h_file", cfg.forcing.h_file}};
  root["solver"] = {{"rel_tol", cfg.solver.rel_tol},
                    {"abs_tol", cfg.solver.abs_tol},
                    {"max_step", cfg.solver.max_step},
                    {"dense_output_points", cfg.solver.dense_output_points}};
  root["checks"] = {{"selection", cfg.checks.selection},
                    {"equality_tol", cfg.checks.equality_tol},
                    {"inequality_tol", cfg.checks.inequality_tol},
                    {"bounded_variation_tol", cfg.checks.bounded_variation_tol},
                    {"continuity_tol", cfg.checks.continuity_tol},
                    {"continuity_spread", cfg.checks.continuity_spread}};
  root["problem_c"] = {{"drift", cfg.problem_c.drift},
                       {"mode", cfg.problem_c.mode},
                       {"z_seed", cfg.problem_c.z_seed},
                       {"zero_tol", cfg.problem_c.zero_tol},
                       {"envelope_slack", cfg.problem_c.envelope_slack},
                       {"fixed_point_tol", cfg.problem_c.fixed_point_tol}};
  root["continuity"] = {{"trials", cfg.continuity.trials},
                        {"safety", cfg.continuity.safety}};
  return root.dump(2) + "\n";
}

std::vector<std::size_t> parse_levels(const std::string& text) {
  std::vector<std::size_t> levels;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("--levels: '" + item + "' is not a positive integer");
    }
    levels.push_back(value);
    start = comma + 1;
  }
  return levels;
}

}  // namespace nsledger::cli
