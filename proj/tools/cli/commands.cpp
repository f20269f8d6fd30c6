#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "nsledger/convergence.hpp"
#include "nsledger/energy_ledger.hpp"
#include "nsledger/io.hpp"
#include "nsledger/scenarios.hpp"

namespace nsledger::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- inputs

ModalFunction load_modal_series(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field + ": cannot open '" + path + "'");
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::vector<double> values;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError(path + ": '" + cell + "' is not a number", row);
      }
    }
    if (values.size() < 2) throw FormatError(path + ": expected t and coefficients", row);
    if (width == 0) width = values.size();
    if (values.size() != width) throw FormatError(path + ": inconsistent column count", row);
    if (!times.empty() && !(values[0] > times.back())) {
      throw FormatError(path + ": times must increase", row);
    }
    times.push_back(values[0]);
    rows.emplace_back(values.begin() + 1, values.end());
  }
  if (times.size() < 2) throw FormatError(path + ": need at least two sample times", 0);
  return sampled_modal_function(std::move(times), std::move(rows));
}

Forcing make_forcing(const Config& cfg) {
  const ForcingConfig& f = cfg.forcing;
  if (f.type == "modal_sinusoid") {
    return Forcing::modal_sinusoid(f.dual_mode, f.dual_amplitude, f.h_mode, f.h_amplitude,
                                   f.omega);
  }
  if (f.type == "file") {
    ModalFunction dual;
    ModalFunction h;
    if (!f.dual_file.empty()) dual = load_modal_series(f.dual_file, "forcing.dual_file");
    if (!f.h_file.empty()) h = load_modal_series(f.h_file, "forcing.h_file");
    return Forcing(std::move(dual), std::move(h));
  }
  return Forcing{};
}

SpectralField make_initial(const Config& cfg, const BasisPtr& basis) {
  if (cfg.scenario == "shear_mode") return shear_mode_field(basis, cfg.amplitude);
  if (cfg.scenario == "taylor_green") return taylor_green_field(basis, cfg.amplitude);
  if (cfg.scenario == "random_field") {
    return cfg.amplitude * random_field(basis, *cfg.seed, cfg.m);
  }
  Trajectory stored;
  try {
    stored = load_trajectory(cfg.initial_file);
  } catch (const std::ios_base::failure&) {
    throw ConfigError("initial_file: cannot read '" + cfg.initial_file + "'");
  }
  SpectralField out(basis);
  const std::size_t n = std::min(stored.m, basis->size());
  for (std::size_t j = 0; j < n; ++j) out[j] = stored.states.front()[j];
  return out;
}

Scenario make_scenario(const Config& cfg, const BasisPtr& basis) {
  return Scenario{cfg.scenario, project(make_initial(cfg, basis), cfg.m), make_forcing(cfg),
                  cfg.interval};
}

// ---------------------------------------------------------------- checks

bool selected(const Config& cfg, const std::string& name) {
  const auto& s = cfg.checks.selection;
  return std::find(s.begin(), s.end(), "all") != s.end() ||
         std::find(s.begin(), s.end(), name) != s.end();
}

bool explicitly_selected(const Config& cfg, const std::string& name) {
  const auto& s = cfg.checks.selection;
  return std::find(s.begin(), s.end(), name) != s.end();
}

struct ContinuityProbe {
  std::vector<double> s_points;
  std::vector<double> deltas;
};

ContinuityProbe continuity_probe(Interval interval) {
  const double length = interval.length();
  const double largest = std::min(0.1, 0.25 * length);
  ContinuityProbe probe;
  for (double scale : {1.0, 0.5, 0.25, 0.125}) probe.deltas.push_back(largest * scale);
  for (int k = 0; k < 8; ++k) {
    probe.s_points.push_back(interval.tau + (k + 0.5) / 8.0 * (length - largest));
  }
  return probe;
}

std::vector<Verdict> ledger_verdicts(const Config& cfg, const EnergyLedger& ledger) {
  std::vector<Verdict> verdicts;
  if (selected(cfg, "energy_equality")) {
    verdicts.push_back(check_energy_equality(ledger, cfg.checks.equality_tol));
  }
  if (selected(cfg, "energy_inequality")) {
    verdicts.push_back(check_energy_inequality(ledger, cfg.checks.inequality_tol));
  }
  if (selected(cfg, "bounded_variation")) {
    verdicts.push_back(check_bounded_variation(ledger, cfg.checks.bounded_variation_tol));
  }
  return verdicts;
}

std::vector<Verdict> trajectory_verdicts(const Config& cfg, const Trajectory& traj) {
  std::vector<Verdict> verdicts = ledger_verdicts(cfg, compute_ledger(traj, traj.start()));
  if (selected(cfg, "right_continuity")) {
    const ContinuityProbe probe = continuity_probe(traj.interval());
    verdicts.push_back(check_right_continuity(traj, probe.s_points, probe.deltas,
                                              cfg.checks.continuity_tol,
                                              cfg.checks.continuity_spread));
  }
  return verdicts;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.status == Status::pass; });
}

// ---------------------------------------------------------------- outputs

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string verdicts_json(const std::vector<Verdict>& verdicts) {
  json checks = json::array();
  for (const Verdict& v : verdicts) {
    checks.push_back({{"check", v.check},
                      {"status", to_string(v.status)},
                      {"worst_violation", number(v.worst_violation)},
                      {"witness", {{"s", number(v.witness.s)}, {"t", number(v.witness.t)}}},
                      {"tolerance", number(v.tolerance)}});
  }
  json root;
  root["overall"] = all_pass(verdicts) ? "PASS" : "FAIL";
  root["checks"] = std::move(checks);
  return root.dump(2) + "\n";
}

std::string verdict_line(const Verdict& v) {
  return v.check + ": " + to_string(v.status) + " worst_violation=" +
         format_double(v.worst_violation) + " tolerance=" + format_double(v.tolerance) +
         " witness=(" + format_double(v.witness.s) + ", " + format_double(v.witness.t) + ")";
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : path_(path) {
    std::error_code ec;
    fs::create_directories(path_, ec);
    if (ec) throw ConfigError("output_dir: cannot create '" + path + "': " + ec.message());
  }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) const {
    const fs::path target = path_ / name;
    std::ofstream out(target, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + target.string());
    writer(out);
    if (!out) throw std::runtime_error("write failed for " + target.string());
  }

  void write_text(const std::string& name, const std::string& text) const {
    write(name, [&](std::ostream& out) { out << text; });
  }

 private:
  fs::path path_;
};

std::string run_header(const Config& cfg, const std::string& command) {
  std::ostringstream out;
  out << "nsledger " << command << '\n'
      << "scenario: " << cfg.scenario << '\n'
      << "nu: " << format_double(cfg.nu) << '\n'
      << "interval: [" << format_double(cfg.interval.tau) << ", "
      << format_double(cfg.interval.T) << "]\n"
      << "m: " << cfg.m << " (basis " << cfg.effective_basis_size() << ")\n"
      << "solver: rel_tol=" << format_double(cfg.solver.rel_tol)
      << " abs_tol=" << format_double(cfg.solver.abs_tol) << '\n';
  return out.str();
}

bool is_trajectory_file(const std::string& path) {
  if (fs::path(path).extension() == ".bin") return true;
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first.rfind("# nsledger trajectory", 0) == 0;
}

Trajectory load_trajectory_input(const std::string& path, const std::string& field) {
  if (!fs::exists(path)) throw ConfigError(field + ": '" + path + "' does not exist");
  return load_trajectory(path);
}

}  // namespace

int run_simulate(const Config& cfg, std::ostream& out) {
  validate(cfg);
  const OutputDir dir(cfg.output_dir);
  const BasisPtr basis = build_basis(cfg.effective_basis_size());
  const TriadTensor tensor = build_tensor(basis);
  const Scenario scenario = make_scenario(cfg, basis);

  const Trajectory traj = simulate_nse(scenario.initial, scenario.forcing, cfg.m,
                                       scenario.interval, cfg.solver_config(), tensor);
  const EnergyLedger ledger = compute_ledger(traj, traj.start());
  const std::vector<Verdict> verdicts = trajectory_verdicts(cfg, traj);

  std::ostringstream report;
  report << run_header(cfg, "simulate");
  report << "output times: " << traj.size() << '\n'
         << "kinetic energy: " << format_double(ledger.kinetic.front()) << " -> "
         << format_double(ledger.kinetic.back()) << '\n'
         << "ledger V: " << format_double(ledger.values.front()) << " -> "
         << format_double(ledger.values.back()) << '\n';
  for (const Verdict& v : verdicts) report << verdict_line(v) << '\n';
  report << "overall: " << (all_pass(verdicts) ? "PASS" : "FAIL") << '\n';

  dir.write("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  dir.write("ledger.csv", [&](std::ostream& o) { write_ledger_csv(o, ledger); });
  dir.write_text("verdicts.json", verdicts_json(verdicts));
  dir.write_text("report.txt", report.str());
  out << report.str();
  return all_pass(verdicts) ? kExitOk : kExitCheckFailed;
}

int run_problem_c(const Config& cfg, std::ostream& out) {
  validate(cfg);
  const ProblemCConfig& pc = cfg.problem_c;
  if (pc.drift.empty()) throw ConfigError("problem_c.drift: a drift trajectory path is required");
  auto drift = std::make_shared<Trajectory>(load_trajectory_input(pc.drift, "problem_c.drift"));
  const BasisPtr basis = drift->basis;
  if (cfg.m > basis->size()) {
    throw ConfigError("m: exceeds the drift basis size " + std::to_string(basis->size()));
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(cfg.interval.T));
  if (drift->start() > cfg.interval.tau + slack || drift->end() < cfg.interval.T - slack) {
    throw ConfigError("problem_c.drift: trajectory covers [" + format_double(drift->start()) +
                      ", " + format_double(drift->end()) + "], not the configured interval");
  }
  const OutputDir dir(cfg.output_dir);
  const TriadTensor tensor = build_tensor(basis);
  const Forcing f = make_forcing(cfg);
  // Rates on file are finite differences; the drift is an NSE run under the
  // configured forcing, so its exact rates follow from the right-hand side.
  fill_self_drift_rates(*drift, f, tensor);

  Forcing g;
  SpectralField z_tau(basis);
  if (pc.mode == "decay") {
    z_tau = random_field(basis, pc.z_seed, cfg.m);
    const double n = norm(z_tau, Space::H());
    z_tau = (1.0 / n) * z_tau;
  } else if (pc.mode == "fixed_point") {
    g = f;
    z_tau = project(drift->field_at(cfg.interval.tau), cfg.m);
  }

  const Trajectory z = solve_problem_c(StoredDrift{drift}, g, z_tau, cfg.m, cfg.interval,
                                       cfg.solver_config(), tensor);

  const double lambda1 = basis->eigenvalue(0);
  std::vector<double> z_norm(z.size()), envelope(z.size()), distance(z.size());
  std::vector<double> y(basis->size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double t = z.times[i];
    double zz = 0.0;
    double dd = 0.0;
    drift->state_at(t, y);
    for (std::size_t j = 0; j < z.m; ++j) {
      zz += z.states[i][j] * z.states[i][j];
      dd += (z.states[i][j] - y[j]) * (z.states[i][j] - y[j]);
    }
    for (std::size_t j = z.m; j < drift->m; ++j) dd += y[j] * y[j];
    z_norm[i] = std::sqrt(zz);
    distance[i] = std::sqrt(dd);
    envelope[i] = norm(z_tau, Space::H()) * std::exp(-cfg.nu * lambda1 * (t - cfg.interval.tau));
  }

  Verdict verdict;
  verdict.witness = {cfg.interval.tau, cfg.interval.tau};
  auto track = [&](double value, std::size_t i) {
    if (value > verdict.worst_violation || i == 0) {
      verdict.worst_violation = value;
      verdict.witness = {z.times[i], z.times[i]};
    }
  };
  if (pc.mode == "zero") {
    verdict.check = "uniqueness_zero";
    verdict.tolerance = pc.zero_tol;
    for (std::size_t i = 0; i < z.size(); ++i) track(z_norm[i], i);
  } else if (pc.mode == "decay") {
    verdict.check = "decay_envelope";
    verdict.tolerance = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      track(z_norm[i] - envelope[i] * (1.0 + pc.envelope_slack), i);
    }
  } else {
    verdict.check = "fixed_point";
    verdict.tolerance = pc.fixed_point_tol;
    for (std::size_t i = 0; i < z.size(); ++i) track(distance[i], i);
  }
  verdict.status = verdict.worst_violation <= verdict.tolerance ? Status::pass : Status::fail;
  const std::vector<Verdict> verdicts{verdict};

  std::ostringstream report;
  report << run_header(cfg, "problem-c");
  report << "drift: " << pc.drift << " (m=" << drift->m << ", " << drift->size()
         << " times)\n"
         << "mode: " << pc.mode << '\n'
         << "|z(tau)|: " << format_double(norm(z_tau, Space::H())) << '\n'
         << "sup |z(t)|: " << format_double(*std::max_element(z_norm.begin(), z_norm.end()))
         << '\n'
         << "sup |z(t) - y(t)|: "
         << format_double(*std::max_element(distance.begin(), distance.end())) << '\n'
         << verdict_line(verdict) << '\n'
         << "overall: " << to_string(verdict.status) << '\n';

  dir.write("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, z); });
  dir.write("norm_trace.csv", [&](std::ostream& o) {
    o << "t,norm_z,envelope,distance_to_drift\n";
    for (std::size_t i = 0; i < z.size(); ++i) {
      o << format_double(z.times[i]) << ',' << format_double(z_norm[i]) << ','
        << format_double(envelope[i]) << ',' << format_double(distance[i]) << '\n';
    }
  });
  dir.write_text("verdicts.json", verdicts_json(verdicts));
  dir.write_text("report.txt", report.str());
  out << report.str();
  return all_pass(verdicts) ? kExitOk : kExitCheckFailed;
}

int run_verify(const Config& cfg, const std::string& input, std::ostream& out) {
  validate(cfg);
  if (input.empty()) throw ConfigError("input: a ledger or trajectory path is required");
  if (!fs::exists(input)) throw ConfigError("input: '" + input + "' does not exist");

  std::vector<Verdict> verdicts;
  std::string kind;
  if (is_trajectory_file(input)) {
    kind = "trajectory";
    verdicts = trajectory_verdicts(cfg, load_trajectory(input));
  } else {
    kind = "ledger";
    if (explicitly_selected(cfg, "right_continuity")) {
      throw ConfigError("checks.selection: right_continuity needs a trajectory input");
    }
    std::ifstream in(input);
    verdicts = ledger_verdicts(cfg, read_ledger_csv(in));
  }
  if (verdicts.empty()) throw ConfigError("checks.selection: no applicable checks selected");

  std::ostringstream report;
  report << "nsledger verify\n" << "input: " << input << " (" << kind << ")\n";
  for (const Verdict& v : verdicts) report << verdict_line(v) << '\n';
  report << "overall: " << (all_pass(verdicts) ? "PASS" : "FAIL") << '\n';

  const OutputDir dir(cfg.output_dir);
  dir.write_text("verdicts.json", verdicts_json(verdicts));
  dir.write_text("report.txt", report.str());
  out << report.str();
  return all_pass(verdicts) ? kExitOk : kExitCheckFailed;
}

int run_converge(const Config& cfg, std::ostream& out) {
  validate(cfg);
  const std::size_t top = cfg.levels.back();
  const BasisPtr basis = build_basis(std::max(top, cfg.basis_size));
  const TriadTensor tensor = build_tensor(basis);
  Config scenario_cfg = cfg;
  scenario_cfg.m = basis->size();
  const Scenario scenario = make_scenario(scenario_cfg, basis);

  const RefinementReport rep = refinement_study(scenario, cfg.levels, cfg.solver_config(),
                                                tensor, cfg.seed.value_or(0));

  Verdict verdict;
  verdict.check = "l2H_gaps_strictly_decreasing";
  verdict.tolerance = 0.0;
  verdict.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 1; p < rep.l2H_gaps.size(); ++p) {
    const double growth = rep.l2H_gaps[p] - rep.l2H_gaps[p - 1];
    if (growth >= verdict.worst_violation) {
      verdict.worst_violation = growth;
      // Witness carries the level pair of the offending gap.
      verdict.witness = {static_cast<double>(rep.levels[p]),
                         static_cast<double>(rep.levels[p + 1])};
    }
  }
  // Strict decrease: an equal pair is a violation.
  const bool ok = rep.l2H_gaps.size() < 2 || verdict.worst_violation < 0.0;
  verdict.status = ok ? Status::pass : Status::fail;
  if (rep.l2H_gaps.size() < 2) verdict.worst_violation = 0.0;
  const std::vector<Verdict> verdicts{verdict};

  std::ostringstream report;
  report << run_header(cfg, "converge") << summarize(rep) << verdict_line(verdict) << '\n'
         << "overall: " << to_string(verdict.status) << '\n';

  const OutputDir dir(cfg.output_dir);
  dir.write("refinement.csv", [&](std::ostream& o) { write_refinement_csv(o, rep); });
  dir.write_text("verdicts.json", verdicts_json(verdicts));
  dir.write_text("report.txt", report.str());
  out << report.str();
  return ok ? kExitOk : kExitCheckFailed;
}

int run_estimate_c(const Config& cfg, std::ostream& out) {
  validate(cfg);
  const BasisPtr basis = build_basis(cfg.effective_basis_size());
  const TriadTensor tensor = build_tensor(basis);
  const std::uint64_t seed = cfg.seed.value_or(0);
  const ContinuityEstimate est = estimate_C(basis, tensor, cfg.continuity.trials, seed);
  const double C = continuity_constant(est, cfg.continuity.safety);

  json root;
  root["basis_size"] = basis->size();
  root["tensor_entries"] = tensor.size();
  root["trials"] = est.samples;
  root["seed"] = seed;
  root["C_hat"] = est.C_hat;
  root["C_half_hat"] = est.C_half_hat;
  root["safety"] = cfg.continuity.safety;
  root["C"] = C;

  std::ostringstream report;
  report << "nsledger estimate-c\n"
         << "basis: " << basis->size() << " modes, " << tensor.size() << " tensor entries\n"
         << "trials: " << est.samples << " (seed " << seed << ")\n"
         << "C_hat: " << format_double(est.C_hat) << '\n'
         << "C_half_hat: " << format_double(est.C_half_hat) << '\n'
         << "C (safety " << format_double(cfg.continuity.safety) << "): " << format_double(C)
         << '\n';

  const OutputDir dir(cfg.output_dir);
  dir.write_text("continuity.json", root.dump(2) + "\n");
  dir.write_text("report.txt", report.str());
  out << report.str();
  return kExitOk;
}

int guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SolverError& e) {
    err << "solver failure at t=" << format_double(e.time()) << ": " << e.what() << '\n';
    return kExitRuntimeError;
  } catch (const RefinementError& e) {
    err << "refinement failure: " << e.what() << '\n';
    return kExitRuntimeError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace nsledger::cli
