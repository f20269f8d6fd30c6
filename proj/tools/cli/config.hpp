#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsledger/galerkin_solver.hpp"

namespace nsledger::cli {

/// Rejected configuration; the message starts with the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForcingConfig {
  std::string type = "none";  // none | modal_sinusoid | file
  std::size_t dual_mode = 0;
  double dual_amplitude = 0.0;
  std::size_t h_mode = 0;
  double h_amplitude = 0.0;
  double omega = 1.0;
  std::string dual_file;
  std::string h_file;
};

struct CheckConfig {
  std::vector<std::string> selection{"all"};
  double equality_tol = 1e-6;
  double inequality_tol = 2e-6;
  double bounded_variation_tol = 1e-8;
  double continuity_tol = 1e-8;
  double continuity_spread = 4.0;
};

struct ProblemCConfig {
  std::string drift;
  std::string mode = "zero";  // zero | decay | fixed_point
  std::uint64_t z_seed = 1;
  double zero_tol = 1e-12;
  double envelope_slack = 1e-6;
  double fixed_point_tol = 1e-6;
};

struct ContinuityConfig {
  std::size_t trials = 10000;
  double safety = 2.0;
};

struct Config {
  std::string scenario = "taylor_green";  // shear_mode | taylor_green | random_field | from_file
  double nu = 0.05;
  Interval interval{0.0, 2.0};
  std::size_t m = 100;
  /// 0 means "same as m" (or the largest refinement level).
  std::size_t basis_size = 0;
  double amplitude = 1.0;
  std::optional<std::uint64_t> seed;
  std::string initial_file;
  std::string output_dir = "out";
  std::vector<std::size_t> levels{50, 100, 200, 400};
  ForcingConfig forcing;
  SolverConfig solver;
  CheckConfig checks;
  ProblemCConfig problem_c;
  ContinuityConfig continuity;

  std::size_t effective_basis_size() const { return basis_size == 0 ? m : basis_size; }
  SolverConfig solver_config() const;
};

/// Parses a JSON document. Keys left out keep their defaults; unknown keys
/// and wrong types are errors.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Field-level semantic checks (ordering, positivity, required fields).
void validate(const Config& cfg);

/// Complete effective configuration as pretty-printed JSON.
std::string dump_config(const Config& cfg);

/// Parses "50,100,200" style lists.
std::vector<std::size_t> parse_levels(const std::string& text);

}  // namespace nsledger::cli
