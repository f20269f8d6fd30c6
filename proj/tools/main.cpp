#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using namespace nsledger::cli;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> levels;
  std::optional<std::string> drift;
  std::optional<std::string> mode;
  std::vector<std::string> checks;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--out", o.out_dir, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides seed)");
  cmd->add_option("--tol", o.tol, "Absolute tolerance applied to every selected check");
  cmd->add_option("--levels", o.levels, "Comma-separated refinement levels");
}

Config effective_config(const Overrides& o) {
  Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) {
    cfg.checks.equality_tol = *o.tol;
    cfg.checks.inequality_tol = *o.tol;
    cfg.checks.bounded_variation_tol = *o.tol;
    cfg.checks.continuity_tol = *o.tol;
    cfg.problem_c.zero_tol = *o.tol;
    cfg.problem_c.fixed_point_tol = *o.tol;
  }
  if (o.levels) cfg.levels = parse_levels(*o.levels);
  if (o.drift) cfg.problem_c.drift = *o.drift;
  if (o.mode) cfg.problem_c.mode = *o.mode;
  if (!o.checks.empty()) cfg.checks.selection = o.checks;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin Navier-Stokes solver with energy-ledger verification"};
  app.require_subcommand(1);
  Overrides o;
  std::string input;

  auto* simulate = app.add_subcommand("simulate", "Run a Galerkin simulation and check its ledger");
  add_common(simulate, o);

  auto* problem_c = app.add_subcommand("problem-c", "Solve the linear problem with a stored drift");
  add_common(problem_c, o);
  problem_c->add_option("--drift", o.drift, "Drift trajectory file (overrides problem_c.drift)");
  problem_c->add_option("--mode", o.mode, "zero | decay | fixed_point");

  auto* verify = app.add_subcommand("verify", "Check a stored ledger or trajectory");
  add_common(verify, o);
  verify->add_option("input", input, "Ledger CSV or trajectory file")->required();
  verify->add_option("--checks", o.checks, "Checks to run (default: all applicable)");

  auto* converge = app.add_subcommand("converge", "Cross-resolution refinement study");
  add_common(converge, o);

  auto* estimate = app.add_subcommand("estimate-c", "Estimate the trilinear continuity constant");
  add_common(estimate, o);

  auto* print = app.add_subcommand("print-config", "Print the full effective configuration");
  add_common(print, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  return guarded(
      [&]() -> int {
        const Config cfg = effective_config(o);
        if (simulate->parsed()) return run_simulate(cfg, std::cout);
        if (problem_c->parsed()) return run_problem_c(cfg, std::cout);
        if (verify->parsed()) return run_verify(cfg, input, std::cout);
        if (converge->parsed()) return run_converge(cfg, std::cout);
        if (estimate->parsed()) return run_estimate_c(cfg, std::cout);
        validate(cfg);
        std::cout << dump_config(cfg);
        return kExitOk;
      },
      std::cerr);
}
