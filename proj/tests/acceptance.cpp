// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Tolerances are fixed here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nsledger/convergence.hpp"
#include "nsledger/energy_ledger.hpp"
#include "nsledger/galerkin_solver.hpp"
#include "nsledger/io.hpp"
#include "nsledger/scenarios.hpp"
#include "oracles.hpp"

using namespace nsledger;

namespace {

namespace tol {
constexpr double kShearSupError = 1e-8;
constexpr double kShearRuntime = 1.0;
constexpr double kEquality = 1e-6;
constexpr double kEqualityRuntime = 60.0;
constexpr double kInequality = 2e-6;
constexpr int kRestrictionSamples = 8;
constexpr double kZeroSolution = 1e-12;
constexpr double kEnvelopeSlack = 1e-6;
constexpr double kFixedPoint = 1e-6;
constexpr double kTotalVariation = 1e-8;
constexpr double kRatioSpread = 4.0;
constexpr double kJumpPlateau = 0.05;
constexpr double kPsiRelative = 0.01;
constexpr int kPsiPairs = 16;
constexpr double kSkew = 1e-12;
constexpr int kSkewTriples = 1000;
constexpr double kQuadrature = 1e-8;
constexpr int kQuadratureTriples = 100;
constexpr double kRefinementRuntime = 600.0;
}  // namespace tol

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("criterion %2d [%s] %s: %s\n", id, ok ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& line) {
  std::printf("             %s\n", line.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double h_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

SolverConfig config(double nu) {
  SolverConfig cfg;
  cfg.nu = nu;
  cfg.rel_tol = 1e-10;
  return cfg;
}

struct TaylorGreenRun {
  BasisPtr basis;
  TriadTensor tensor;
  SolverConfig cfg = config(0.05);
  std::shared_ptr<const Trajectory> traj;
  double seconds = 0.0;

  explicit TaylorGreenRun(std::size_t m) : basis(build_basis(m)), tensor(build_tensor(basis)) {
    const auto t0 = Clock::now();
    traj = std::make_shared<Trajectory>(
        simulate_nse(taylor_green_field(basis), Forcing{}, m, {0.0, 2.0}, cfg, tensor));
    seconds = seconds_since(t0);
  }
};

// 1. Single shear mode against the closed-form decay.
void shear_mode_exactness() {
  const auto t0 = Clock::now();
  const auto basis = build_basis(12);
  const TriadTensor tensor = build_tensor(basis);
  const std::size_t shear = shear_mode_index(*basis);
  const Trajectory traj =
      simulate_nse(shear_mode_field(basis, 1.0), Forcing{}, 12, {0.0, 5.0}, config(0.1), tensor);
  double sup = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t j = 0; j < traj.m; ++j) {
      const double exact = j == shear ? std::exp(-0.1 * traj.times[i]) : 0.0;
      sup = std::max(sup, std::abs(traj.states[i][j] - exact));
    }
  }
  const double runtime = seconds_since(t0);
  report(1, "shear-mode exactness", sup <= tol::kShearSupError && runtime <= tol::kShearRuntime,
         "sup_err=" + sci(sup) + " (tol " + sci(tol::kShearSupError) + "), runtime=" +
             sci(runtime) + " s (limit 1 s)");
}

// 2 and 3. Energy equality and inequality on the Taylor-Green run.
void energy_checks(const TaylorGreenRun& tg) {
  const EnergyLedger ledger = compute_ledger(*tg.traj, 0.0);
  const Verdict eq = check_energy_equality(ledger, tol::kEquality);
  report(2, "energy equality", eq.status == Status::pass && tg.seconds <= tol::kEqualityRuntime,
         "worst=" + sci(eq.worst_violation) + " (tol " + sci(tol::kEquality) + "), runtime=" +
             sci(tg.seconds) + " s (limit 60 s)");

  const Verdict ineq = check_energy_inequality(ledger, tol::kInequality);
  bool all = ineq.status == Status::pass;
  double worst_restricted = -INFINITY;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pick(0.0, 2.0);
  for (int k = 0; k < tol::kRestrictionSamples; ++k) {
    const double s = pick(rng);
    const Trajectory part = restrict(*tg.traj, s, 2.0);
    const Verdict v = check_energy_inequality(compute_ledger(part, s), tol::kInequality);
    worst_restricted = std::max(worst_restricted, v.worst_violation);
    all = all && v.status == Status::pass;
  }
  report(3, "energy inequality", all,
         "worst=" + sci(ineq.worst_violation) + ", worst over 8 restrictions=" +
             sci(worst_restricted) + " (tol " + sci(tol::kInequality) + ")");
}

// 4 and 5. Problem (C) with the Taylor-Green drift.
void problem_c(const TaylorGreenRun& tg) {
  const Trajectory zero = solve_problem_c(StoredDrift{tg.traj}, Forcing{}, SpectralField(tg.basis),
                                          100, {0.0, 2.0}, tg.cfg, tg.tensor);
  double sup = 0.0;
  for (const auto& row : zero.states) sup = std::max(sup, h_norm(row));
  report(4, "problem (C) uniqueness", sup <= tol::kZeroSolution,
         "sup|z|=" + sci(sup) + " (tol " + sci(tol::kZeroSolution) + ")");

  SpectralField z0 = random_field(tg.basis, 31);
  z0 = (1.0 / norm(z0, Space::H())) * z0;
  const Trajectory z =
      solve_problem_c(StoredDrift{tg.traj}, Forcing{}, z0, 100, {0.0, 2.0}, tg.cfg, tg.tensor);
  const double lambda1 = tg.basis->eigenvalue(0);
  double worst = -INFINITY;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double envelope = std::exp(-tg.cfg.nu * lambda1 * z.times[i]) * (1 + tol::kEnvelopeSlack);
    worst = std::max(worst, h_norm(z.states[i]) / envelope);
  }
  report(5, "problem (C) decay", worst <= 1.0,
         "max |z(t)| / (e^{-nu lambda1 t}(1+1e-6)) = " + sci(worst) + " (limit 1), lambda1=" +
             sci(lambda1));
}

// 6. Fixed point at m = 200, plus the finer-drift surrogate measurement.
void fixed_point() {
  const TaylorGreenRun tg(200);
  const Trajectory z = solve_problem_c(StoredDrift{tg.traj}, Forcing{}, tg.traj->field(0), 200,
                                       {0.0, 2.0}, tg.cfg, tg.tensor);
  double sup = 0.0;
  std::vector<double> y(200);
  for (std::size_t i = 0; i < z.size(); ++i) {
    tg.traj->state_at(z.times[i], y);
    double s = 0.0;
    for (std::size_t j = 0; j < 200; ++j) s += (z.states[i][j] - y[j]) * (z.states[i][j] - y[j]);
    sup = std::max(sup, std::sqrt(s));
  }
  report(6, "fixed point", sup <= tol::kFixedPoint,
         "sup|z - y|=" + sci(sup) + " (tol " + sci(tol::kFixedPoint) + ")");

  // Surrogate drift: a level-400 run drives the level-200 problem.
  const TaylorGreenRun fine(400);
  const Trajectory zf = solve_problem_c(StoredDrift{fine.traj}, Forcing{}, fine.traj->field(0),
                                        200, {0.0, 2.0}, fine.cfg, fine.tensor);
  double to_coarse = 0.0, to_fine = 0.0;
  std::vector<double> yf(400);
  for (std::size_t i = 0; i < zf.size(); ++i) {
    tg.traj->state_at(zf.times[i], y);
    fine.traj->state_at(zf.times[i], yf);
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < 400; ++j) {
      const double zj = j < 200 ? zf.states[i][j] : 0.0;
      const double yj = j < 200 ? y[j] : 0.0;
      a += (zj - yj) * (zj - yj);
      b += (zj - yf[j]) * (zj - yf[j]);
    }
    to_coarse = std::max(to_coarse, std::sqrt(a));
    to_fine = std::max(to_fine, std::sqrt(b));
  }
  info("level-400 drift at m=200: sup|z - y_200|=" + sci(to_coarse) +
       ", sup|z - y_400|=" + sci(to_fine));
}

// 7. Bounded variation of |y|^2 on the shear-mode run.
void bounded_variation() {
  const auto basis = build_basis(12);
  const TriadTensor tensor = build_tensor(basis);
  const double nu = 0.1, T = 5.0;
  const Trajectory traj =
      simulate_nse(shear_mode_field(basis, 1.0), Forcing{}, 12, {0.0, T}, config(nu), tensor);
  const VariationEstimate tv = total_variation(traj, 2);
  const double exact = 1.0 - std::exp(-2.0 * nu * T);
  const double err = std::abs(tv.coarse - exact);
  const bool ok = err <= tol::kTotalVariation && tv.refined >= tv.coarse - 1e-14;
  report(7, "bounded variation", ok,
         "TV=" + sci(tv.coarse) + " vs 1-e^{-2 nu T}=" + sci(exact) + " err=" + sci(err) +
             " (tol " + sci(tol::kTotalVariation) + "), refined TV=" + sci(tv.refined));
}

// 8. Right continuity on the Taylor-Green run and on a synthetic jump.
void right_continuity(const TaylorGreenRun& tg) {
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  bool ok = true;
  double worst_spread = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double s = 0.05 + 0.2375 * k;
    const auto moduli = right_continuity_modulus(*tg.traj, s, deltas);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      if (i > 0 && !(moduli[i] < moduli[i - 1])) ok = false;
      lo = std::min(lo, moduli[i] / deltas[i]);
      hi = std::max(hi, moduli[i] / deltas[i]);
    }
    worst_spread = std::max(worst_spread, hi / lo);
  }
  ok = ok && worst_spread <= tol::kRatioSpread;

  // Synthetic fixture: a jump of size J at s' = s + 0.03 on a fine grid.
  const double jump = 0.25, s = 0.5, s_jump = 0.53;
  Trajectory synthetic;
  synthetic.basis = tg.basis;
  synthetic.m = 1;
  for (int i = 0; i <= 400; ++i) {
    const double t = i / 400.0;
    synthetic.times.push_back(t);
    synthetic.states.push_back({t < s_jump ? 0.0 : jump});
    synthetic.rates.push_back({0.0});
    synthetic.visc_accum.push_back(0.0);
    synthetic.work_accum.push_back(0.0);
  }
  const auto plateau = right_continuity_modulus(synthetic, s, std::vector<double>{0.2, 0.1, 0.05});
  double plateau_err = 0.0;
  for (double p : plateau) plateau_err = std::max(plateau_err, std::abs(p - jump) / jump);
  const bool detected =
      plateau_err <= tol::kJumpPlateau &&
      check_right_continuity(synthetic, std::vector<double>{s},
                             std::vector<double>{0.2, 0.1, 0.05, 0.025, 0.0125}, 1e-12)
              .status == Status::fail;
  report(8, "right continuity", ok && detected,
         "moduli decreasing=" + std::string(ok ? "yes" : "no") + ", max ratio spread=" +
             sci(worst_spread) + " (limit 4), jump plateau rel err=" + sci(plateau_err) +
             " (tol 5%), jump flagged=" + (detected ? "yes" : "no"));
}

// 9. psi diagnostic at basis size 400.
void psi_diagnostic() {
  const auto basis = build_basis(400);
  const TriadTensor tensor = build_tensor(basis);
  const ContinuityEstimate est = estimate_C(basis, tensor, 10000, 7);
  const double C = continuity_constant(est);
  const std::vector<std::size_t> levels{50, 100, 200, 400};
  std::size_t violations = 0;
  double worst = 0.0;
  for (int p = 0; p < tol::kPsiPairs; ++p) {
    const SpectralField z = random_field(basis, 1000 + 2 * p);
    const SpectralField u = random_field(basis, 1001 + 2 * p);
    const PsiDiagnostic d = psi_sequence(z, u, levels, C, 0.05);
    worst = std::max(worst, std::abs(d.psi_values.back() - d.limit) / d.limit);
    violations += d.monotonicity_violations;
  }
  report(9, "psi diagnostic", worst <= tol::kPsiRelative,
         "max top-level |psi - nu|z|_V^2| / nu|z|_V^2 = " + sci(worst) + " (tol 1%), C=" +
             sci(C) + ", monotonicity violations=" + std::to_string(violations) + " of " +
             std::to_string(tol::kPsiPairs * (levels.size() - 1)) + " level steps (reported only)");
}

// 10. Trilinear invariants at m = 100.
void trilinear_invariants() {
  const auto basis = build_basis(100);
  const TriadTensor tensor = build_tensor(basis);
  std::mt19937_64 rng(10);
  double skew = 0.0;
  for (int i = 0; i < tol::kSkewTriples; ++i) {
    const SpectralField u = random_field(basis, rng);
    const SpectralField v = random_field(basis, rng);
    const double bound = norm(u, Space::V()) * std::pow(norm(v, Space::V()), 2);
    skew = std::max(skew, std::abs(b_eval(u, v, v, tensor)) / bound);
  }
  bool antisymmetric = true;
  for (const TriadEntry& e : tensor.entries()) {
    antisymmetric = antisymmetric && tensor.at(e.a, e.b, e.c) == -tensor.at(e.a, e.c, e.b) &&
                    tensor.at(e.a, e.b, e.b) == 0.0;
  }
  double quad = 0.0;
  for (int i = 0; i < tol::kQuadratureTriples; ++i) {
    const SpectralField u = random_field(basis, rng);
    const SpectralField v = random_field(basis, rng);
    const SpectralField w = random_field(basis, rng);
    const double exact = oracle::trilinear(oracle::realize(u, 8), oracle::realize(v, 8),
                                           oracle::realize(w, 8));
    quad = std::max(quad, std::abs(b_eval(u, v, w, tensor) - exact) /
                              std::max(std::abs(exact), 1e-300));
  }
  report(10, "trilinear invariants",
         skew <= tol::kSkew && antisymmetric && quad <= tol::kQuadrature,
         "max |b(u,v,v)|/(|u|_V |v|_V^2)=" + sci(skew) + " (tol 1e-12), antisymmetry exact=" +
             (antisymmetric ? "yes" : "no") + ", quadrature rel err=" + sci(quad) +
             " (tol 1e-8)");
}

// 11. Refinement Cauchy surrogate.
void refinement() {
  const auto t0 = Clock::now();
  const auto basis = build_basis(400);
  const TriadTensor tensor = build_tensor(basis);
  const Scenario sc{"taylor_green", taylor_green_field(basis), Forcing{}, {0.0, 2.0}};
  const std::vector<std::size_t> levels{50, 100, 200, 400};
  const RefinementReport rep = refinement_study(sc, levels, config(0.05), tensor);
  const double runtime = seconds_since(t0);
  bool decreasing = true;
  for (std::size_t p = 1; p < rep.l2H_gaps.size(); ++p) {
    decreasing = decreasing && rep.l2H_gaps[p] < rep.l2H_gaps[p - 1];
  }
  std::string gaps;
  for (double g : rep.l2H_gaps) gaps += (gaps.empty() ? "" : ", ") + sci(g);
  report(11, "refinement Cauchy surrogate", decreasing && runtime <= tol::kRefinementRuntime,
         "l2H gaps [" + gaps + "] strictly decreasing=" + (decreasing ? "yes" : "no") +
             ", runtime=" + sci(runtime) + " s (limit 600 s)");
  std::string nonlinear;
  for (double g : rep.nonlinear_gaps) nonlinear += (nonlinear.empty() ? "" : ", ") + sci(g);
  info("nonlinear-term gaps in V*_{3/2}: [" + nonlinear + "]");
}

}  // namespace

int main() {
  shear_mode_exactness();
  const TaylorGreenRun tg(100);
  energy_checks(tg);
  problem_c(tg);
  fixed_point();
  bounded_variation();
  right_continuity(tg);
  psi_diagnostic();
  trilinear_invariants();
  refinement();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
