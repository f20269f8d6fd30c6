#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nsledger/energy_ledger.hpp"
#include "nsledger/galerkin_solver.hpp"
#include "nsledger/scenarios.hpp"

using namespace nsledger;

namespace {

// Single-coefficient trajectory a(t) on a uniform grid with exact rates.
template <class F, class DF>
Trajectory scalar_trajectory(std::size_t n, double T, F a, DF da) {
  Trajectory traj;
  traj.basis = build_basis(12);
  traj.m = 12;
  traj.nu = 0.1;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = T * double(i) / double(n);
    traj.times.push_back(t);
    std::vector<double> row(12, 0.0), rate(12, 0.0);
    row[0] = a(t);
    rate[0] = da(t);
    traj.states.push_back(row);
    traj.rates.push_back(rate);
    traj.visc_accum.push_back(0.0);
    traj.work_accum.push_back(0.0);
  }
  return traj;
}

Trajectory shear_run(double nu, double T) {
  const auto basis = build_basis(12);
  const TriadTensor tensor = build_tensor(basis);
  SolverConfig cfg;
  cfg.nu = nu;
  return simulate_nse(shear_mode_field(basis, 1.0), Forcing{}, 12, {0.0, T}, cfg, tensor);
}

}  // namespace

TEST(Ledger, ReconstructionIdentity) {
  const Trajectory traj = shear_run(0.1, 3.0);
  const EnergyLedger ledger = compute_ledger(traj, 0.0);
  EXPECT_NO_THROW(ledger.validate());
  EXPECT_EQ(ledger.values[0], ledger.kinetic[0]);
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    double sq = 0.0;
    for (double x : traj.states[i]) sq += x * x;
    EXPECT_EQ(ledger.kinetic[i], 0.5 * sq);
    EXPECT_EQ(ledger.values[i], ledger.kinetic[i] + ledger.visc[i] - ledger.work[i]);
  }
  EXPECT_THROW(compute_ledger(traj, 0.5), std::invalid_argument);
}

TEST(Ledger, ShearDecayIsConstantInClosedForm) {
  const Trajectory traj = shear_run(0.1, 5.0);
  const EnergyLedger ledger = compute_ledger(traj, 0.0);
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const double t = ledger.times[i];
    EXPECT_NEAR(ledger.visc[i], 0.5 * (1.0 - std::exp(-0.2 * t)), 1e-10);
    EXPECT_NEAR(ledger.values[i], 0.5, 1e-10);
  }
}

TEST(Checks, EqualityImpliesInequalityAtTwiceTolerance) {
  for (double nu : {0.05, 0.1, 0.3}) {
    const EnergyLedger ledger = compute_ledger(shear_run(nu, 2.0), 0.0);
    const Verdict eq = check_energy_equality(ledger, 1e-9);
    ASSERT_EQ(eq.status, Status::pass);
    EXPECT_EQ(check_energy_inequality(ledger, 2e-9).status, Status::pass);
  }
}

TEST(Checks, StrictlyDecreasingLedgerPassesInequality) {
  const EnergyLedger ledger =
      make_ledger({0.0, 1.0, 2.0, 3.0}, {4.0, 3.0, 2.5, 1.0}, {0, 0, 0, 0}, {0, 0, 0, 0});
  const Verdict v = check_energy_inequality(ledger, 0.0);
  EXPECT_EQ(v.status, Status::pass);
  EXPECT_LE(v.worst_violation, 0.0);
}

TEST(Checks, UpwardStepIsCaughtWithWitness) {
  const EnergyLedger ledger = make_ledger({0.0, 1.0, 2.0, 3.0, 4.0}, {2.0, 1.0, 1.5, 0.8, 1.4},
                                          {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0});
  const Verdict v = check_energy_inequality(ledger, 1e-12);
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_DOUBLE_EQ(v.worst_violation, 0.6);
  EXPECT_EQ(v.witness.s, 3.0);
  EXPECT_EQ(v.witness.t, 4.0);
  const Verdict eq = check_energy_equality(ledger, 1e-12);
  EXPECT_EQ(eq.status, Status::fail);
  EXPECT_DOUBLE_EQ(eq.worst_violation, 1.2);
}

TEST(Checks, InequalityScanMatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t, k;
    for (int i = 0; i < 40; ++i) {
      t.push_back(i);
      k.push_back(1.0 - 0.01 * i + noise(rng));
    }
    const EnergyLedger ledger = make_ledger(t, k, std::vector<double>(40, 0.0),
                                            std::vector<double>(40, 0.0));
    double brute = -INFINITY;
    for (int s = 0; s < 40; ++s)
      for (int u = s + 1; u < 40; ++u) brute = std::max(brute, k[u] - k[s]);
    EXPECT_DOUBLE_EQ(check_energy_inequality(ledger, 0.0).worst_violation, brute);
  }
}

TEST(Checks, MalformedLedgerIsRejected) {
  EXPECT_THROW(check_energy_equality(EnergyLedger{}, 1.0), std::invalid_argument);
  EXPECT_THROW(make_ledger({0.0, 0.0}, {1, 1}, {0, 0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(make_ledger({0.0, 1.0}, {1, 1}, {0.5, 0.1}, {0, 0}), std::invalid_argument);
}

TEST(TotalVariation, SeriesCases) {
  EXPECT_EQ(total_variation(std::vector<double>{2.0, 2.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{0.0, 1.0, -1.0, 2.0}), 6.0);
}

TEST(TotalVariation, ShearDecayMatchesEndpoints) {
  const Trajectory traj = shear_run(0.1, 5.0);
  const VariationEstimate tv = total_variation(traj, 4);
  EXPECT_NEAR(tv.coarse, 1.0 - std::exp(-1.0), 1e-8);
  EXPECT_GE(tv.refined, tv.coarse - 1e-14);
}

TEST(TotalVariation, RefinementNeverDecreasesOnOscillation) {
  const Trajectory traj = scalar_trajectory(
      13, 4.0, [](double t) { return std::sin(3.0 * t); },
      [](double t) { return 3.0 * std::cos(3.0 * t); });
  for (std::size_t r : {1u, 2u, 5u}) {
    const VariationEstimate tv = total_variation(traj, r);
    EXPECT_GE(tv.refined, tv.coarse - 1e-14);
  }
}

TEST(TotalVariation, RandomSeriesRefinementDominates) {
  // Inserting points between samples can only add variation (triangle inequality).
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> coarse, fine;
    for (int i = 0; i < 20; ++i) {
      const double x = g(rng);
      coarse.push_back(x);
      fine.push_back(x);
      if (i + 1 < 20) fine.push_back(g(rng));
    }
    std::vector<double> fine_ordered;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      fine_ordered.push_back(coarse[i]);
      if (i + 1 < coarse.size()) fine_ordered.push_back(fine[2 * i + 1]);
    }
    EXPECT_GE(total_variation(fine_ordered), total_variation(coarse) - 1e-14);
  }
}

TEST(TotalVariation, SuperadditiveUnderRestriction) {
  const Trajectory traj = scalar_trajectory(
      40, 4.0, [](double t) { return std::cos(2.0 * t); },
      [](double t) { return -2.0 * std::sin(2.0 * t); });
  const double whole = total_variation(traj, 1).coarse;
  const double part = total_variation(restrict(traj, 1.0, 3.0), 1).coarse;
  EXPECT_GE(whole, part);
}

TEST(BoundedVariation, PassesOnGalerkinRun) {
  const EnergyLedger ledger = compute_ledger(shear_run(0.1, 5.0), 0.0);
  EXPECT_EQ(check_bounded_variation(ledger, 1e-8).status, Status::pass);
}

TEST(RightContinuity, ConstantTrajectoryHasZeroModuli) {
  const Trajectory traj = scalar_trajectory(
      20, 1.0, [](double) { return 0.7; }, [](double) { return 0.0; });
  const std::vector<double> deltas{0.2, 0.1, 0.05};
  for (double m : right_continuity_modulus(traj, 0.3, deltas)) EXPECT_EQ(m, 0.0);
  EXPECT_THROW(right_continuity_modulus(traj, 1.0, deltas), std::invalid_argument);
  EXPECT_THROW(right_continuity_modulus(traj, 0.9, deltas), std::invalid_argument);
}

TEST(RightContinuity, SmoothRunIsLipschitz) {
  const Trajectory traj = shear_run(0.1, 2.0);
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  const auto moduli = right_continuity_modulus(traj, 0.5, deltas);
  for (std::size_t k = 1; k < moduli.size(); ++k) EXPECT_LT(moduli[k], moduli[k - 1]);
  const std::vector<double> s{0.2, 0.5, 1.0, 1.5};
  EXPECT_EQ(check_right_continuity(traj, s, deltas, 1e-12).status, Status::pass);
}

TEST(RightContinuity, InsertedJumpPlateaus) {
  const double jump = 0.3;
  const double s_jump = 0.52;
  Trajectory traj = scalar_trajectory(
      200, 1.0, [&](double t) { return t < s_jump ? 0.0 : jump; }, [](double) { return 0.0; });
  const std::vector<double> deltas{0.16, 0.08, 0.04, 0.02, 0.01};
  const auto moduli = right_continuity_modulus(traj, 0.5, deltas);
  for (std::size_t k = 0; k < moduli.size(); ++k) {
    if (deltas[k] >= s_jump - 0.5) EXPECT_NEAR(moduli[k], jump, 0.05 * jump);
  }
  const std::vector<double> s{0.5};
  EXPECT_EQ(check_right_continuity(traj, s, deltas, 1e-12).status, Status::fail);
}

TEST(Psi, FullLevelEqualsLimit) {
  const auto basis = build_basis(200);
  const SpectralField z = random_field(basis, 1);
  const SpectralField u = random_field(basis, 2);
  const std::vector<std::size_t> levels{50, 100, 200};
  const PsiDiagnostic d = psi_sequence(z, u, levels, 0.06, 0.05);
  EXPECT_DOUBLE_EQ(d.psi_values.back(), d.limit);
  EXPECT_EQ(d.C_used, 0.06);
  for (double p : d.psi_values) EXPECT_TRUE(std::isfinite(p));
}

TEST(Psi, SaturatesOnceSupportIsCovered) {
  const auto basis = build_basis(200);
  const SpectralField z = random_field(basis, 3, 36);
  const SpectralField u = random_field(basis, 4);
  const std::vector<std::size_t> levels{36, 80, 150, 200};
  const PsiDiagnostic d = psi_sequence(z, u, levels, 0.06, 0.05);
  for (double p : d.psi_values) EXPECT_DOUBLE_EQ(p, d.limit);
  EXPECT_EQ(d.monotonicity_violations, 0u);
}

TEST(Psi, ApproachesLimitAlongLevels) {
  const auto basis = build_basis(400);
  const std::vector<std::size_t> levels{50, 100, 200, 300, 400};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SpectralField z = random_field(basis, 2 * seed);
    const SpectralField u = random_field(basis, 2 * seed + 1);
    const PsiDiagnostic d = psi_sequence(z, u, levels, 0.06, 0.05);
    const double first = std::abs(d.psi_values.front() - d.limit);
    const double last = std::abs(d.psi_values.back() - d.limit);
    EXPECT_LE(last, first);
  }
  EXPECT_THROW(psi_sequence(random_field(basis, 1), random_field(basis, 2),
                            std::vector<std::size_t>{100, 50}, 0.06, 0.05),
               std::invalid_argument);
}

TEST(Psi, TimeIntegralsConvergeToViscousIntegral) {
  const auto basis = build_basis(100);
  const TriadTensor tensor = build_tensor(basis);
  SolverConfig cfg;
  cfg.nu = 0.05;
  auto u = std::make_shared<Trajectory>(
      simulate_nse(taylor_green_field(basis), Forcing{}, 100, {0.0, 1.0}, cfg, tensor));
  const Trajectory z = solve_problem_c(StoredDrift{u}, Forcing{}, random_field(basis, 5), 100,
                                       {0.0, 1.0}, cfg, tensor);
  const std::vector<std::size_t> levels{25, 50, 100};
  const auto integrals = psi_time_integrals(z, *u, levels, 0.06, cfg.nu);
  ASSERT_EQ(integrals.size(), 4u);
  EXPECT_NEAR(integrals[2], integrals[3], 1e-12 * std::abs(integrals[3]));
  EXPECT_LE(std::abs(integrals[1] - integrals[3]), std::abs(integrals[0] - integrals[3]));
}
