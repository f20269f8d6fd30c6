#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nsledger/spectral_basis.hpp"
#include "nsledger/trajectory.hpp"

namespace nsledger {

/// Sampled Leray-Hopf functional
///   V(t) = 1/2 |y(t)|^2 + nu int_tau^t |y|_V^2 - int_tau^t <f, y>.
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> kinetic;
  std::vector<double> visc;
  std::vector<double> work;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  void validate() const;
};

/// Assembles the ledger from the trajectory's augmented accumulators. `tau`
/// must equal the trajectory start.
EnergyLedger compute_ledger(const Trajectory& traj, double tau);

/// Builds a ledger from raw columns, recomputing V = kinetic + visc - work.
EnergyLedger make_ledger(std::vector<double> times, std::vector<double> kinetic,
                         std::vector<double> visc, std::vector<double> work);

enum class Status { pass, fail };
std::string to_string(Status status);

/// Time pair (s, t) at which the worst value occurs; s == t for single-time
/// witnesses.
struct Witness {
  double s = 0.0;
  double t = 0.0;
};

struct Verdict {
  std::string check;
  Status status = Status::pass;
  double worst_violation = 0.0;
  Witness witness;
  double tolerance = 0.0;
};

/// PASS iff max_t |V(t) - V(tau)| <= tol.
Verdict check_energy_equality(const EnergyLedger& ledger, double tol);

/// PASS iff V(t) - V(s) <= tol for every sampled s < t. One scan with a
/// running minimum.
Verdict check_energy_inequality(const EnergyLedger& ledger, double tol);

/// Sum of |v[i+1] - v[i]|.
double total_variation(std::span<const double> values);

struct VariationEstimate {
  double coarse = 0.0;
  double refined = 0.0;
  std::size_t refinement = 1;
};

/// Total variation of t -> |y(t)|^2 on the output grid and on the grid with
/// every interval subdivided `refinement` times (Hermite interpolant).
VariationEstimate total_variation(const Trajectory& traj, std::size_t refinement);

/// Bounded variation of |y|^2 against the bound implied by the ledger:
///   TV(|y|^2) <= 2 (V(tau) - V(T)) + 2 visc(T) + 2 TV(work).
/// The bound holds whenever V is nonincreasing; worst_violation is
/// TV - bound.
Verdict check_bounded_variation(const EnergyLedger& ledger, double tol);

/// For each delta: max over output times t in (s, s + delta], plus s + delta
/// itself, of |y(t) - y(s)|_H. y(s) comes from the dense-output interpolant.
std::vector<double> right_continuity_modulus(const Trajectory& traj, double s,
                                             std::span<const double> deltas);

/// Right continuity at each sampled s: moduli must not grow as delta shrinks,
/// and the ratios modulus/delta must agree up to `lipschitz_spread`:
///   (max ratio - spread * min ratio) * delta_min <= tol.
Verdict check_right_continuity(const Trajectory& traj, std::span<const double> s_points,
                               std::span<const double> deltas, double tol,
                               double lipschitz_spread = 4.0);

struct PsiDiagnostic {
  std::vector<std::size_t> m_levels;
  /// psi_values[i] belongs to m_levels[i].
  std::vector<double> psi_values;
  /// nu |z|_V^2.
  double limit = 0.0;
  double C_used = 0.0;
  /// Levels where psi_m > psi_{m'} for the next level m' (reported, not asserted).
  std::size_t monotonicity_violations = 0;
};

/// psi_m = |P_m z|_V (nu |P_m z|_V - C |u|_V |z - P_m z|_V) per level.
PsiDiagnostic psi_sequence(const SpectralField& z, const SpectralField& u,
                           std::span<const std::size_t> levels, double C, double nu);

/// Time integrals int psi_m dt (trapezoid on z's grid, u Hermite-interpolated)
/// for each level, followed by nu int |z|_V^2 dt as the last element.
std::vector<double> psi_time_integrals(const Trajectory& z, const Trajectory& u,
                                       std::span<const std::size_t> levels, double C,
                                       double nu);

}  // namespace nsledger
