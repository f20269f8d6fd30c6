#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsledger/spectral_basis.hpp"

namespace nsledger {

struct Interval {
  double tau = 0.0;
  double T = 1.0;

  double length() const { return T - tau; }
};

/// Output of a Galerkin run at truncation level m: coefficient snapshots on a
/// strictly increasing time grid plus the augmented energy accumulators
///   visc_accum(t) = nu int_tau^t |y|_V^2,   work_accum(t) = int_tau^t <f, y>.
///
/// Snapshots hold the m active coefficients only; higher modes are zero.
/// `rates` holds d/dt of each snapshot and drives the cubic Hermite
/// interpolant used for every off-grid evaluation.
struct Trajectory {
  BasisPtr basis;
  std::size_t m = 0;
  double nu = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;

  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> rates;
  std::vector<double> visc_accum;
  std::vector<double> work_accum;

  std::size_t size() const { return times.size(); }
  double start() const { return times.front(); }
  double end() const { return times.back(); }
  Interval interval() const { return {start(), end()}; }

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;

  /// Snapshot i as a field on the full basis.
  SpectralField field(std::size_t i) const;
  /// Hermite-interpolated field at an arbitrary time in [start, end].
  SpectralField field_at(double t) const;

  /// Hermite-interpolated active coefficients (out.size() <= m; extra entries zero).
  void state_at(double t, std::span<double> out) const;
  void rate_at(double t, std::span<double> out) const;

  /// Accumulators between grid points are interpolated linearly.
  double visc_at(double t) const;
  double work_at(double t) const;

  /// Fills `rates` with second-order finite differences of `states`.
  void estimate_rates();

  /// Index i with times[i] <= t <= times[i+1]; clamps to the last interval.
  std::size_t locate(double t) const;
};

/// Restriction to [t1, t2] with accumulators rebased to zero at t1. Off-grid
/// endpoints are inserted from the Hermite interpolant, so restrictions
/// compose exactly.
Trajectory restrict(const Trajectory& traj, double t1, double t2);

}  // namespace nsledger
