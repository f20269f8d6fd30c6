#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "nsledger/spectral_basis.hpp"
#include "nsledger/trajectory.hpp"
#include "nsledger/trilinear_form.hpp"

namespace nsledger {

/// Writes modal coefficients at time t into `out` (all out.size() entries).
using ModalFunction = std::function<void(double t, std::span<double> out)>;

/// Forcing f = dual_part + h_part, kept as two summands so the L2(V*) and
/// L1(H) pieces stay separate in configuration and output. Either part may
/// be empty, meaning zero.
class Forcing {
 public:
  Forcing() = default;
  Forcing(ModalFunction dual_part, ModalFunction h_part);

  /// f_j(t) = amplitude * sin(omega t) on one mode per part (0-based index);
  /// a zero amplitude disables that part.
  static Forcing modal_sinusoid(std::size_t dual_mode, double dual_amplitude,
                                std::size_t h_mode, double h_amplitude,
                                double omega);

  bool is_zero() const { return !dual_ && !h_; }
  bool has_dual() const { return static_cast<bool>(dual_); }
  bool has_h() const { return static_cast<bool>(h_); }

  /// out = P_m f(t) with m = out.size().
  void evaluate(double t, std::span<double> out) const;
  void evaluate_dual(double t, std::span<double> out) const;
  void evaluate_h(double t, std::span<double> out) const;

 private:
  ModalFunction dual_;
  ModalFunction h_;
};

/// Piecewise cubic Hermite interpolation of sampled modal coefficients with
/// finite-difference slopes; the rule used for file-backed forcing.
ModalFunction sampled_modal_function(std::vector<double> times,
                                     std::vector<std::vector<double>> rows);

struct SolverConfig {
  double nu = 0.05;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;
  /// Uniform times tau + k (T - tau) / n that every run lands on exactly.
  std::size_t dense_output_points = 200;

  void validate() const;
};

/// Absolute tolerance on the energy ledger implied by the integrator
/// tolerances for a run whose energy is of size `energy_scale`.
double ledger_tol(const SolverConfig& cfg, double energy_scale);

struct SelfDrift {};
struct StoredDrift {
  std::shared_ptr<const Trajectory> trajectory;
};
/// Advecting field of the Galerkin system: the evolving solution itself, or a
/// prescribed trajectory interpolated with its cubic Hermite rule.
using DriftSpec = std::variant<SelfDrift, StoredDrift>;

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Integrates, for j < m,
///   da_j/dt = -nu lambda_j a_j - sum_{a,b} u_a a_b T[a,b,j] + f_j(t)
/// with u given by `drift`, plus the viscous and work accumulators, using a
/// Lawson (integrating-factor) Dormand-Prince 5(4) pair with adaptive steps.
Trajectory integrate_galerkin(const DriftSpec& drift, const Forcing& forcing,
                              const SpectralField& initial, std::size_t m,
                              Interval interval, const SolverConfig& cfg,
                              const TriadTensor& tensor);

/// Galerkin truncation of Navier-Stokes, the drift being the solution itself.
Trajectory simulate_nse(const SpectralField& y_tau, const Forcing& f, std::size_t m,
                        Interval interval, const SolverConfig& cfg,
                        const TriadTensor& tensor);

/// Linear problem dz/dt + nu A z + B(u, z) = g with a stored drift u.
Trajectory solve_problem_c(const DriftSpec& drift, const Forcing& g,
                           const SpectralField& z_tau, std::size_t m,
                           Interval interval, const SolverConfig& cfg,
                           const TriadTensor& tensor);

/// Replaces the rates of a self-drift trajectory (e.g. read back from CSV)
/// with exact right-hand-side values.
void fill_self_drift_rates(Trajectory& traj, const Forcing& f, const TriadTensor& tensor);

}  // namespace nsledger
