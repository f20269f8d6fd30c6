#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsledger/galerkin_solver.hpp"
#include "nsledger/scenarios.hpp"
#include "nsledger/trajectory.hpp"

namespace nsledger {

/// (int |a(t) - b(t)|^2 dt)^(1/2), composite trapezoid on the union of both
/// grids, each side evaluated through its own interpolant.
double l2H_distance(const Trajectory& a, const Trajectory& b);

/// t -> (y(t), v) on the trajectory's output grid.
std::vector<double> weak_trace(const Trajectory& traj, const SpectralField& v);

/// Cross-resolution distances between consecutive levels; gap vectors have
/// one entry per consecutive pair (levels[i], levels[i+1]).
struct RefinementReport {
  std::vector<std::size_t> levels;
  std::vector<double> l2H_gaps;
  /// weak_gaps[pair][field]: sup over the union grid of |(a - b, v_field)|.
  std::vector<std::vector<double>> weak_gaps;
  /// sup over shared output times of |V_a(t) - V_b(t)|.
  std::vector<double> ledger_gaps;
  /// max over the sampled interior times of |a(t) - b(t)|.
  std::vector<double> pointwise_gaps;
  /// L2-in-time (sampled) gap of P_m B(u, y_m) in the V*_{3/2} norm, u the
  /// finest-level run.
  std::vector<double> nonlinear_gaps;
  std::vector<double> sample_times;
  std::vector<double> run_seconds;
};

class RefinementError : public std::runtime_error {
 public:
  RefinementError(const std::string& what, std::size_t level)
      : std::runtime_error(what), level_(level) {}
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

inline constexpr std::size_t kPointwiseSamples = 32;

/// Runs simulate_nse at every level from project(initial, level), level runs
/// in parallel, and reduces the gaps in level order. Levels must be
/// nondecreasing. With no test fields, w_1 and one seeded random field are used.
RefinementReport refinement_study(const Scenario& scenario,
                                  std::span<const std::size_t> levels,
                                  const SolverConfig& cfg, const TriadTensor& tensor,
                                  std::uint64_t sample_seed = 0,
                                  std::vector<SpectralField> test_fields = {},
                                  std::vector<Trajectory>* runs = nullptr);

std::string summarize(const RefinementReport& report);

}  // namespace nsledger
