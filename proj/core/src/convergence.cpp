#include "nsledger/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "nsledger/energy_ledger.hpp"
#include "nsledger/trilinear_form.hpp"

namespace nsledger {

namespace {

void require_comparable(const Trajectory& a, const Trajectory& b) {
  if (!same_basis(*a.basis, *b.basis)) {
    throw std::invalid_argument("trajectories live on different bases");
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(a.end()));
  if (std::abs(a.start() - b.start()) > slack || std::abs(a.end() - b.end()) > slack) {
    throw std::invalid_argument("trajectories cover different intervals");
  }
}

std::vector<double> union_grid(const Trajectory& a, const Trajectory& b) {
  std::vector<double> grid;
  grid.reserve(a.size() + b.size());
  std::merge(a.times.begin(), a.times.end(), b.times.begin(), b.times.end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const double lo = std::max(a.start(), b.start());
  const double hi = std::min(a.end(), b.end());
  std::erase_if(grid, [&](double t) { return t < lo || t > hi; });
  return grid;
}

double h_distance_at(const Trajectory& a, const Trajectory& b, double t,
                     std::vector<double>& ya, std::vector<double>& yb) {
  a.state_at(t, ya);
  b.state_at(t, yb);
  double sum = 0.0;
  for (std::size_t j = 0; j < ya.size(); ++j) sum += (ya[j] - yb[j]) * (ya[j] - yb[j]);
  return std::sqrt(sum);
}

double ledger_value(const Trajectory& traj, std::size_t i) {
  double sum = 0.0;
  for (double x : traj.states[i]) sum += x * x;
  return 0.5 * sum + traj.visc_accum[i] - traj.work_accum[i];
}

}  // namespace

double l2H_distance(const Trajectory& a, const Trajectory& b) {
  require_comparable(a, b);
  const std::size_t width = std::max(a.m, b.m);
  std::vector<double> ya(width), yb(width);
  const auto grid = union_grid(a, b);
  double integral = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = h_distance_at(a, b, grid[i], ya, yb);
    const double current = d * d;
    if (i > 0) integral += 0.5 * (grid[i] - grid[i - 1]) * (previous + current);
    previous = current;
  }
  return std::sqrt(integral);
}

std::vector<double> weak_trace(const Trajectory& traj, const SpectralField& v) {
  if (!v.basis() || !same_basis(*traj.basis, *v.basis())) {
    throw std::invalid_argument("weak_trace: test field basis does not match trajectory");
  }
  std::vector<double> trace;
  trace.reserve(traj.size());
  for (const auto& row : traj.states) {
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * v[j];
    trace.push_back(sum);
  }
  return trace;
}

RefinementReport refinement_study(const Scenario& scenario,
                                  std::span<const std::size_t> levels,
                                  const SolverConfig& cfg, const TriadTensor& tensor,
                                  std::uint64_t sample_seed,
                                  std::vector<SpectralField> test_fields,
                                  std::vector<Trajectory>* runs) {
  if (levels.empty()) throw std::invalid_argument("refinement_study: no levels");
  const BasisPtr& basis = tensor.basis();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == 0 || levels[i] > basis->size()) {
      throw std::invalid_argument("refinement_study: level " + std::to_string(levels[i]) +
                                  " outside [1, " + std::to_string(basis->size()) + "]");
    }
    if (i > 0 && levels[i] < levels[i - 1]) {
      throw std::invalid_argument("refinement_study: levels must be nondecreasing");
    }
  }
  if (test_fields.empty()) {
    test_fields.push_back(single_mode_field(basis, 0, 1.0));
    test_fields.push_back(random_field(basis, sample_seed + 1));
  }

  RefinementReport report;
  report.levels.assign(levels.begin(), levels.end());

  std::vector<std::future<std::pair<Trajectory, double>>> pending;
  for (std::size_t level : levels) {
    pending.push_back(std::async(std::launch::async, [&, level] {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        Trajectory traj = simulate_nse(project(scenario.initial, level), scenario.forcing,
                                       level, scenario.interval, cfg, tensor);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        return std::make_pair(std::move(traj), dt.count());
      } catch (const std::exception& e) {
        throw RefinementError("level " + std::to_string(level) + ": " + e.what(), level);
      }
    }));
  }
  std::vector<Trajectory> trajs;
  for (auto& p : pending) {
    auto [traj, seconds] = p.get();
    trajs.push_back(std::move(traj));
    report.run_seconds.push_back(seconds);
  }

  std::mt19937_64 rng(sample_seed);
  std::uniform_real_distribution<double> uniform(scenario.interval.tau, scenario.interval.T);
  for (std::size_t i = 0; i < kPointwiseSamples; ++i) report.sample_times.push_back(uniform(rng));
  std::sort(report.sample_times.begin(), report.sample_times.end());

  const Trajectory& finest = trajs.back();
  const std::size_t width = basis->size();
  std::vector<double> ya(width), yb(width);

  for (std::size_t p = 0; p + 1 < trajs.size(); ++p) {
    const Trajectory& a = trajs[p];
    const Trajectory& b = trajs[p + 1];
    report.l2H_gaps.push_back(l2H_distance(a, b));

    const auto grid = union_grid(a, b);
    std::vector<double> weak(test_fields.size(), 0.0);
    for (double t : grid) {
      a.state_at(t, ya);
      b.state_at(t, yb);
      for (std::size_t f = 0; f < test_fields.size(); ++f) {
        double sum = 0.0;
        for (std::size_t j = 0; j < width; ++j) sum += (ya[j] - yb[j]) * test_fields[f][j];
        weak[f] = std::max(weak[f], std::abs(sum));
      }
    }
    report.weak_gaps.push_back(std::move(weak));

    double ledger_gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto it = std::lower_bound(b.times.begin(), b.times.end(), a.times[i]);
      if (it == b.times.end() || *it != a.times[i]) continue;
      const auto k = static_cast<std::size_t>(it - b.times.begin());
      ledger_gap = std::max(ledger_gap, std::abs(ledger_value(a, i) - ledger_value(b, k)));
    }
    report.ledger_gaps.push_back(ledger_gap);

    double pointwise = 0.0;
    double nonlinear_sq = 0.0;
    for (double t : report.sample_times) {
      pointwise = std::max(pointwise, h_distance_at(a, b, t, ya, yb));
      const SpectralField u = finest.field_at(t);
      const SpectralField fa = B_apply(u, a.field_at(t), a.m, tensor);
      const SpectralField fb = B_apply(u, b.field_at(t), b.m, tensor);
      const double gap = norm(fa - fb, Space::dual_sobolev(1.5));
      nonlinear_sq += gap * gap;
    }
    report.pointwise_gaps.push_back(pointwise);
    report.nonlinear_gaps.push_back(std::sqrt(nonlinear_sq / kPointwiseSamples *
                                              scenario.interval.length()));
  }
  if (runs) *runs = std::move(trajs);
  return report;
}

std::string summarize(const RefinementReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << std::scientific;
  out << "refinement study over levels";
  for (std::size_t m : report.levels) out << ' ' << m;
  out << '\n';
  for (std::size_t p = 0; p < report.l2H_gaps.size(); ++p) {
    out << "  " << report.levels[p] << " -> " << report.levels[p + 1]
        << ": l2H " << report.l2H_gaps[p] << ", pointwise " << report.pointwise_gaps[p]
        << ", ledger " << report.ledger_gaps[p] << ", nonlinear(V*_3/2) "
        << report.nonlinear_gaps[p] << ", weak";
    for (double w : report.weak_gaps[p]) out << ' ' << w;
    out << '\n';
  }
  bool decreasing = true;
  for (std::size_t p = 1; p < report.l2H_gaps.size(); ++p) {
    decreasing = decreasing && report.l2H_gaps[p] < report.l2H_gaps[p - 1];
  }
  out << "  l2H gaps strictly decreasing: " << (decreasing ? "yes" : "no") << '\n';
  return out.str();
}

}  // namespace nsledger
