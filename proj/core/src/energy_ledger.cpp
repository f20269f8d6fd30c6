#include "nsledger/energy_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsledger {

void EnergyLedger::validate() const {
  const std::size_t n = times.size();
  if (kinetic.size() != n || visc.size() != n || work.size() != n || values.size() != n) {
    throw std::invalid_argument("ledger: column lengths disagree");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("ledger: times not strictly increasing at row " +
                                  std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("ledger: non-finite entry at row " + std::to_string(i));
    }
    if (i > 0 && visc[i] < visc[i - 1] - 1e-12 * std::max(1.0, std::abs(visc[i - 1]))) {
      throw std::invalid_argument("ledger: dissipation decreases at row " + std::to_string(i));
    }
  }
}

EnergyLedger make_ledger(std::vector<double> times, std::vector<double> kinetic,
                         std::vector<double> visc, std::vector<double> work) {
  EnergyLedger ledger;
  ledger.times = std::move(times);
  ledger.kinetic = std::move(kinetic);
  ledger.visc = std::move(visc);
  ledger.work = std::move(work);
  ledger.values.resize(ledger.kinetic.size());
  if (ledger.visc.size() != ledger.kinetic.size() || ledger.work.size() != ledger.kinetic.size()) {
    throw std::invalid_argument("ledger: column lengths disagree");
  }
  for (std::size_t i = 0; i < ledger.values.size(); ++i) {
    ledger.values[i] = ledger.kinetic[i] + ledger.visc[i] - ledger.work[i];
  }
  ledger.validate();
  return ledger;
}

EnergyLedger compute_ledger(const Trajectory& traj, double tau) {
  traj.validate();
  if (traj.start() != tau) {
    throw std::invalid_argument("compute_ledger: tau does not match trajectory start");
  }
  std::vector<double> kinetic(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    double sum = 0.0;
    for (double a : traj.states[i]) sum += a * a;
    kinetic[i] = 0.5 * sum;
  }
  return make_ledger(traj.times, std::move(kinetic), traj.visc_accum, traj.work_accum);
}

std::string to_string(Status status) { return status == Status::pass ? "PASS" : "FAIL"; }

namespace {

Verdict finish(std::string check, double worst, Witness witness, double tol) {
  Verdict v;
  v.check = std::move(check);
  v.worst_violation = worst;
  v.witness = witness;
  v.tolerance = tol;
  v.status = worst <= tol ? Status::pass : Status::fail;
  return v;
}

void require_nonempty(const EnergyLedger& ledger) {
  if (ledger.size() == 0) throw std::invalid_argument("ledger is empty");
}

}  // namespace

Verdict check_energy_equality(const EnergyLedger& ledger, double tol) {
  require_nonempty(ledger);
  const double v0 = ledger.values.front();
  double worst = 0.0;
  Witness witness{ledger.times.front(), ledger.times.front()};
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const double dev = std::abs(ledger.values[i] - v0);
    if (dev > worst) {
      worst = dev;
      witness = {ledger.times.front(), ledger.times[i]};
    }
  }
  return finish("energy_equality", worst, witness, tol);
}

Verdict check_energy_inequality(const EnergyLedger& ledger, double tol) {
  require_nonempty(ledger);
  if (ledger.size() == 1) {
    return finish("energy_inequality", 0.0, {ledger.times[0], ledger.times[0]}, tol);
  }
  double worst = -std::numeric_limits<double>::infinity();
  Witness witness{};
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < ledger.size(); ++i) {
    const double rise = ledger.values[i] - ledger.values[argmin];
    if (rise > worst) {
      worst = rise;
      witness = {ledger.times[argmin], ledger.times[i]};
    }
    if (ledger.values[i] < ledger.values[argmin]) argmin = i;
  }
  return finish("energy_inequality", worst, witness, tol);
}

double total_variation(std::span<const double> values) {
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) tv += std::abs(values[i] - values[i - 1]);
  return tv;
}

VariationEstimate total_variation(const Trajectory& traj, std::size_t refinement) {
  if (traj.size() == 0) throw std::invalid_argument("total_variation: empty trajectory");
  if (refinement == 0) throw std::invalid_argument("total_variation: refinement must be >= 1");
  auto squared = [](std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
  };
  std::vector<double> coarse;
  coarse.reserve(traj.size());
  for (const auto& row : traj.states) coarse.push_back(squared(row));

  std::vector<double> fine;
  std::vector<double> buf(traj.m);
  fine.push_back(coarse.front());
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    for (std::size_t r = 1; r < refinement; ++r) {
      const double t = traj.times[i] + (traj.times[i + 1] - traj.times[i]) *
                                           static_cast<double>(r) /
                                           static_cast<double>(refinement);
      traj.state_at(t, buf);
      fine.push_back(squared(buf));
    }
    fine.push_back(coarse[i + 1]);
  }
  return {total_variation(coarse), total_variation(fine), refinement};
}

Verdict check_bounded_variation(const EnergyLedger& ledger, double tol) {
  require_nonempty(ledger);
  std::vector<double> norm2(ledger.size());
  for (std::size_t i = 0; i < ledger.size(); ++i) norm2[i] = 2.0 * ledger.kinetic[i];
  const double tv = total_variation(norm2);
  const double bound = 2.0 * (ledger.values.front() - ledger.values.back()) +
                       2.0 * (ledger.visc.back() - ledger.visc.front()) +
                       2.0 * total_variation(ledger.work);
  return finish("bounded_variation", tv - bound,
                {ledger.times.front(), ledger.times.back()}, tol);
}

std::vector<double> right_continuity_modulus(const Trajectory& traj, double s,
                                             std::span<const double> deltas) {
  if (traj.size() == 0) throw std::invalid_argument("right_continuity: empty trajectory");
  if (s < traj.start() || s >= traj.end()) {
    throw std::invalid_argument("right_continuity: s outside [start, end)");
  }
  double max_delta = 0.0;
  for (double d : deltas) {
    if (!(d > 0.0)) throw std::invalid_argument("right_continuity: deltas must be positive");
    max_delta = std::max(max_delta, d);
  }
  if (s + max_delta > traj.end() * (1 + 1e-14) + 1e-14) {
    throw std::invalid_argument("right_continuity: s + max(delta) exceeds trajectory end");
  }

  std::vector<double> ys(traj.m), yt(traj.m);
  traj.state_at(s, ys);
  auto distance = [&](std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t j = 0; j < traj.m; ++j) sum += (y[j] - ys[j]) * (y[j] - ys[j]);
    return std::sqrt(sum);
  };

  std::vector<double> moduli;
  moduli.reserve(deltas.size());
  for (double delta : deltas) {
    const double end = std::min(s + delta, traj.end());
    traj.state_at(end, yt);
    double worst = distance(yt);
    auto first = std::upper_bound(traj.times.begin(), traj.times.end(), s);
    for (auto it = first; it != traj.times.end() && *it <= end; ++it) {
      const auto i = static_cast<std::size_t>(it - traj.times.begin());
      worst = std::max(worst, distance(traj.states[i]));
    }
    moduli.push_back(worst);
  }
  return moduli;
}

Verdict check_right_continuity(const Trajectory& traj, std::span<const double> s_points,
                               std::span<const double> deltas, double tol,
                               double lipschitz_spread) {
  if (deltas.size() < 2) {
    throw std::invalid_argument("right_continuity: need at least two deltas");
  }
  double worst = -std::numeric_limits<double>::infinity();
  Witness witness{};
  for (double s : s_points) {
    const auto moduli = right_continuity_modulus(traj, s, deltas);
    for (std::size_t k = 1; k < moduli.size(); ++k) {
      const double growth = moduli[k] - moduli[k - 1];
      if (growth > worst) {
        worst = growth;
        witness = {s, s + deltas[k]};
      }
    }
    double low = std::numeric_limits<double>::infinity();
    double high = 0.0;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
      low = std::min(low, moduli[k] / deltas[k]);
      high = std::max(high, moduli[k] / deltas[k]);
    }
    const double delta_min = *std::min_element(deltas.begin(), deltas.end());
    const double shrink = (high - lipschitz_spread * low) * delta_min;
    if (shrink > worst) {
      worst = shrink;
      witness = {s, s + deltas.back()};
    }
  }
  return finish("right_continuity", worst, witness, tol);
}

PsiDiagnostic psi_sequence(const SpectralField& z, const SpectralField& u,
                           std::span<const std::size_t> levels, double C, double nu) {
  require_same_basis(z, u);
  PsiDiagnostic diag;
  diag.C_used = C;
  const auto& lambda = z.basis()->eigenvalues();
  const double uV = norm(u, Space::V());
  double total = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) total += lambda[j] * z[j] * z[j];
  diag.limit = nu * total;

  std::size_t previous = 0;
  for (std::size_t m : levels) {
    if (m > z.size()) throw std::invalid_argument("psi_sequence: level exceeds basis size");
    if (!diag.m_levels.empty() && m <= previous) {
      throw std::invalid_argument("psi_sequence: levels must increase");
    }
    previous = m;
    double head = 0.0;
    for (std::size_t j = 0; j < m; ++j) head += lambda[j] * z[j] * z[j];
    double tail = 0.0;
    for (std::size_t j = m; j < z.size(); ++j) tail += lambda[j] * z[j] * z[j];
    const double pz = std::sqrt(head);
    const double rest = std::sqrt(tail);
    diag.m_levels.push_back(m);
    diag.psi_values.push_back(pz * (nu * pz - C * uV * rest));
  }
  for (std::size_t i = 1; i < diag.psi_values.size(); ++i) {
    if (diag.psi_values[i - 1] > diag.psi_values[i]) ++diag.monotonicity_violations;
  }
  return diag;
}

std::vector<double> psi_time_integrals(const Trajectory& z, const Trajectory& u,
                                       std::span<const std::size_t> levels, double C,
                                       double nu) {
  if (!same_basis(*z.basis, *u.basis)) {
    throw std::invalid_argument("psi_time_integrals: basis mismatch");
  }
  std::vector<double> integrals(levels.size() + 1, 0.0);
  std::vector<double> previous;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const SpectralField zi = z.field(i);
    const SpectralField ui = u.field_at(std::clamp(z.times[i], u.start(), u.end()));
    const PsiDiagnostic d = psi_sequence(zi, ui, levels, C, nu);
    std::vector<double> current = d.psi_values;
    current.push_back(d.limit);
    if (i > 0) {
      const double h = z.times[i] - z.times[i - 1];
      for (std::size_t k = 0; k < current.size(); ++k) {
        integrals[k] += 0.5 * h * (previous[k] + current[k]);
      }
    }
    previous = std::move(current);
  }
  return integrals;
}

}  // namespace nsledger
