#include "nsledger/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsledger {

namespace {

struct HermiteWeights {
  double h00, h10, h01, h11;     // value weights
  double d00, d10, d01, d11;     // derivative weights
};

HermiteWeights hermite(double t0, double t1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  HermiteWeights w;
  w.h00 = 2 * s3 - 3 * s2 + 1;
  w.h10 = (s3 - 2 * s2 + s) * h;
  w.h01 = -2 * s3 + 3 * s2;
  w.h11 = (s3 - s2) * h;
  w.d00 = (6 * s2 - 6 * s) / h;
  w.d10 = 3 * s2 - 4 * s + 1;
  w.d01 = (-6 * s2 + 6 * s) / h;
  w.d11 = 3 * s2 - 2 * s;
  return w;
}

}  // namespace

void Trajectory::validate() const {
  if (!basis) throw std::invalid_argument("trajectory: missing basis");
  if (m > basis->size()) throw std::invalid_argument("trajectory: m exceeds basis size");
  const std::size_t n = times.size();
  if (n == 0) throw std::invalid_argument("trajectory: empty time grid");
  if (states.size() != n || visc_accum.size() != n || work_accum.size() != n) {
    throw std::invalid_argument("trajectory: column lengths disagree with time grid");
  }
  if (!rates.empty() && rates.size() != n) {
    throw std::invalid_argument("trajectory: rate column length disagrees with time grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("trajectory: time grid not strictly increasing at row " +
                                  std::to_string(i));
    }
    if (states[i].size() != m || (!rates.empty() && rates[i].size() != m)) {
      throw std::invalid_argument("trajectory: row " + std::to_string(i) +
                                  " has the wrong number of coefficients");
    }
  }
}

std::size_t Trajectory::locate(double t) const {
  if (times.size() < 2) return 0;
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(i, times.size() - 2);
}

SpectralField Trajectory::field(std::size_t i) const {
  SpectralField out(basis);
  std::copy(states.at(i).begin(), states.at(i).end(), out.coeffs().begin());
  return out;
}

SpectralField Trajectory::field_at(double t) const {
  SpectralField out(basis);
  state_at(t, out.coeffs().subspan(0, m));
  return out;
}

void Trajectory::state_at(double t, std::span<double> out) const {
  const std::size_t n = std::min(out.size(), m);
  std::fill(out.begin(), out.end(), 0.0);
  if (times.size() == 1) {
    std::copy_n(states[0].begin(), n, out.begin());
    return;
  }
  const std::size_t i = locate(t);
  const auto& y0 = states[i];
  const auto& y1 = states[i + 1];
  if (t == times[i]) {
    std::copy_n(y0.begin(), n, out.begin());
    return;
  }
  if (t == times[i + 1]) {
    std::copy_n(y1.begin(), n, out.begin());
    return;
  }
  if (rates.empty()) {
    throw std::logic_error("trajectory: interpolation requires rates");
  }
  const auto& r0 = rates[i];
  const auto& r1 = rates[i + 1];
  const HermiteWeights w = hermite(times[i], times[i + 1], t);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = w.h00 * y0[j] + w.h10 * r0[j] + w.h01 * y1[j] + w.h11 * r1[j];
  }
}

void Trajectory::rate_at(double t, std::span<double> out) const {
  const std::size_t n = std::min(out.size(), m);
  std::fill(out.begin(), out.end(), 0.0);
  if (rates.empty()) throw std::logic_error("trajectory: rates unavailable");
  if (times.size() == 1) {
    std::copy_n(rates[0].begin(), n, out.begin());
    return;
  }
  const std::size_t i = locate(t);
  if (t == times[i]) {
    std::copy_n(rates[i].begin(), n, out.begin());
    return;
  }
  if (t == times[i + 1]) {
    std::copy_n(rates[i + 1].begin(), n, out.begin());
    return;
  }
  const HermiteWeights w = hermite(times[i], times[i + 1], t);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = w.d00 * states[i][j] + w.d10 * rates[i][j] + w.d01 * states[i + 1][j] +
             w.d11 * rates[i + 1][j];
  }
}

namespace {

double linear_at(const std::vector<double>& times, const std::vector<double>& values,
                 std::size_t i, double t) {
  if (times.size() == 1) return values[0];
  if (t == times[i]) return values[i];
  if (t == times[i + 1]) return values[i + 1];
  const double s = (t - times[i]) / (times[i + 1] - times[i]);
  return values[i] + s * (values[i + 1] - values[i]);
}

}  // namespace

double Trajectory::visc_at(double t) const {
  const std::size_t i = locate(t);
  if (times.size() == 1 || t == times[i] || t == times[i + 1] || !(nu > 0.0) || !basis) {
    return linear_at(times, visc_accum, i, t);
  }
  // The accumulator's slope is nu |y|_V^2 at every node.
  const auto lambda = basis->eigenvalues();
  auto slope = [&](std::size_t row) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += lambda[j] * states[row][j] * states[row][j];
    return nu * sum;
  };
  const HermiteWeights w = hermite(times[i], times[i + 1], t);
  return w.h00 * visc_accum[i] + w.h10 * slope(i) + w.h01 * visc_accum[i + 1] +
         w.h11 * slope(i + 1);
}

double Trajectory::work_at(double t) const {
  return linear_at(times, work_accum, locate(t), t);
}

void Trajectory::estimate_rates() {
  const std::size_t n = times.size();
  rates.assign(n, std::vector<double>(m, 0.0));
  if (n < 2) return;
  if (n == 2) {
    const double h = times[1] - times[0];
    for (std::size_t j = 0; j < m; ++j) {
      rates[0][j] = rates[1][j] = (states[1][j] - states[0][j]) / h;
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Three-point stencil on the (possibly nonuniform) grid.
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    const double x0 = times[c - 1], x1 = times[c], x2 = times[c + 1];
    const double x = times[i];
    const double w0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double w1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double w2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    for (std::size_t j = 0; j < m; ++j) {
      rates[i][j] = w0 * states[c - 1][j] + w1 * states[c][j] + w2 * states[c + 1][j];
    }
  }
}

Trajectory restrict(const Trajectory& traj, double t1, double t2) {
  if (traj.size() == 0 || !(t1 < t2) || t1 < traj.start() || t2 > traj.end()) {
    throw std::invalid_argument("restrict: interval [" + std::to_string(t1) + ", " +
                                std::to_string(t2) + "] outside [" +
                                std::to_string(traj.start()) + ", " +
                                std::to_string(traj.end()) + "]");
  }
  Trajectory out;
  out.basis = traj.basis;
  out.m = traj.m;
  out.nu = traj.nu;
  out.rel_tol = traj.rel_tol;
  out.abs_tol = traj.abs_tol;
  const bool with_rates = !traj.rates.empty();

  auto push = [&](double t) {
    out.times.push_back(t);
    std::vector<double> y(traj.m);
    traj.state_at(t, y);
    out.states.push_back(std::move(y));
    if (with_rates) {
      std::vector<double> r(traj.m);
      traj.rate_at(t, r);
      out.rates.push_back(std::move(r));
    }
    out.visc_accum.push_back(traj.visc_at(t));
    out.work_accum.push_back(traj.work_at(t));
  };

  push(t1);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (t > t1 && t < t2) {
      out.times.push_back(t);
      out.states.push_back(traj.states[i]);
      if (with_rates) out.rates.push_back(traj.rates[i]);
      out.visc_accum.push_back(traj.visc_accum[i]);
      out.work_accum.push_back(traj.work_accum[i]);
    }
  }
  push(t2);

  const double v0 = out.visc_accum.front();
  const double w0 = out.work_accum.front();
  for (double& v : out.visc_accum) v -= v0;
  for (double& w : out.work_accum) w -= w0;
  return out;
}

}  // namespace nsledger
