#include "nsledger/galerkin_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace nsledger {

Forcing::Forcing(ModalFunction dual_part, ModalFunction h_part)
    : dual_(std::move(dual_part)), h_(std::move(h_part)) {}

Forcing Forcing::modal_sinusoid(std::size_t dual_mode, double dual_amplitude,
                                std::size_t h_mode, double h_amplitude, double omega) {
  auto make = [omega](std::size_t mode, double amplitude) -> ModalFunction {
    if (amplitude == 0.0) return {};
    return [=](double t, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      if (mode < out.size()) out[mode] = amplitude * std::sin(omega * t);
    };
  };
  return Forcing(make(dual_mode, dual_amplitude), make(h_mode, h_amplitude));
}

void Forcing::evaluate_dual(double t, std::span<double> out) const {
  if (dual_) {
    dual_(t, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

void Forcing::evaluate_h(double t, std::span<double> out) const {
  if (h_) {
    h_(t, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

void Forcing::evaluate(double t, std::span<double> out) const {
  evaluate_dual(t, out);
  if (!h_) return;
  std::vector<double> tmp(out.size());
  h_(t, tmp);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += tmp[j];
}

ModalFunction sampled_modal_function(std::vector<double> times,
                                     std::vector<std::vector<double>> rows) {
  if (times.empty() || times.size() != rows.size()) {
    throw std::invalid_argument("sampled forcing: times and rows must be nonempty and aligned");
  }
  auto samples = std::make_shared<Trajectory>();
  samples->m = rows.front().size();
  samples->basis = build_basis(std::max<std::size_t>(samples->m, 1));
  samples->times = std::move(times);
  samples->states = std::move(rows);
  samples->visc_accum.assign(samples->times.size(), 0.0);
  samples->work_accum.assign(samples->times.size(), 0.0);
  samples->validate();
  samples->estimate_rates();
  return [samples](double t, std::span<double> out) {
    const double tc = std::clamp(t, samples->start(), samples->end());
    samples->state_at(tc, out);
  };
}

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("solver: nu must be positive");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("solver: rel_tol must lie in (0, 1)");
  }
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) {
    throw std::invalid_argument("solver: abs_tol must lie in (0, 1)");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("solver: max_step must be positive");
}

double ledger_tol(const SolverConfig& cfg, double energy_scale) {
  return 1e3 * (cfg.rel_tol * std::max(energy_scale, 1.0) + cfg.abs_tol);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr int kStages = 7;
constexpr std::array<double, kStages> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[kStages][kStages] = {
    {0, 0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0}};
constexpr std::array<double, kStages> kE = {
    35.0 / 384 - 5179.0 / 57600,   0.0,
    500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
    -1.0 / 40};

class GalerkinSystem {
 public:
  GalerkinSystem(const DriftSpec& drift, const Forcing& forcing, std::size_t m,
                 const SolverConfig& cfg, const TriadTensor& tensor)
      : forcing_(forcing), m_(m), nu_(cfg.nu) {
    const BasisSet& basis = *tensor.basis();
    if (const auto* stored = std::get_if<StoredDrift>(&drift)) {
      drift_ = stored->trajectory.get();
      if (!drift_) throw std::invalid_argument("stored drift: null trajectory");
      if (!same_basis(*drift_->basis, basis)) {
        throw std::invalid_argument("stored drift: basis does not match tensor");
      }
      drift_level_ = drift_->m;
      drift_buf_.assign(drift_level_, 0.0);
    } else {
      drift_level_ = m;
    }
    entries_ = tensor.restricted(drift_level_, m);
    decay_.assign(m + 2, 0.0);
    for (std::size_t j = 0; j < m; ++j) decay_[j] = nu_ * basis.eigenvalue(j);
    eigen_.assign(basis.eigenvalues().begin(),
                  basis.eigenvalues().begin() + static_cast<std::ptrdiff_t>(m));
    force_.assign(m, 0.0);
    advect_.assign(m, 0.0);
  }

  std::size_t dimension() const { return m_ + 2; }
  std::span<const double> decay() const { return decay_; }

  /// Everything except the diagonal -nu lambda_j a_j term.
  void nonlinear(double t, std::span<const double> x, std::span<double> out) {
    const auto a = x.subspan(0, m_);
    forcing_.evaluate(t, force_);
    std::fill(advect_.begin(), advect_.end(), 0.0);
    if (drift_) {
      drift_->state_at(t, drift_buf_);
      accumulate_advection(entries_, drift_buf_, a, advect_);
    } else {
      accumulate_advection(entries_, a, a, advect_);
    }
    double dissipation = 0.0;
    double work = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      out[j] = force_[j] - advect_[j];
      dissipation += eigen_[j] * a[j] * a[j];
      work += force_[j] * a[j];
    }
    out[m_] = nu_ * dissipation;
    out[m_ + 1] = work;
  }

 private:
  const Forcing& forcing_;
  std::size_t m_;
  double nu_;
  const Trajectory* drift_ = nullptr;
  std::size_t drift_level_ = 0;
  std::vector<TriadEntry> entries_;
  std::vector<double> decay_;
  std::vector<double> eigen_;
  std::vector<double> force_;
  std::vector<double> advect_;
  std::vector<double> drift_buf_;
};

void record(Trajectory& traj, double t, std::span<const double> x,
            std::span<const double> nonlinear, std::span<const double> decay,
            std::size_t m) {
  traj.times.push_back(t);
  traj.states.emplace_back(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<double> rate(m);
  for (std::size_t j = 0; j < m; ++j) rate[j] = nonlinear[j] - decay[j] * x[j];
  traj.rates.push_back(std::move(rate));
  traj.visc_accum.push_back(x[m]);
  traj.work_accum.push_back(x[m + 1]);
}

}  // namespace

Trajectory integrate_galerkin(const DriftSpec& drift, const Forcing& forcing,
                              const SpectralField& initial, std::size_t m,
                              Interval interval, const SolverConfig& cfg,
                              const TriadTensor& tensor) {
  cfg.validate();
  if (!(interval.tau < interval.T)) {
    throw std::invalid_argument("integrate: interval requires tau < T");
  }
  if (!initial.basis() || !same_basis(*initial.basis(), *tensor.basis())) {
    throw std::invalid_argument("integrate: initial data basis does not match tensor");
  }
  if (m == 0 || m > tensor.basis()->size()) {
    throw std::invalid_argument("integrate: level m must lie in [1, basis size]");
  }
  if (const auto* stored = std::get_if<StoredDrift>(&drift)) {
    const Trajectory* u = stored->trajectory.get();
    if (!u || u->size() == 0) throw std::invalid_argument("stored drift: empty trajectory");
    const double slack = 1e-12 * std::max(1.0, std::abs(interval.T));
    if (u->start() > interval.tau + slack || u->end() < interval.T - slack) {
      throw std::invalid_argument("stored drift covers [" + std::to_string(u->start()) +
                                  ", " + std::to_string(u->end()) +
                                  "], which does not contain the solve interval");
    }
    if (u->rates.empty()) {
      throw std::invalid_argument("stored drift: trajectory has no rates for interpolation");
    }
  }

  GalerkinSystem sys(drift, forcing, m, cfg, tensor);
  const std::size_t n = sys.dimension();
  const auto decay = sys.decay();

  Trajectory traj;
  traj.basis = tensor.basis();
  traj.m = m;
  traj.nu = cfg.nu;
  traj.rel_tol = cfg.rel_tol;
  traj.abs_tol = cfg.abs_tol;

  std::vector<double> x(n, 0.0);
  std::copy_n(initial.coeffs().begin(), m, x.begin());

  std::array<std::vector<double>, kStages> k;
  for (auto& stage : k) stage.assign(n, 0.0);
  std::vector<double> stage_x(n), x_new(n), err(n);

  double t = interval.tau;
  sys.nonlinear(t, x, k[0]);
  record(traj, t, x, k[0], decay, m);

  const double span = interval.length();
  const std::size_t outputs = std::max<std::size_t>(cfg.dense_output_points, 1);
  std::size_t next_output = 1;
  auto output_time = [&](std::size_t i) {
    return i == outputs ? interval.T
                        : interval.tau + span * static_cast<double>(i) /
                                             static_cast<double>(outputs);
  };

  double h = std::min(cfg.max_step, 1e-2 * span);
  const double min_step = 1e-13 * std::max(1.0, std::abs(interval.T));

  while (t < interval.T) {
    const double target = output_time(next_output);
    double step = std::min(h, cfg.max_step);
    bool lands = false;
    if (t + step >= target - 1e-3 * step) {
      step = target - t;
      lands = true;
    }

    for (int i = 1; i < kStages; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double mu = decay[j];
        if (mu == 0.0) {
          double acc = x[j];
          for (int l = 0; l < i; ++l) acc += step * kA[i][l] * k[l][j];
          stage_x[j] = acc;
          continue;
        }
        double acc = std::exp(-mu * kC[i] * step) * x[j];
        for (int l = 0; l < i; ++l) {
          if (kA[i][l] == 0.0) continue;
          acc += step * kA[i][l] * std::exp(-mu * (kC[i] - kC[l]) * step) * k[l][j];
        }
        stage_x[j] = acc;
      }
      if (i == kStages - 1) x_new = stage_x;
      sys.nonlinear(t + kC[i] * step, stage_x, k[i]);
    }

    double err_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double mu = decay[j];
      double e = 0.0;
      for (int l = 0; l < kStages; ++l) {
        if (kE[l] == 0.0) continue;
        const double factor = mu == 0.0 ? 1.0 : std::exp(-mu * (1.0 - kC[l]) * step);
        e += kE[l] * factor * k[l][j];
      }
      e *= step;
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[j]), std::abs(x_new[j]));
      err_sum += (e / scale) * (e / scale);
    }
    const double err_norm = std::sqrt(err_sum / static_cast<double>(n));

    if (err_norm <= 1.0) {
      t = lands ? target : t + step;
      x.swap(x_new);
      std::swap(k[0], k[kStages - 1]);
      record(traj, t, x, k[0], decay, m);
      if (lands) ++next_output;
      const double grow =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = lands ? std::max(h, step * grow) : step * grow;
    } else {
      const double shrink = std::isfinite(err_norm)
                                ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0)
                                : 0.2;
      h = step * shrink;
      if (h < min_step) {
        throw SolverError("integrator step size underflow at t = " + std::to_string(t), t);
      }
    }
  }
  return traj;
}

Trajectory simulate_nse(const SpectralField& y_tau, const Forcing& f, std::size_t m,
                        Interval interval, const SolverConfig& cfg,
                        const TriadTensor& tensor) {
  return integrate_galerkin(SelfDrift{}, f, y_tau, m, interval, cfg, tensor);
}

Trajectory solve_problem_c(const DriftSpec& drift, const Forcing& g,
                           const SpectralField& z_tau, std::size_t m, Interval interval,
                           const SolverConfig& cfg, const TriadTensor& tensor) {
  if (!std::holds_alternative<StoredDrift>(drift)) {
    throw std::invalid_argument("solve_problem_c: requires a stored drift trajectory");
  }
  return integrate_galerkin(drift, g, z_tau, m, interval, cfg, tensor);
}

void fill_self_drift_rates(Trajectory& traj, const Forcing& f, const TriadTensor& tensor) {
  traj.validate();
  SolverConfig cfg;
  cfg.nu = traj.nu;
  GalerkinSystem sys(SelfDrift{}, f, traj.m, cfg, tensor);
  std::vector<double> x(sys.dimension(), 0.0), nl(sys.dimension());
  traj.rates.assign(traj.size(), std::vector<double>(traj.m));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::copy(traj.states[i].begin(), traj.states[i].end(), x.begin());
    sys.nonlinear(traj.times[i], x, nl);
    for (std::size_t j = 0; j < traj.m; ++j) {
      traj.rates[i][j] = nl[j] - sys.decay()[j] * x[j];
    }
  }
}

}  // namespace nsledger
