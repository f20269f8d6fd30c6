#include "nsledger/trilinear_form.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsledger {

namespace {

using Complex = std::complex<double>;

// Coefficient of exp(i s theta) in phi(theta).
Complex exponential_weight(Phase phase, int s) {
  if (phase == Phase::cosine) return {0.5, 0.0};
  return {0.0, -0.5 * s};
}

long long dot(const std::array<long long, 3>& x, const std::array<int, 3>& k) {
  return x[0] * k[0] + x[1] * k[1] + x[2] * k[2];
}

long long dot(const std::array<long long, 3>& x, const std::array<long long, 3>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

bool entry_less(const TriadEntry& x, const TriadEntry& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  return x.c < y.c;
}

}  // namespace

double triad_coefficient(const BasisSet& basis, std::size_t a, std::size_t b,
                         std::size_t c) {
  const Mode& ma = basis[a];
  const Mode& mb = basis[b];
  const Mode& mc = basis[c];

  // u_i d_i v_j w_j separates into (e_a . k_b)(e_b . e_c) times a triple
  // trigonometric integral.
  const long long advect = dot(ma.direction, mb.k.k);
  const long long align = dot(mb.direction, mc.direction);
  if (advect == 0 || align == 0) return 0.0;

  Complex sum{0.0, 0.0};
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      for (int sc : {1, -1}) {
        bool resonant = true;
        for (int i = 0; i < 3; ++i) {
          if (sa * ma.k.k[i] + sb * mb.k.k[i] + sc * mc.k.k[i] != 0) {
            resonant = false;
            break;
          }
        }
        if (!resonant) continue;
        // d/dx of exp(i sb k_b.x) contributes i sb k_b.
        sum += exponential_weight(ma.phase, sa) * exponential_weight(mb.phase, sb) *
               exponential_weight(mc.phase, sc) * Complex(0.0, sb);
      }
    }
  }
  if (sum.real() == 0.0) return 0.0;

  const double amp = BasisSet::amplitude();
  const double volume = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;
  const double geometric = static_cast<double>(advect) / ma.direction_norm *
                           static_cast<double>(align) /
                           (mb.direction_norm * mc.direction_norm);
  return amp * amp * amp * volume * geometric * sum.real();
}

TriadTensor::TriadTensor(BasisPtr basis, std::vector<TriadEntry> entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {
  if (!basis_) throw std::invalid_argument("TriadTensor: null basis");
  const std::size_t n = basis_->size();
  for (const TriadEntry& e : entries_) {
    if (e.a >= n || e.b >= n || e.c >= n) {
      throw std::invalid_argument("TriadTensor: entry index out of range");
    }
    if (e.b >= e.c) {
      throw std::invalid_argument("TriadTensor: entries must satisfy b < c");
    }
  }
  std::sort(entries_.begin(), entries_.end(), entry_less);
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (!entry_less(entries_[i - 1], entries_[i])) {
      throw std::invalid_argument("TriadTensor: duplicate triple (" +
                                  std::to_string(entries_[i].a) + "," +
                                  std::to_string(entries_[i].b) + "," +
                                  std::to_string(entries_[i].c) + ")");
    }
  }
}

double TriadTensor::at(std::size_t a, std::size_t b, std::size_t c) const {
  if (b == c) return 0.0;
  double sign = 1.0;
  if (b > c) {
    std::swap(b, c);
    sign = -1.0;
  }
  const TriadEntry key{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                       static_cast<std::uint32_t>(c), 0.0};
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key, entry_less);
  if (it == entries_.end() || it->a != key.a || it->b != key.b || it->c != key.c) {
    return 0.0;
  }
  return sign * it->value;
}

std::vector<TriadEntry> TriadTensor::restricted(std::size_t drift_level,
                                                std::size_t level) const {
  std::vector<TriadEntry> out;
  for (const TriadEntry& e : entries_) {
    if (e.a < drift_level && e.c < level) out.push_back(e);
  }
  return out;
}

TriadTensor build_tensor(const BasisPtr& basis) {
  if (!basis || basis->size() == 0) {
    throw std::invalid_argument("build_tensor: empty basis");
  }
  const BasisSet& B = *basis;
  const std::size_t n = B.size();
  std::vector<TriadEntry> entries;
  std::vector<TriadEntry> local;

  for (std::size_t a = 0; a < n; ++a) {
    const Mode& ma = B[a];
    for (std::size_t b = 0; b < n; ++b) {
      const Mode& mb = B[b];
      if (dot(ma.direction, mb.k.k) == 0) continue;
      local.clear();
      for (int s : {1, -1}) {
        WaveVector kc{{ma.k.k[0] + s * mb.k.k[0], ma.k.k[1] + s * mb.k.k[1],
                       ma.k.k[2] + s * mb.k.k[2]}};
        if (kc.is_zero()) continue;
        const auto first = B.first_index(kc);
        if (!first) continue;
        for (std::size_t c = *first; c < std::min(*first + 4, n); ++c) {
          if (c <= b) continue;
          const double value = triad_coefficient(B, a, b, c);
          if (value != 0.0) {
            local.push_back({static_cast<std::uint32_t>(a),
                             static_cast<std::uint32_t>(b),
                             static_cast<std::uint32_t>(c), value});
          }
        }
      }
      std::sort(local.begin(), local.end(), entry_less);
      entries.insert(entries.end(), local.begin(), local.end());
    }
  }
  return TriadTensor(basis, std::move(entries));
}

void accumulate_advection(std::span<const TriadEntry> entries,
                          std::span<const double> u, std::span<const double> v,
                          std::span<double> out) {
  const std::size_t nu = u.size();
  const std::size_t nv = v.size();
  const std::size_t no = out.size();
  for (const TriadEntry& e : entries) {
    if (e.a >= nu) continue;
    const double ua = u[e.a] * e.value;
    if (ua == 0.0) continue;
    if (e.c < no && e.b < nv) out[e.c] += ua * v[e.b];
    if (e.b < no && e.c < nv) out[e.b] -= ua * v[e.c];
  }
}

double b_eval(const SpectralField& u, const SpectralField& v,
              const SpectralField& w, const TriadTensor& tensor) {
  require_same_basis(u, v);
  require_same_basis(u, w);
  if (!same_basis(*u.basis(), *tensor.basis())) {
    throw std::invalid_argument("b_eval: tensor basis does not match fields");
  }
  double sum = 0.0;
  for (const TriadEntry& e : tensor.entries()) {
    sum += e.value * u[e.a] * (v[e.b] * w[e.c] - v[e.c] * w[e.b]);
  }
  return sum;
}

SpectralField B_apply(const SpectralField& u, const SpectralField& v,
                      std::size_t m, const TriadTensor& tensor) {
  require_same_basis(u, v);
  if (!same_basis(*u.basis(), *tensor.basis())) {
    throw std::invalid_argument("B_apply: tensor basis does not match fields");
  }
  if (m > u.size()) {
    throw std::invalid_argument("B_apply: level exceeds basis size");
  }
  SpectralField out(u.basis());
  accumulate_advection(tensor.entries(), u.coeffs(), v.coeffs(),
                       out.coeffs().subspan(0, m));
  return out;
}

ContinuityEstimate estimate_C(const BasisPtr& basis, const TriadTensor& tensor,
                              std::size_t trials, std::uint64_t seed) {
  if (trials == 0) {
    throw std::invalid_argument("estimate_C: trials must be at least 1");
  }
  // Each trial is a triple of single basis modes (w_a, w_b, w_c) drawn from
  // the resonant support; triples off the support contribute exactly zero.
  std::mt19937_64 rng(seed);
  const auto entries = tensor.entries();
  ContinuityEstimate est;
  if (entries.empty()) {
    est.samples = trials;
    return est;
  }
  std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
  std::bernoulli_distribution swap_bc(0.5);
  for (std::size_t t = 0; t < trials; ++t) {
    const TriadEntry& e = entries[pick(rng)];
    const bool swapped = swap_bc(rng);
    const std::size_t b = swapped ? e.c : e.b;
    const std::size_t c = swapped ? e.b : e.c;
    const double value = std::abs(e.value);
    const double uV = std::sqrt(basis->eigenvalue(e.a));
    const double vV = std::sqrt(basis->eigenvalue(b));
    const double wV = std::sqrt(basis->eigenvalue(c));
    est.C_hat = std::max(est.C_hat, value / (uV * vV * wV));
    est.C_half_hat = std::max(est.C_half_hat, value / (uV * wV * std::sqrt(vV)));
    ++est.samples;
  }
  return est;
}

}  // namespace nsledger
