#include "nsledger/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsledger {

bool WaveVector::in_half_space() const {
  for (int c : k) {
    if (c != 0) return c > 0;
  }
  return false;
}

WaveVector WaveVector::canonical() const {
  if (is_zero() || in_half_space()) return *this;
  return WaveVector{{-k[0], -k[1], -k[2]}};
}

std::array<long long, 3> polarization_direction(const WaveVector& wv,
                                                int polarization) {
  const long long k1 = wv.k[0], k2 = wv.k[1], k3 = wv.k[2];
  const bool parallel_to_z = (k1 == 0 && k2 == 0);
  std::array<long long, 3> e1 =
      parallel_to_z ? std::array<long long, 3>{1, 0, 0}
                    : std::array<long long, 3>{k2, -k1, 0};
  if (polarization == 1) return e1;
  if (polarization != 2) {
    throw std::invalid_argument("polarization must be 1 or 2");
  }
  // k x e1; its length is |k| |e1| because e1 is orthogonal to k.
  return {k2 * e1[2] - k3 * e1[1], k3 * e1[0] - k1 * e1[2],
          k1 * e1[1] - k2 * e1[0]};
}

std::array<double, 3> Mode::polarization_vector() const {
  return {static_cast<double>(direction[0]) / direction_norm,
          static_cast<double>(direction[1]) / direction_norm,
          static_cast<double>(direction[2]) / direction_norm};
}

double BasisSet::amplitude() {
  // |phi|^2 averages to 1/2 over the box of volume (2 pi)^3.
  static const double a =
      1.0 / std::sqrt(4.0 * std::numbers::pi * std::numbers::pi *
                      std::numbers::pi);
  return a;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::int64_t value) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= static_cast<std::uint64_t>(value >> (8 * byte)) & 0xffU;
    h *= kFnvPrime;
  }
}

// Half-space lattice points with |k|^2 <= r2 in canonical order.
std::vector<WaveVector> half_space_ball(int r2) {
  const int r = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(r2))));
  std::vector<WaveVector> out;
  for (int a = -r; a <= r; ++a) {
    for (int b = -r; b <= r; ++b) {
      for (int c = -r; c <= r; ++c) {
        WaveVector w{{a, b, c}};
        if (w.is_zero() || !w.in_half_space() || w.norm2() > r2) continue;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const WaveVector& x, const WaveVector& y) {
    if (x.norm2() != y.norm2()) return x.norm2() < y.norm2();
    return x.k < y.k;
  });
  return out;
}

}  // namespace

BasisSet::BasisSet(std::size_t mode_count) {
  if (mode_count == 0) {
    throw std::invalid_argument("build_basis: mode_count must be at least 1");
  }
  const std::size_t needed_vectors = (mode_count + 3) / 4;
  int r2 = 1;
  std::vector<WaveVector> vectors = half_space_ball(r2);
  while (vectors.size() < needed_vectors) {
    r2 = std::max(r2 + 1, r2 * 2);
    vectors = half_space_ball(r2);
  }

  modes_.reserve(mode_count);
  for (const WaveVector& k : vectors) {
    for (int pol = 1; pol <= 2; ++pol) {
      const auto dir = polarization_direction(k, pol);
      const double dir_norm = std::sqrt(static_cast<double>(
          dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]));
      for (Phase phase : {Phase::cosine, Phase::sine}) {
        if (modes_.size() == mode_count) break;
        if (pol == 1 && phase == Phase::cosine) {
          first_index_.emplace(k.k, modes_.size());
        }
        Mode mode;
        mode.k = k;
        mode.polarization = pol;
        mode.phase = phase;
        mode.eigenvalue = static_cast<double>(k.norm2());
        mode.direction = dir;
        mode.direction_norm = dir_norm;
        modes_.push_back(mode);
      }
    }
    if (modes_.size() == mode_count) break;
  }

  eigenvalues_.reserve(modes_.size());
  hash_ = kFnvOffset;
  for (const Mode& mode : modes_) {
    eigenvalues_.push_back(mode.eigenvalue);
    for (int c : mode.k.k) fnv_mix(hash_, c);
    fnv_mix(hash_, mode.polarization);
    fnv_mix(hash_, mode.phase == Phase::cosine ? 0 : 1);
  }
}

std::optional<std::size_t> BasisSet::first_index(const WaveVector& k) const {
  const auto it = first_index_.find(k.canonical().k);
  if (it == first_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> BasisSet::find(const WaveVector& k, int polarization,
                                          Phase phase) const {
  const auto first = first_index(k);
  if (!first) return std::nullopt;
  const std::size_t j = *first + 2 * static_cast<std::size_t>(polarization - 1) +
                        (phase == Phase::sine ? 1 : 0);
  if (j >= modes_.size()) return std::nullopt;
  return j;
}

namespace {

double phase_argument(const Mode& mode, const std::array<double, 3>& x) {
  return mode.k.k[0] * x[0] + mode.k.k[1] * x[1] + mode.k.k[2] * x[2];
}

}  // namespace

std::array<double, 3> BasisSet::evaluate_mode(
    std::size_t j, const std::array<double, 3>& x) const {
  const Mode& mode = modes_.at(j);
  const double theta = phase_argument(mode, x);
  const double phi = mode.phase == Phase::cosine ? std::cos(theta) : std::sin(theta);
  const auto e = mode.polarization_vector();
  const double s = amplitude() * phi;
  return {s * e[0], s * e[1], s * e[2]};
}

std::array<std::array<double, 3>, 3> BasisSet::gradient_mode(
    std::size_t j, const std::array<double, 3>& x) const {
  const Mode& mode = modes_.at(j);
  const double theta = phase_argument(mode, x);
  const double dphi =
      mode.phase == Phase::cosine ? -std::sin(theta) : std::cos(theta);
  const auto e = mode.polarization_vector();
  std::array<std::array<double, 3>, 3> g{};
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      g[i][l] = amplitude() * e[i] * dphi * mode.k.k[l];
    }
  }
  return g;
}

BasisPtr build_basis(std::size_t mode_count) {
  return std::make_shared<const BasisSet>(mode_count);
}

bool same_basis(const BasisSet& a, const BasisSet& b) {
  return &a == &b || (a.size() == b.size() && a.hash() == b.hash());
}

SpectralField::SpectralField(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw std::invalid_argument("SpectralField: null basis");
  coeffs_.assign(basis_->size(), 0.0);
}

SpectralField::SpectralField(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw std::invalid_argument("SpectralField: null basis");
  if (coeffs_.size() != basis_->size()) {
    throw std::invalid_argument("SpectralField: coefficient count " +
                                std::to_string(coeffs_.size()) +
                                " does not match basis size " +
                                std::to_string(basis_->size()));
  }
}

void require_same_basis(const SpectralField& a, const SpectralField& b) {
  if (!a.basis() || !b.basis() || !same_basis(*a.basis(), *b.basis())) {
    throw std::invalid_argument("fields are defined on different bases");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= other.coeffs_[j];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

std::array<double, 3> SpectralField::evaluate(const std::array<double, 3>& x) const {
  std::array<double, 3> out{};
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0.0) continue;
    const auto w = basis_->evaluate_mode(j, x);
    for (int i = 0; i < 3; ++i) out[i] += coeffs_[j] * w[i];
  }
  return out;
}

SpectralField project(const SpectralField& v, std::size_t m) {
  if (m > v.size()) {
    throw std::invalid_argument("project: level " + std::to_string(m) +
                                " exceeds basis size " + std::to_string(v.size()));
  }
  SpectralField out = v;
  auto c = out.coeffs();
  std::fill(c.begin() + static_cast<std::ptrdiff_t>(m), c.end(), 0.0);
  return out;
}

double norm(std::span<const double> coeffs, std::span<const double> eigenvalues,
            Space space) {
  double sum = 0.0;
  if (space.sigma == 0.0) {
    for (double a : coeffs) sum += a * a;
  } else if (space.sigma == 1.0) {
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      sum += eigenvalues[j] * coeffs[j] * coeffs[j];
    }
  } else {
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      sum += std::pow(eigenvalues[j], space.sigma) * coeffs[j] * coeffs[j];
    }
  }
  return std::sqrt(sum);
}

double norm(const SpectralField& v, Space space) {
  return norm(v.coeffs(), v.basis()->eigenvalues(), space);
}

double pair(const SpectralField& f, const SpectralField& v) {
  require_same_basis(f, v);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * v[j];
  return sum;
}

SpectralField random_field(const BasisPtr& basis, std::mt19937_64& rng,
                           std::size_t active) {
  SpectralField out(basis);
  const std::size_t n = active == 0 ? basis->size() : std::min(active, basis->size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = normal(rng) / basis->eigenvalue(j);
  }
  return out;
}

SpectralField random_field(const BasisPtr& basis, std::uint64_t seed,
                           std::size_t active) {
  std::mt19937_64 rng(seed);
  return random_field(basis, rng, active);
}

std::vector<BasisRecord> basis_records(const BasisSet& basis) {
  std::vector<BasisRecord> out;
  out.reserve(basis.size());
  for (const Mode& mode : basis.modes()) {
    out.push_back({mode.k, mode.polarization, mode.phase, mode.eigenvalue});
  }
  return out;
}

std::string to_string(Phase phase) {
  return phase == Phase::cosine ? "cos" : "sin";
}

}  // namespace nsledger
