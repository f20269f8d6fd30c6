#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace nsledger {

/// Integer lattice wavevector on the 2π-periodic box. Stored wavevectors lie
/// in the half-space whose first nonzero component is positive.
struct WaveVector {
  std::array<int, 3> k{};

  int norm2() const { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
  bool is_zero() const { return k[0] == 0 && k[1] == 0 && k[2] == 0; }
  bool in_half_space() const;
  /// Returns whichever of {k, -k} lies in the half-space.
  WaveVector canonical() const;

  auto operator<=>(const WaveVector&) const = default;
};

enum class Phase { cosine, sine };

/// One divergence-free Stokes eigenfunction
///   w(x) = amplitude * e(k) * phi(k.x),  phi in {cos, sin}
/// with unit L2 norm over the box.
struct Mode {
  WaveVector k;
  int polarization = 1;  // 1 or 2
  Phase phase = Phase::cosine;
  double eigenvalue = 0.0;  // |k|^2

  /// Unnormalized integer polarization direction; exactly orthogonal to k.
  std::array<long long, 3> direction{};
  double direction_norm = 1.0;

  std::array<double, 3> polarization_vector() const;
};

/// The first m special-basis modes in canonical order: ascending |k|^2, then
/// (k1,k2,k3) lexicographic, then polarization, then cosine before sine.
class BasisSet {
 public:
  explicit BasisSet(std::size_t mode_count);

  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t j) const { return modes_[j]; }
  std::span<const Mode> modes() const { return modes_; }
  double eigenvalue(std::size_t j) const { return modes_[j].eigenvalue; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// Scale factor making every realized mode unit-norm in L2([0,2pi)^3).
  static double amplitude();

  /// FNV-1a hash over the (k, polarization, phase) records in order.
  std::uint64_t hash() const { return hash_; }

  /// Index of the mode with wavevector `k` (canonicalized), polarization and
  /// phase, if it is part of this basis.
  std::optional<std::size_t> find(const WaveVector& k, int polarization,
                                   Phase phase) const;

  /// First index of the (up to four) modes sharing wavevector `k`.
  std::optional<std::size_t> first_index(const WaveVector& k) const;

  /// Realized vector value of mode j and its gradient d(w_i)/dx_l at x.
  std::array<double, 3> evaluate_mode(std::size_t j,
                                      const std::array<double, 3>& x) const;
  std::array<std::array<double, 3>, 3> gradient_mode(
      std::size_t j, const std::array<double, 3>& x) const;

 private:
  std::vector<Mode> modes_;
  std::vector<double> eigenvalues_;
  std::map<std::array<int, 3>, std::size_t> first_index_;
  std::uint64_t hash_ = 0;
};

using BasisPtr = std::shared_ptr<const BasisSet>;

/// Builds the first `mode_count` modes. Throws std::invalid_argument on 0.
BasisPtr build_basis(std::size_t mode_count);

/// Polarization directions for a half-space wavevector:
///   e1 = (k x z)/|k x z| (or x-hat when k is parallel to z), e2 = (k x e1)/|k|.
/// Returned unnormalized with integer entries.
std::array<long long, 3> polarization_direction(const WaveVector& k,
                                                int polarization);

/// Exponent selecting a space on the V_sigma scale: the norm is
/// (sum lambda_j^sigma a_j^2)^(1/2). H is sigma = 0, V is 1, V* is -1.
struct Space {
  double sigma = 0.0;

  static constexpr Space H() { return {0.0}; }
  static constexpr Space V() { return {1.0}; }
  static constexpr Space dual() { return {-1.0}; }
  static constexpr Space sobolev(double s) { return {s}; }
  static constexpr Space dual_sobolev(double s) { return {-s}; }
};

/// A velocity field as coefficients against a BasisSet.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(BasisPtr basis);
  SpectralField(BasisPtr basis, std::vector<double> coeffs);

  const BasisPtr& basis() const { return basis_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  double& operator[](std::size_t j) { return coeffs_[j]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  /// Realized velocity at a point of the box.
  std::array<double, 3> evaluate(const std::array<double, 3>& x) const;

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Throws std::invalid_argument unless both fields live on the same basis.
void require_same_basis(const SpectralField& a, const SpectralField& b);
bool same_basis(const BasisSet& a, const BasisSet& b);

/// P_m v: keeps the first m coefficients, zeroes the rest.
SpectralField project(const SpectralField& v, std::size_t m);

double norm(const SpectralField& v, Space space);
double norm(std::span<const double> coeffs, std::span<const double> eigenvalues,
            Space space);

/// Duality pairing <f, v>; coincides with the H inner product.
double pair(const SpectralField& f, const SpectralField& v);

/// Seeded sample with independent N(0, lambda_j^-2) coefficients on the first
/// `active` modes (all modes when active is 0).
SpectralField random_field(const BasisPtr& basis, std::uint64_t seed,
                           std::size_t active = 0);
SpectralField random_field(const BasisPtr& basis, std::mt19937_64& rng,
                           std::size_t active = 0);

struct BasisRecord {
  WaveVector k;
  int polarization;
  Phase phase;
  double eigenvalue;
};

/// Audit listing of the basis: one (k, polarization, phase, lambda) record per mode.
std::vector<BasisRecord> basis_records(const BasisSet& basis);
std::string to_string(Phase phase);

}  // namespace nsledger
