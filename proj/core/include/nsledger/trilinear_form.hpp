#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nsledger/spectral_basis.hpp"

namespace nsledger {

/// One canonical coefficient T[a,b,c] = b(w_a, w_b, w_c) with b < c. The
/// partner T[a,c,b] = -T[a,b,c] is never stored.
struct TriadEntry {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
  double value = 0.0;
};

/// Sparse triad interaction tensor of the convective trilinear form
///   b(u,v,w) = int u_i (d_i v_j) w_j dx
/// on a BasisSet. Immutable after construction.
class TriadTensor {
 public:
  /// Takes canonical entries (b < c), sorts them by (a,b,c) and rejects
  /// out-of-range or duplicated triples.
  TriadTensor(BasisPtr basis, std::vector<TriadEntry> entries);

  const BasisPtr& basis() const { return basis_; }
  std::span<const TriadEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// T[a,b,c] for any index order; the antisymmetric partner is derived.
  double at(std::size_t a, std::size_t b, std::size_t c) const;

  /// Entries whose drift index a < drift_level and whose indices b, c are
  /// both below `level`. Everything else drops out of a level-`level`
  /// Galerkin system driven by a field supported on `drift_level` modes.
  std::vector<TriadEntry> restricted(std::size_t drift_level,
                                     std::size_t level) const;

 private:
  BasisPtr basis_;
  std::vector<TriadEntry> entries_;
};

/// Closed-form b(w_a, w_b, w_c) from the product-to-sum expansion of the three
/// trigonometric factors. Zero unless some signed sum of the wavevectors
/// vanishes.
double triad_coefficient(const BasisSet& basis, std::size_t a, std::size_t b,
                         std::size_t c);

TriadTensor build_tensor(const BasisPtr& basis);

/// out[j] += sum_{a,b} u[a] v[b] T[a,b,j] over the given entries, for j < out.size().
void accumulate_advection(std::span<const TriadEntry> entries,
                          std::span<const double> u, std::span<const double> v,
                          std::span<double> out);

/// b(u, v, w) = sum u_a v_b w_c T[a,b,c].
double b_eval(const SpectralField& u, const SpectralField& v,
              const SpectralField& w, const TriadTensor& tensor);

/// Coefficients of P_m B(u, v): component j < m is b(u, v, w_j), the rest zero.
SpectralField B_apply(const SpectralField& u, const SpectralField& v,
                      std::size_t m, const TriadTensor& tensor);

struct ContinuityEstimate {
  /// max |b(u,v,w)| / (|u|_V |v|_V |w|_V) over the samples.
  double C_hat = 0.0;
  /// max |b(u,v,w)| / (|u|_V |w|_V |v|_V^(1/2) |v|^(1/2)) over the samples.
  double C_half_hat = 0.0;
  std::size_t samples = 0;
};

/// Empirical lower bounds for the continuity constants. Each of the `trials`
/// samples picks a tensor entry from one seeded stream and evaluates the ratios
/// on the corresponding single basis modes, so a longer run extends a shorter one.
ContinuityEstimate estimate_C(const BasisPtr& basis, const TriadTensor& tensor,
                              std::size_t trials, std::uint64_t seed);

inline constexpr double kContinuitySafetyFactor = 2.0;

/// Constant used by diagnostics: the empirical estimate inflated by `safety`.
inline double continuity_constant(const ContinuityEstimate& est,
                                  double safety = kContinuitySafetyFactor) {
  return safety * est.C_hat;
}

}  // namespace nsledger
