#include "nsledger/scenarios.hpp"

#include <stdexcept>

namespace nsledger {

SpectralField project_plane_waves(const BasisPtr& basis, const std::vector<PlaneWave>& waves) {
  SpectralField out(basis);
  for (const PlaneWave& wave : waves) {
    if (wave.k.is_zero()) continue;
    const WaveVector k = wave.k.canonical();
    // sin(-k.x) = -sin(k.x); cos is even.
    const double flip = (k == wave.k || wave.phase == Phase::cosine) ? 1.0 : -1.0;
    for (int pol = 1; pol <= 2; ++pol) {
      const auto j = basis->find(k, pol, wave.phase);
      if (!j) continue;
      const auto e = (*basis)[*j].polarization_vector();
      const double dot =
          wave.amplitude[0] * e[0] + wave.amplitude[1] * e[1] + wave.amplitude[2] * e[2];
      // (A phi, w_j) = (A.e) * amplitude * |box| / 2 = (A.e) / amplitude.
      out[*j] += flip * dot / BasisSet::amplitude();
    }
  }
  return out;
}

std::size_t shear_mode_index(const BasisSet& basis) {
  const auto j = basis.find(WaveVector{{1, 0, 0}}, 1, Phase::cosine);
  if (!j) {
    throw std::invalid_argument("shear mode k=(1,0,0) needs a basis of at least 9 modes");
  }
  return *j;
}

SpectralField single_mode_field(const BasisPtr& basis, std::size_t index, double amplitude) {
  if (index >= basis->size()) throw std::invalid_argument("single_mode_field: index out of range");
  SpectralField out(basis);
  out[index] = amplitude;
  return out;
}

SpectralField shear_mode_field(const BasisPtr& basis, double amplitude) {
  return single_mode_field(basis, shear_mode_index(*basis), amplitude);
}

std::vector<PlaneWave> taylor_green_waves(double amplitude) {
  const double q = 0.25 * amplitude;
  return {
      {WaveVector{{1, 1, 1}}, Phase::sine, {q, -q, 0.0}},
      {WaveVector{{1, 1, -1}}, Phase::sine, {q, -q, 0.0}},
      {WaveVector{{1, -1, 1}}, Phase::sine, {q, q, 0.0}},
      {WaveVector{{1, -1, -1}}, Phase::sine, {q, q, 0.0}},
  };
}

SpectralField taylor_green_field(const BasisPtr& basis, double amplitude) {
  return project_plane_waves(basis, taylor_green_waves(amplitude));
}

}  // namespace nsledger
