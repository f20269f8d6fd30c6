#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nsledger/galerkin_solver.hpp"
#include "nsledger/spectral_basis.hpp"

namespace nsledger {

/// A real plane wave  amplitude * phi(k.x)  with a vector amplitude.
struct PlaneWave {
  WaveVector k;
  Phase phase = Phase::sine;
  std::array<double, 3> amplitude{};
};

/// Exact L2 projection of a finite sum of plane waves onto the basis.
SpectralField project_plane_waves(const BasisPtr& basis, const std::vector<PlaneWave>& waves);

/// Index of the mode with k = (1,0,0), polarization 1, cosine phase.
std::size_t shear_mode_index(const BasisSet& basis);

/// Single-mode data: amplitude on mode `index` (defaults to shear_mode_index).
SpectralField shear_mode_field(const BasisPtr& basis, double amplitude);
SpectralField single_mode_field(const BasisPtr& basis, std::size_t index, double amplitude);

/// Classical Taylor-Green vortex
///   u = A (sin x cos y cos z, -cos x sin y cos z, 0),
/// which lives on the |k|^2 = 3 shell.
std::vector<PlaneWave> taylor_green_waves(double amplitude);
SpectralField taylor_green_field(const BasisPtr& basis, double amplitude = 1.0);

/// Named initial-value setup shared by the CLI and the refinement study.
struct Scenario {
  std::string name;
  SpectralField initial;
  Forcing forcing;
  Interval interval;
};

}  // namespace nsledger
