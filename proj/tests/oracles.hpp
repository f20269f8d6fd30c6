#pragma once

// Reference computations written independently of the library: fields are
// realized on a uniform grid straight from (k, polarization, phase), and the
// trilinear form is integrated by quadrature.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "nsledger/spectral_basis.hpp"

namespace oracle {

using Vec3 = std::array<double, 3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 unit(Vec3 v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

/// e1 = k x z-hat normalized (x-hat when k is parallel to z), e2 = k x e1 normalized.
inline Vec3 polarization(const std::array<int, 3>& k, int which) {
  const Vec3 kv{double(k[0]), double(k[1]), double(k[2])};
  Vec3 e1 = (k[0] == 0 && k[1] == 0) ? Vec3{1.0, 0.0, 0.0} : unit(cross(kv, {0.0, 0.0, 1.0}));
  return which == 1 ? e1 : unit(cross(kv, e1));
}

/// Half-space lattice points with |k|^2 == r2, counted by brute force.
inline std::size_t shell_size(int r2) {
  std::size_t count = 0;
  const int r = static_cast<int>(std::ceil(std::sqrt(double(r2))));
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c) {
        if (a * a + b * b + c * c != r2) continue;
        const bool upper = a > 0 || (a == 0 && (b > 0 || (b == 0 && c > 0)));
        if (upper) ++count;
      }
  return count;
}

/// Velocity and gradient of a field sampled on an n^3 grid over [0, 2pi)^3.
struct GridField {
  std::size_t n = 0;
  std::vector<Vec3> u;
  std::vector<std::array<Vec3, 3>> grad;  // grad[p][i][l] = d u_i / d x_l
};

inline GridField realize(const nsledger::SpectralField& f, std::size_t n) {
  const auto& basis = *f.basis();
  const double amp = 1.0 / std::sqrt(4.0 * std::pow(std::numbers::pi, 3));
  const double h = 2.0 * std::numbers::pi / double(n);
  GridField g;
  g.n = n;
  g.u.assign(n * n * n, Vec3{});
  g.grad.assign(n * n * n, {});
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] == 0.0) continue;
    const auto& mode = basis[j];
    const auto& k = mode.k.k;
    const Vec3 e = polarization(k, mode.polarization);
    const bool is_sin = mode.phase == nsledger::Phase::sine;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const double arg = h * (double(k[0]) * a + double(k[1]) * b + double(k[2]) * c);
          const double value = is_sin ? std::sin(arg) : std::cos(arg);
          const double slope = is_sin ? std::cos(arg) : -std::sin(arg);
          const std::size_t p = (a * n + b) * n + c;
          for (int i = 0; i < 3; ++i) {
            g.u[p][i] += f[j] * amp * e[i] * value;
            for (int l = 0; l < 3; ++l) g.grad[p][i][l] += f[j] * amp * e[i] * slope * k[l];
          }
        }
  }
  return g;
}

/// b(u, v, w) = int sum_{i,j} u_i (d v_j / d x_i) w_j by the rectangle rule,
/// exact for trigonometric polynomials of degree below n.
inline double trilinear(const GridField& u, const GridField& v, const GridField& w) {
  const std::size_t n = u.n;
  double sum = 0.0;
  for (std::size_t p = 0; p < n * n * n; ++p)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sum += u.u[p][i] * v.grad[p][j][i] * w.u[p][j];
  const double cell = std::pow(2.0 * std::numbers::pi / double(n), 3);
  return sum * cell;
}

inline double inner(const GridField& a, const GridField& b) {
  const std::size_t n = a.n;
  double sum = 0.0;
  for (std::size_t p = 0; p < n * n * n; ++p)
    for (int i = 0; i < 3; ++i) sum += a.u[p][i] * b.u[p][i];
  return sum * std::pow(2.0 * std::numbers::pi / double(n), 3);
}

}  // namespace oracle
