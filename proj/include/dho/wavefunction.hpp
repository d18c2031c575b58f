#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dho/grid.hpp"

namespace dho {

struct WaveFunction {
  Grid grid;
  std::vector<std::complex<double>> values;

  WaveFunction() = default;
  explicit WaveFunction(const Grid& g)
      : grid(g), values(static_cast<std::size_t>(g.points)) {}
};

// Trapezoidal inner product <f, g> = h * (sum conj(f_j) g_j - end halves).
inline std::complex<double> trapezoid_inner(const WaveFunction& f, const WaveFunction& g) {
  if (!(f.grid == g.grid) || f.values.size() != g.values.size())
    throw std::invalid_argument("inner product needs matching grids");
  std::complex<double> acc = 0.0;
  const std::size_t n = f.values.size();
  for (std::size_t j = 0; j < n; ++j) acc += std::conj(f.values[j]) * g.values[j];
  acc -= 0.5 * (std::conj(f.values[0]) * g.values[0] +
                std::conj(f.values[n - 1]) * g.values[n - 1]);
  return acc * f.grid.spacing;
}

inline double trapezoid_norm2(const WaveFunction& f) {
  return trapezoid_inner(f, f).real();
}

inline double trapezoid_norm(const WaveFunction& f) {
  return std::sqrt(trapezoid_norm2(f));
}

// <y> = Re <psi, y psi> / ||psi||^2
inline double expectation_y(const WaveFunction& f) {
  std::complex<double> acc = 0.0;
  const std::size_t n = f.values.size();
  for (std::size_t j = 0; j < n; ++j)
    acc += std::conj(f.values[j]) * f.grid.node(static_cast<int>(j)) * f.values[j];
  acc -= 0.5 * (std::conj(f.values[0]) * f.grid.node(0) * f.values[0] +
                std::conj(f.values[n - 1]) * f.grid.node(static_cast<int>(n) - 1) *
                    f.values[n - 1]);
  const double n2 = trapezoid_norm2(f);
  if (!(n2 > 0.0)) throw std::invalid_argument("expectation of zero-norm wavefunction");
  return (acc * f.grid.spacing).real() / n2;
}

}  // namespace dho
