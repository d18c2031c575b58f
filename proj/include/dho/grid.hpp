#pragma once

#include <cmath>
#include <stdexcept>

namespace dho {

// Uniform spatial grid on [-L, L] with N nodes, y_j = -L + j*h,
// h = 2L/(N-1). Hard-wall (Dirichlet) boundaries are implied: the
// wavefunction is treated as zero outside the grid. Physics runs should use
// N >= 16 and L >= 8*sqrt(hbar/(m*Omega)) so boundary truncation stays
// subdominant; the constructor itself only requires a well-formed grid.
struct Grid {
  double half_width = 0.0;  // L
  int points = 0;           // N
  double spacing = 0.0;     // h

  double node(int j) const { return -half_width + j * spacing; }
};

inline Grid make_grid(double half_width, int points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive");
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  Grid g;
  g.half_width = half_width;
  g.points = points;
  g.spacing = 2.0 * half_width / (points - 1);
  return g;
}

inline bool operator==(const Grid& a, const Grid& b) {
  return a.half_width == b.half_width && a.points == b.points;
}

}  // namespace dho
