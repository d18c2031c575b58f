#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dho/errors.hpp"
#include "dho/grid.hpp"
#include "dho/params.hpp"
#include "dho/wavefunction.hpp"

namespace dho {

// Closed-form spectrum and eigenfunctions of the damped-oscillator
// Hamiltonian. The eigenvalues are complex with the level-independent
// imaginary part hbar*lambda/4; the purely real spectrum one would get by
// ignoring the operator's non-Hermiticity is kept alongside solely to
// quantify that discrepancy.

struct ComplexEnergy {
  double re = 0.0;
  double im = 0.0;
  // Set only at critical damping (lambda == 2*omega), where all levels
  // collapse onto the same value and normalizability fails.
  bool degenerate = false;

  std::complex<double> value() const { return {re, im}; }
};

namespace detail {

inline void require_level(int n) {
  if (n < 0) throw std::invalid_argument("level index must be non-negative");
}

inline void require_not_overdamped(const PhysParams& params) {
  params.validate();
  if (params.lambda > 2.0 * params.omega)
    throw RegimeError("no analytic spectrum: overdamped (lambda > 2*omega)");
}

}  // namespace detail

// E_n = (n + 1/2) hbar sqrt(omega^2 - lambda^2/4) + i hbar lambda / 4.
// Critical damping returns the degenerate limit (0 real part) flagged with
// a warning instead of erroring, so parameter sweeps stay continuous;
// overdamped is a hard RegimeError.
inline ComplexEnergy complex_eigenvalue(int n, const PhysParams& params) {
  detail::require_level(n);
  detail::require_not_overdamped(params);
  ComplexEnergy e;
  e.re = (n + 0.5) * params.hbar * params.Omega();
  e.im = params.hbar * params.lambda / 4.0;
  e.degenerate = params.lambda == 2.0 * params.omega;
  return e;
}

// The same real part with the imaginary part dropped — the spectrum claimed
// for this Hamiltonian when its non-Hermiticity is ignored. Exists so that
// complex_eigenvalue(n) - claimed_real_eigenvalue(n) = i hbar lambda / 4
// can be exhibited level by level.
inline double claimed_real_eigenvalue(int n, const PhysParams& params) {
  detail::require_level(n);
  detail::require_not_overdamped(params);
  return (n + 0.5) * params.hbar * params.Omega();
}

// Physicists' Hermite polynomial via H_{n+1} = 2 x H_n - 2 n H_{n-1}.
inline double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite order must be non-negative");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = next;
  }
  return h1;
}

namespace detail {

// Normalized oscillator eigenfunction phi_n(y) of frequency Omega:
//   (m Omega / pi hbar)^(1/4) / sqrt(2^n n!) * H_n(xi) * exp(-xi^2/2),
//   xi = sqrt(m Omega / hbar) y.
// For n > 20 the 1/sqrt(2^n n!) prefactor is combined in log space with
// the magnitude of H_n e^{-xi^2/2} to dodge factorial overflow; the sign is
// carried separately. Phase convention: phi_n real, positive at its
// rightmost maximum (the leading Hermite coefficient is positive).
inline double oscillator_eigenfunction(int n, double m, double Omega, double hbar, double y) {
  const double a = m * Omega / hbar;
  const double xi = std::sqrt(a) * y;
  const double quartic = 0.25 * std::log(a / M_PI);
  if (n <= 20) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double pref = std::exp(quartic) / std::sqrt(std::pow(2.0, n) * fact);
    return pref * hermite(n, xi) * std::exp(-0.5 * xi * xi);
  }
  const double h = hermite(n, xi);
  if (h == 0.0) return 0.0;
  const double log_norm = 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
  const double log_mag = std::log(std::abs(h)) - 0.5 * xi * xi - log_norm + quartic;
  return std::copysign(std::exp(log_mag), h);
}

}  // namespace detail

// Eigenfunction psi_n(y) = exp(-i m lambda y^2 / 4 hbar) * phi_n(y; m, Omega):
// the unimodular gauge factor undresses to the plain frequency-Omega
// oscillator eigenfunction, so |psi_n| = phi_n pointwise and the trapezoidal
// norm is ~1 on any adequate grid.
inline WaveFunction eigenfunction(int n, const PhysParams& params, const Grid& grid) {
  detail::require_level(n);
  detail::require_not_overdamped(params);
  if (params.lambda == 2.0 * params.omega)
    throw RegimeError("no normalizable eigenfunction at critical damping");
  const double Omega = params.Omega();
  WaveFunction psi(grid);
  for (int j = 0; j < grid.points; ++j) {
    const double y = grid.node(j);
    const double phi = detail::oscillator_eigenfunction(n, params.m, Omega, params.hbar, y);
    const double theta = params.m * params.lambda * y * y / (4.0 * params.hbar);
    psi.values[static_cast<std::size_t>(j)] =
        phi * std::complex<double>(std::cos(theta), -std::sin(theta));
  }
  return psi;
}

enum class GaugeDirection { Forward, Inverse };

// Pointwise multiplication by exp(+- i m lambda y^2 / 4 hbar). Forward maps
// a dressed eigenfunction onto the real oscillator eigenfunction; the factor
// has unit modulus, so norms are preserved to rounding.
inline WaveFunction apply_gauge(const WaveFunction& psi, const PhysParams& params,
                                GaugeDirection direction) {
  params.validate();
  const double sign = direction == GaugeDirection::Forward ? 1.0 : -1.0;
  WaveFunction out = psi;
  for (int j = 0; j < psi.grid.points; ++j) {
    const double y = psi.grid.node(j);
    const double theta = sign * params.m * params.lambda * y * y / (4.0 * params.hbar);
    out.values[static_cast<std::size_t>(j)] *=
        std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return out;
}

}  // namespace dho
