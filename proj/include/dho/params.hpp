#pragma once

#include <cmath>
#include <stdexcept>

#include "dho/errors.hpp"

namespace dho {

enum class Regime { Underdamped, Critical, Overdamped };

// Physical parameters (m, omega, lambda, hbar) in natural units; the numeric
// twin of SymbolicParams. Omega = sqrt(omega^2 - lambda^2/4) is the reduced
// frequency of the underdamped regime.
struct PhysParams {
  double m = 1.0;
  double omega = 1.0;
  double lambda = 0.5;
  double hbar = 1.0;

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("m must be positive");
    if (!(omega > 0.0) || !std::isfinite(omega))
      throw std::invalid_argument("omega must be positive");
    if (lambda < 0.0 || !std::isfinite(lambda))
      throw std::invalid_argument("lambda must be non-negative");
    if (!(hbar > 0.0) || !std::isfinite(hbar))
      throw std::invalid_argument("hbar must be positive");
  }

  // Reduced frequency; zero at critical damping, undefined (throws) beyond.
  double Omega() const {
    if (lambda > 2.0 * omega)
      throw RegimeError("Omega undefined: overdamped (lambda > 2*omega)");
    return std::sqrt(omega * omega - lambda * lambda / 4.0);
  }
};

// Classification is by exact floating comparison with 2*omega; callers that
// need a safety window around critical damping handle it themselves.
inline Regime regime(const PhysParams& params) {
  params.validate();
  if (params.lambda < 2.0 * params.omega) return Regime::Underdamped;
  if (params.lambda == 2.0 * params.omega) return Regime::Critical;
  return Regime::Overdamped;
}

}  // namespace dho
