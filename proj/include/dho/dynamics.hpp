#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dho/params.hpp"

namespace dho {

// Classical damped oscillator q'' + lambda q' + omega^2 q = 0: closed-form
// solutions in all three regimes plus a fixed-step RK4 integrator for
// cross-validation.

struct InitialCondition {
  double q0 = 1.0;
  double v0 = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;
};

// (q, v) at time t. Within |lambda - 2 omega| < 1e-8 * omega the critical
// branch is used to avoid catastrophic cancellation between nearly equal
// exponentials.
inline std::pair<double, double> closed_form(const PhysParams& params,
                                             const InitialCondition& ic, double t) {
  params.validate();
  const double lam = params.lambda;
  const double w = params.omega;
  const double half_lam = 0.5 * lam;
  const double decay = std::exp(-half_lam * t);

  if (std::abs(lam - 2.0 * w) < 1e-8 * w) {
    const double b = ic.v0 + half_lam * ic.q0;
    const double q = decay * (ic.q0 + b * t);
    const double v = decay * (b - half_lam * (ic.q0 + b * t));
    return {q, v};
  }
  if (lam < 2.0 * w) {
    const double wd = std::sqrt(w * w - lam * lam / 4.0);
    const double b = (ic.v0 + half_lam * ic.q0) / wd;
    const double c = std::cos(wd * t);
    const double s = std::sin(wd * t);
    const double q = decay * (ic.q0 * c + b * s);
    const double v = decay * (-ic.q0 * wd * s + b * wd * c) - half_lam * q;
    return {q, v};
  }
  const double mu = std::sqrt(lam * lam / 4.0 - w * w);
  const double rp = -half_lam + mu;
  const double rm = -half_lam - mu;
  const double a = (ic.v0 - rm * ic.q0) / (rp - rm);
  const double b = (rp * ic.q0 - ic.v0) / (rp - rm);
  const double q = a * std::exp(rp * t) + b * std::exp(rm * t);
  const double v = a * rp * std::exp(rp * t) + b * rm * std::exp(rm * t);
  return {q, v};
}

// Classical fourth-order Runge-Kutta on (q' = v, v' = -lambda v - omega^2 q)
// with a fixed step; t_max is rounded to the nearest whole number of steps.
inline Trajectory integrate_rk4(const PhysParams& params, const InitialCondition& ic,
                                double t_max, double h) {
  params.validate();
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(h > 0.0) || h > t_max) throw std::invalid_argument("step must satisfy 0 < h <= t_max");

  const long long steps = std::llround(t_max / h);
  const double lam = params.lambda;
  const double w2 = params.omega * params.omega;

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.positions.reserve(steps + 1);
  traj.velocities.reserve(steps + 1);

  double q = ic.q0;
  double v = ic.v0;
  traj.times.push_back(0.0);
  traj.positions.push_back(q);
  traj.velocities.push_back(v);

  for (long long k = 0; k < steps; ++k) {
    const double k1q = v;
    const double k1v = -lam * v - w2 * q;
    const double k2q = v + 0.5 * h * k1v;
    const double k2v = -lam * (v + 0.5 * h * k1v) - w2 * (q + 0.5 * h * k1q);
    const double k3q = v + 0.5 * h * k2v;
    const double k3v = -lam * (v + 0.5 * h * k2v) - w2 * (q + 0.5 * h * k2q);
    const double k4q = v + h * k3v;
    const double k4v = -lam * (v + h * k3v) - w2 * (q + h * k3q);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    traj.times.push_back((k + 1) * h);
    traj.positions.push_back(q);
    traj.velocities.push_back(v);
  }
  return traj;
}

// CSV: header "t,q,v", one row per step, full round-trip precision.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,q,v\n";
  char buf[120];
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", traj.times[k], traj.positions[k],
                  traj.velocities[k]);
    os << buf << "\n";
  }
}

}  // namespace dho
