#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dho/discretize.hpp"
#include "dho/errors.hpp"
#include "dho/matrix.hpp"
#include "dho/wavefunction.hpp"

namespace dho {

// Crank-Nicolson propagation under the (generally non-Hermitian) operator
// matrix:  (I + i dt A / 2 hbar) psi_{k+1} = (I - i dt A / 2 hbar) psi_k,
// solved by banded LU elimination with partial pivoting each step. For a
// Hermitian A the update is exactly unitary; for the damped-oscillator
// matrix the constant anti-Hermitian part i hbar lambda/4 enters the two
// diagonals as the real pair (1 -+ dt lambda/8), so an eigenstate's norm
// grows by [(1 + dt lambda/8)^2 + b^2] / [(1 - dt lambda/8)^2 + b^2] per
// step (b = dt Re E / 2 hbar), i.e. at rate lambda/2 up to O(dt^2).

struct EvolutionSeries {
  std::vector<double> times;
  std::vector<double> norms;      // ||psi||^2 (trapezoidal)
  std::vector<double> positions;  // <y>
  std::vector<double> overlaps;   // |<psi(0), psi(t)>| / (||psi(0)|| ||psi(t)||)
  WaveFunction final_state;
};

namespace detail {

// LAPACK-style banded LU with partial pivoting, kl = ku = bw; factored rows
// hold kl extra superdiagonals of fill-in.
class BandedLU {
 public:
  BandedLU(int n, int bw) : n_(n), kl_(bw), ku_(bw), rows_(2 * bw + bw + 1) {
    data_.assign(static_cast<std::size_t>(rows_) * n_, Complex(0.0));
    pivots_.assign(static_cast<std::size_t>(n_), 0);
  }

  // Band storage: entry (i, j) lives at [ku_ + kl_ + i - j][j].
  Complex& at(int i, int j) {
    return data_[static_cast<std::size_t>(ku_ + kl_ + i - j) * n_ + j];
  }
  const Complex& at(int i, int j) const {
    return data_[static_cast<std::size_t>(ku_ + kl_ + i - j) * n_ + j];
  }

  void factor(int step_for_error) {
    const int band = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
      int pivot = k;
      double best = cabs1(at(k, k));
      for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
        const double mag = cabs1(at(i, k));
        if (mag > best) {
          best = mag;
          pivot = i;
        }
      }
      if (best == 0.0)
        throw SingularSolveError(step_for_error,
                                 "singular banded system at step " +
                                     std::to_string(step_for_error) + ", column " +
                                     std::to_string(k));
      pivots_[static_cast<std::size_t>(k)] = pivot;
      if (pivot != k)
        for (int j = k; j <= std::min(n_ - 1, k + band); ++j)
          std::swap(at(k, j), at(pivot, j));
      for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
        const Complex mult = cdiv(at(i, k), at(k, k));
        at(i, k) = mult;
        for (int j = k + 1; j <= std::min(n_ - 1, k + band); ++j)
          at(i, j) -= cmul(mult, at(k, j));
      }
    }
  }

  void solve(std::vector<Complex>& x) const {
    const int band = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
      const int pivot = pivots_[static_cast<std::size_t>(k)];
      if (pivot != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(pivot)]);
      for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
        x[static_cast<std::size_t>(i)] -= cmul(at(i, k), x[static_cast<std::size_t>(k)]);
    }
    for (int k = n_ - 1; k >= 0; --k) {
      Complex acc = x[static_cast<std::size_t>(k)];
      for (int j = k + 1; j <= std::min(n_ - 1, k + band); ++j)
        acc -= cmul(at(k, j), x[static_cast<std::size_t>(j)]);
      x[static_cast<std::size_t>(k)] = cdiv(acc, at(k, k));
    }
  }

 private:
  int n_;
  int kl_;
  int ku_;
  int rows_;
  std::vector<Complex> data_;
  std::vector<int> pivots_;
};

}  // namespace detail

// Propagates psi0 for `steps` Crank-Nicolson steps of size dt under the
// banded matrix (bandwidth from the operator matrix). The left-hand factor
// is constant in time, so it is factored once and reused.
inline EvolutionSeries propagate_banded(const ComplexMatrix& a, const Grid& grid, int bandwidth,
                                        double hbar, const WaveFunction& psi0, double dt,
                                        int steps) {
  const int n = a.size();
  if (static_cast<int>(psi0.values.size()) != n || !(psi0.grid == grid))
    throw std::invalid_argument("propagate: matrix/wavefunction mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (steps < 1) throw std::invalid_argument("propagate: need at least one step");
  const int bw = bandwidth;

  const Complex half_step(0.0, dt / (2.0 * hbar));

  detail::BandedLU lhs(n, bw);
  for (int i = 0; i < n; ++i) {
    lhs.at(i, i) = 1.0 + cmul(half_step, a(i, i));
    for (int d = 1; d <= bw; ++d) {
      if (i + d < n) lhs.at(i, i + d) = cmul(half_step, a(i, i + d));
      if (i - d >= 0) lhs.at(i, i - d) = cmul(half_step, a(i, i - d));
    }
  }
  lhs.factor(0);

  WaveFunction psi = psi0;
  const double norm0 = trapezoid_norm(psi0);
  if (!(norm0 > 0.0)) throw std::invalid_argument("propagate: initial state has zero norm");

  EvolutionSeries series;
  series.times.reserve(steps + 1);
  auto record = [&](double t) {
    series.times.push_back(t);
    series.norms.push_back(trapezoid_norm2(psi));
    series.positions.push_back(expectation_y(psi));
    const double denom = norm0 * trapezoid_norm(psi);
    series.overlaps.push_back(std::abs(trapezoid_inner(psi0, psi)) / denom);
  };
  record(0.0);

  std::vector<Complex> rhs(static_cast<std::size_t>(n));
  for (int k = 1; k <= steps; ++k) {
    for (int i = 0; i < n; ++i) {
      Complex acc = psi.values[static_cast<std::size_t>(i)];
      for (int d = -bw; d <= bw; ++d) {
        const int j = i + d;
        if (j < 0 || j >= n) continue;
        acc -= cmul(cmul(half_step, a(i, j)), psi.values[static_cast<std::size_t>(j)]);
      }
      rhs[static_cast<std::size_t>(i)] = acc;
    }
    lhs.solve(rhs);
    psi.values = rhs;
    record(k * dt);
  }
  series.final_state = std::move(psi);
  return series;
}

inline EvolutionSeries propagate(const OperatorMatrix& op, const WaveFunction& psi0, double dt,
                                 int steps) {
  return propagate_banded(op.mat, op.grid, op.bandwidth, op.params.hbar, psi0, dt, steps);
}

// Least-squares slope of ln ||psi(t)||^2 versus t. The first 10 samples are
// excluded as the transient of the rational stepping approximation.
inline double growth_rate(const EvolutionSeries& series) {
  constexpr std::size_t kSkip = 10;
  if (series.times.size() < kSkip + 2)
    throw DegenerateFitError("growth-rate fit needs more than " + std::to_string(kSkip + 1) +
                             " samples");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t count = 0;
  for (std::size_t k = kSkip; k < series.times.size(); ++k) {
    if (!(series.norms[k] > 0.0))
      throw std::invalid_argument("growth-rate fit needs positive norms");
    const double t = series.times[k];
    const double y = std::log(series.norms[k]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  const double denom = count * stt - st * st;
  if (denom == 0.0) throw DegenerateFitError("growth-rate fit: all times equal");
  return (count * sty - st * sy) / denom;
}

// CSV: header "t,norm2,exp_y,overlap".
inline void write_series_csv(const EvolutionSeries& series, std::ostream& os) {
  os << "t,norm2,exp_y,overlap\n";
  char buf[160];
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", series.times[k], series.norms[k],
                  series.positions[k], series.overlaps[k]);
    os << buf << "\n";
  }
}

}  // namespace dho
