#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dho/grid.hpp"
#include "dho/matrix.hpp"
#include "dho/params.hpp"

namespace dho {

// Finite-difference realization of the damped-oscillator Hamiltonian on a
// uniform Dirichlet grid, second-order central differences throughout.
// Both construction forms share the same kinetic block
//   K = -(hbar^2/2m) * (f_{j+1} - 2 f_j + f_{j-1}) / h^2,
// so their difference is exactly the finite commutator defect
//   EQ2 - EQ5 = (lambda/4) ([Y,P] - i hbar I),
// mirroring the symbolic reordering step entry by entry.

enum class MatrixForm { EQ2, EQ5 };

inline const char* form_name(MatrixForm f) { return f == MatrixForm::EQ2 ? "EQ2" : "EQ5"; }

struct OperatorMatrix {
  ComplexMatrix mat;
  MatrixForm form = MatrixForm::EQ5;
  Grid grid;
  PhysParams params;
  int bandwidth = 1;
};

// P = -i hbar * central difference: +-1/(2h) on the first off-diagonals.
// Exactly Hermitian by construction.
inline ComplexMatrix momentum_matrix(const Grid& grid, const PhysParams& params) {
  params.validate();
  const int n = grid.points;
  const double c = params.hbar / (2.0 * grid.spacing);
  ComplexMatrix p(n);
  for (int j = 0; j + 1 < n; ++j) {
    p(j, j + 1) = Complex(0.0, -c);
    p(j + 1, j) = Complex(0.0, c);
  }
  return p;
}

// Diagonal node matrix Y.
inline ComplexMatrix position_matrix(const Grid& grid) {
  ComplexMatrix y(grid.points);
  for (int j = 0; j < grid.points; ++j) y(j, j) = grid.node(j);
  return y;
}

inline OperatorMatrix assemble(const PhysParams& params, const Grid& grid, MatrixForm form) {
  params.validate();
  const int n = grid.points;
  const double h = grid.spacing;
  const double kin = params.hbar * params.hbar / (2.0 * params.m * h * h);
  const double lam = params.lambda;
  const double pc = params.hbar / (2.0 * h);  // |off-diagonal of P|

  OperatorMatrix op;
  op.form = form;
  op.grid = grid;
  op.params = params;
  op.bandwidth = 1;
  op.mat = ComplexMatrix(n);
  ComplexMatrix& a = op.mat;

  // shared kinetic block
  for (int j = 0; j < n; ++j) {
    a(j, j) = 2.0 * kin;
    if (j + 1 < n) {
      a(j, j + 1) = -kin;
      a(j + 1, j) = -kin;
    }
  }

  const double w2 = params.omega * params.omega;

  if (form == MatrixForm::EQ2) {
    // (m w^2 / 2) Y^2 + (lambda/2) Y*P, the damping product in that order.
    const double v = 0.5 * params.m * w2;
    for (int j = 0; j < n; ++j) {
      const double y = grid.node(j);
      a(j, j) += v * (y * y);
      if (lam != 0.0) {
        if (j + 1 < n) a(j, j + 1) += Complex(0.0, -0.5 * lam * y * pc);
        if (j > 0) a(j, j - 1) += Complex(0.0, 0.5 * lam * y * pc);
      }
    }
  } else {
    // (lambda/4)(P Y + Y P) + [(m/2)(w^2 - lambda^2/4) + m lambda^2/8] Y^2
    // + (i hbar lambda / 4) I: every block Hermitian except the explicit
    // constant, so the anti-Hermitian part is (i hbar lambda/4) I exactly.
    // The potential pieces stay separate so that at lambda = 0 this reduces
    // bit-for-bit to the EQ2 matrix.
    const double v1 = 0.5 * params.m * (w2 - lam * lam / 4.0);
    const double v2 = params.m * lam * lam / 8.0;
    for (int j = 0; j < n; ++j) {
      const double y = grid.node(j);
      a(j, j) += v1 * (y * y);
      if (lam != 0.0) {
        a(j, j) += v2 * (y * y);
        a(j, j) += Complex(0.0, params.hbar * lam / 4.0);
        if (j + 1 < n) {
          const double ysum = y + grid.node(j + 1);
          a(j, j + 1) += Complex(0.0, -0.25 * lam * ysum * pc);
          a(j + 1, j) += Complex(0.0, 0.25 * lam * ysum * pc);
        }
      }
    }
  }
  return op;
}

namespace detail {

// max over rows [row_begin, row_end) of |sum_k ([Y,P] - i hbar I)_{jk}|.
// On a uniform grid the interior row sums cancel exactly; only truncated
// boundary rows keep a defect of order hbar/2.
inline double commutator_row_defect(const Grid& grid, const PhysParams& params,
                                    int row_begin, int row_end) {
  const ComplexMatrix p = momentum_matrix(grid, params);
  const int n = grid.points;
  double worst = 0.0;
  for (int j = row_begin; j < row_end; ++j) {
    Complex sum = 0.0;
    for (int k = std::max(0, j - 1); k <= std::min(n - 1, j + 1); ++k)
      sum += (grid.node(j) - grid.node(k)) * p(j, k);
    sum -= Complex(0.0, params.hbar);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

}  // namespace detail

// Interior defect (two rows excluded at each boundary); exactly 0 for a
// uniform grid up to rounding.
inline double commutator_defect(const Grid& grid, const PhysParams& params) {
  if (grid.points < 5) throw std::invalid_argument("grid too small for interior rows");
  return detail::commutator_row_defect(grid, params, 2, grid.points - 2);
}

// Same deviation over all rows; picks up the hbar/2 boundary defect and
// bounds the spectral disagreement between the two assembly forms.
inline double commutator_defect_with_boundary(const Grid& grid, const PhysParams& params) {
  return detail::commutator_row_defect(grid, params, 0, grid.points);
}

// First-order estimate of the finite-difference error of trusted level n:
// the kinetic stencil error -(hbar^2/2m)(h^2/12) d^4 evaluated in the
// dressed eigenstate gives (h^2 / 24 m hbar^2) <pi^4> with pi = p - (m
// lambda/2) y and <pi^4> = (3/4)(2n^2+2n+1) s^4, s^2 = (m lambda/2)^2
// hbar/(m Omega) + m hbar Omega. Matches the lambda = 0 measurement to
// three digits and bounds the damped case from above (the cross-term
// correction only reduces it).
inline double fd_level_error_estimate(const PhysParams& params, const Grid& grid, int n) {
  const double Omega = params.Omega();
  const double c = params.m * params.lambda / 2.0;
  const double s2 = c * c * params.hbar / (params.m * Omega) + params.m * params.hbar * Omega;
  const double pi4 = 0.75 * (2.0 * n * n + 2.0 * n + 1.0) * s2 * s2;
  const double h2 = grid.spacing * grid.spacing;
  return h2 / (24.0 * params.m * params.hbar * params.hbar) * pi4;
}

// Similarity transform by the diagonal unitary U = diag(exp(i m lambda
// y_j^2 / 4 hbar)) — the grid-level gauge map. Preserves the band structure
// and the spectrum; the anti-Hermitian part of an EQ5 matrix stays exactly
// (i hbar lambda/4) I because the diagonal is untouched.
inline ComplexMatrix gauge_conjugate_matrix(const ComplexMatrix& a, const Grid& grid,
                                            const PhysParams& params) {
  if (a.size() != grid.points) throw std::invalid_argument("matrix/grid dimension mismatch");
  const int n = a.size();
  std::vector<Complex> u(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double theta = params.m * params.lambda * grid.node(j) * grid.node(j) /
                         (4.0 * params.hbar);
    u[static_cast<std::size_t>(j)] = Complex(std::cos(theta), std::sin(theta));
  }
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = cmul(cmul(u[static_cast<std::size_t>(i)], a(i, j)),
                       std::conj(u[static_cast<std::size_t>(j)]));
  return out;
}

// Plain-text export: "# N <N> form <EQ2|EQ5>" then row-major "re im" pairs,
// one matrix row per line, full round-trip precision.
inline void export_matrix(const OperatorMatrix& op, std::ostream& os) {
  const int n = op.mat.size();
  os << "# N " << n << " form " << form_name(op.form) << "\n";
  char buf[64];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex& z = op.mat(i, j);
      std::snprintf(buf, sizeof buf, "%.17g %.17g", z.real(), z.imag());
      os << buf << (j + 1 < n ? " " : "");
    }
    os << "\n";
  }
}

}  // namespace dho
