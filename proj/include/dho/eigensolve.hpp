#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dho/analytic.hpp"
#include "dho/discretize.hpp"
#include "dho/errors.hpp"
#include "dho/matrix.hpp"
#include "dho/wavefunction.hpp"

namespace dho {

// Dense general (non-Hermitian) complex eigensolver: Householder reduction
// to upper Hessenberg form followed by explicit single-shift QR iteration
// with Wilkinson shifts, deflation by negligible-subdiagonal tests, and an
// ad-hoc exceptional shift every 10 stalled iterations. 40 iterations per
// eigenvalue without deflation is a hard failure. When eigenvectors are
// requested the rotations are accumulated into a Schur decomposition and the
// vectors recovered by triangular back-substitution. Everything is plain
// double precision and strictly deterministic.

struct Spectrum {
  // Sorted by ascending real part, ties by ascending imaginary part.
  std::vector<Complex> eigenvalues;
  // Columns aligned with eigenvalues; unit 2-norm. Present only on request.
  std::optional<ComplexMatrix> eigenvectors;
  int iterations = 0;  // total QR sweeps
  int deflations = 0;
};

namespace detail {

// c real, s complex with c^2+|s|^2 = 1 such that
// [c, s; -conj(s), c] * [f; g] = [r; 0].
struct GivensRotation {
  double c = 1.0;
  Complex s = 0.0;
  Complex r = 0.0;
};

inline GivensRotation make_givens(const Complex& f, const Complex& g) {
  GivensRotation rot;
  const double af = std::abs(f);
  const double ag = std::abs(g);
  if (ag == 0.0) {
    rot.c = 1.0;
    rot.s = 0.0;
    rot.r = f;
    return rot;
  }
  if (af == 0.0) {
    rot.c = 0.0;
    rot.s = 1.0;
    rot.r = g;
    return rot;
  }
  const double t = std::hypot(af, ag);
  const Complex phase = f / af;
  rot.c = af / t;
  rot.s = cmul(phase, std::conj(g)) / t;
  rot.r = phase * t;
  return rot;
}

// Eigenvalue of [[a, b], [c, d]] closest to d (Wilkinson shift), computed
// with the cancellation-safe product form.
inline Complex wilkinson_shift(const Complex& a, const Complex& b, const Complex& c,
                               const Complex& d) {
  const Complex x = 0.5 * (a - d);
  const Complex bc = cmul(b, c);
  Complex s = std::sqrt(cmul(x, x) + bc);
  if (x.real() * s.real() + x.imag() * s.imag() < 0.0) s = -s;
  const Complex den = x + s;
  if (den == Complex(0.0)) return d;
  return d - cdiv(bc, den);
}

}  // namespace detail

inline Spectrum eig(const ComplexMatrix& input, bool want_vectors = false) {
  const int n = input.size();
  if (n < 2) throw std::invalid_argument("eig needs dimension >= 2");
  if (!input.all_finite()) throw std::invalid_argument("eig needs finite entries");

  ComplexMatrix h = input;
  ComplexMatrix q;  // Schur vectors, built only when vectors are wanted
  if (want_vectors) q = ComplexMatrix::identity(n);

  // Householder reduction to upper Hessenberg (skipped if already there).
  bool hessenberg = true;
  for (int j = 0; j < n - 2 && hessenberg; ++j)
    for (int i = j + 2; i < n; ++i)
      if (h(i, j) != Complex(0.0)) {
        hessenberg = false;
        break;
      }

  if (!hessenberg) {
    std::vector<Complex> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n - 2; ++k) {
      double xnorm2 = 0.0;
      for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
      if (xnorm2 == 0.0) continue;
      const double xnorm = std::sqrt(xnorm2);
      const Complex x0 = h(k + 1, k);
      const double ax0 = std::abs(x0);
      const Complex phase = ax0 == 0.0 ? Complex(1.0) : x0 / ax0;

      // v = x + phase*|x| e0; P = I - 2 v v^H / (v^H v) sends x to -phase*|x| e0
      v[static_cast<std::size_t>(k + 1)] = x0 + phase * xnorm;
      for (int i = k + 2; i < n; ++i) v[static_cast<std::size_t>(i)] = h(i, k);
      double vnorm2 = 0.0;
      for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
      if (vnorm2 == 0.0) continue;
      const double tau = 2.0 / vnorm2;

      // left: H[k+1:, k:] -= tau * v (v^H H)
      for (int j = k; j < n; ++j) {
        Complex dot = 0.0;
        for (int i = k + 1; i < n; ++i)
          dot += cmul(std::conj(v[static_cast<std::size_t>(i)]), h(i, j));
        dot *= tau;
        for (int i = k + 1; i < n; ++i)
          h(i, j) -= cmul(dot, v[static_cast<std::size_t>(i)]);
      }
      // right: H[:, k+1:] -= tau * (H v) v^H
      for (int i = 0; i < n; ++i) {
        Complex dot = 0.0;
        Complex* hrow = h.row(i);
        for (int j = k + 1; j < n; ++j)
          dot += cmul(hrow[j], v[static_cast<std::size_t>(j)]);
        dot *= tau;
        for (int j = k + 1; j < n; ++j)
          hrow[j] -= cmul(dot, std::conj(v[static_cast<std::size_t>(j)]));
      }
      if (want_vectors) {
        for (int i = 0; i < n; ++i) {
          Complex dot = 0.0;
          Complex* qrow = q.row(i);
          for (int j = k + 1; j < n; ++j)
            dot += cmul(qrow[j], v[static_cast<std::size_t>(j)]);
          dot *= tau;
          for (int j = k + 1; j < n; ++j)
            qrow[j] -= cmul(dot, std::conj(v[static_cast<std::size_t>(j)]));
        }
      }
      for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min() / eps;
  double hnorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j < n; ++j) hnorm = std::max(hnorm, cabs1(h(i, j)));

  Spectrum spec;
  spec.eigenvalues.resize(static_cast<std::size_t>(n));

  std::vector<detail::GivensRotation> rotations(static_cast<std::size_t>(n));
  int active_end = n - 1;
  int iters_this_eigenvalue = 0;

  while (active_end >= 0) {
    // deflation scan: smallest l such that the subdiagonal below l is negligible
    int l = active_end;
    while (l > 0) {
      const double sub = cabs1(h(l, l - 1));
      double scale = cabs1(h(l - 1, l - 1)) + cabs1(h(l, l));
      if (scale == 0.0) scale = hnorm;
      if (sub <= eps * scale || sub <= tiny) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }

    if (l == active_end) {
      spec.eigenvalues[static_cast<std::size_t>(active_end)] = h(active_end, active_end);
      ++spec.deflations;
      --active_end;
      iters_this_eigenvalue = 0;
      continue;
    }

    if (iters_this_eigenvalue >= 40)
      throw ConvergenceError(active_end, iters_this_eigenvalue,
                             "eigenvalue " + std::to_string(active_end) +
                                 " failed to deflate within 40 QR iterations");

    ++iters_this_eigenvalue;
    ++spec.iterations;

    Complex shift;
    if (iters_this_eigenvalue % 10 == 0) {
      // exceptional shift from the subdiagonal magnitudes to break cycling
      double s = std::abs(h(active_end, active_end - 1).real()) +
                 std::abs(h(active_end, active_end - 1).imag());
      if (active_end - 1 > l)
        s += std::abs(h(active_end - 1, active_end - 2).real()) +
             std::abs(h(active_end - 1, active_end - 2).imag());
      shift = h(active_end, active_end) + Complex(0.75 * s, 0.0);
    } else {
      shift = detail::wilkinson_shift(h(active_end - 1, active_end - 1),
                                      h(active_end - 1, active_end),
                                      h(active_end, active_end - 1),
                                      h(active_end, active_end));
    }

    const int u = active_end;
    for (int i = l; i <= u; ++i) h(i, i) -= shift;

    // QR: Givens chain zeroing the subdiagonal
    const int col_end = want_vectors ? n - 1 : u;
    for (int i = l; i < u; ++i) {
      detail::GivensRotation g = detail::make_givens(h(i, i), h(i + 1, i));
      rotations[static_cast<std::size_t>(i)] = g;
      h(i, i) = g.r;
      h(i + 1, i) = 0.0;
      Complex* ri = h.row(i);
      Complex* rj = h.row(i + 1);
      const Complex sc = std::conj(g.s);
      for (int j = i + 1; j <= col_end; ++j) {
        const Complex x = ri[j];
        const Complex y = rj[j];
        ri[j] = g.c * x + cmul(g.s, y);
        rj[j] = g.c * y - cmul(sc, x);
      }
    }

    // RQ: apply the conjugated rotations from the right
    const int row_start = want_vectors ? 0 : l;
    for (int i = l; i < u; ++i) {
      const detail::GivensRotation& g = rotations[static_cast<std::size_t>(i)];
      const Complex sc = std::conj(g.s);
      const int row_end = std::min(i + 1, u);
      for (int r = row_start; r <= row_end; ++r) {
        Complex* hr = h.row(r);
        const Complex x = hr[i];
        const Complex y = hr[i + 1];
        hr[i] = g.c * x + cmul(sc, y);
        hr[i + 1] = g.c * y - cmul(g.s, x);
      }
      if (want_vectors) {
        for (int r = 0; r < n; ++r) {
          Complex* qr = q.row(r);
          const Complex x = qr[i];
          const Complex y = qr[i + 1];
          qr[i] = g.c * x + cmul(sc, y);
          qr[i + 1] = g.c * y - cmul(g.s, x);
        }
      }
    }

    for (int i = l; i <= u; ++i) h(i, i) += shift;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex& za = spec.eigenvalues[static_cast<std::size_t>(a)];
    const Complex& zb = spec.eigenvalues[static_cast<std::size_t>(b)];
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });

  if (want_vectors) {
    // Back-substitution on the triangular factor: for each j solve
    // (T - T_jj) x = 0 with x_j = 1, then map through the Schur basis.
    ComplexMatrix vectors(n);
    std::vector<Complex> x(static_cast<std::size_t>(n));
    const double small = eps * std::max(hnorm, tiny);
    for (int jj = 0; jj < n; ++jj) {
      const int j = order[static_cast<std::size_t>(jj)];
      const Complex lambda = spec.eigenvalues[static_cast<std::size_t>(j)];
      std::fill(x.begin(), x.end(), Complex(0.0));
      x[static_cast<std::size_t>(j)] = 1.0;
      for (int i = j - 1; i >= 0; --i) {
        Complex sum = 0.0;
        const Complex* hrow = h.row(i);
        for (int k = i + 1; k <= j; ++k) sum += cmul(hrow[k], x[static_cast<std::size_t>(k)]);
        Complex d = h(i, i) - lambda;
        if (cabs1(d) < small) d = Complex(small, 0.0);
        x[static_cast<std::size_t>(i)] = cdiv(-sum, d);
      }
      double norm2 = 0.0;
      for (int i = 0; i <= j; ++i) norm2 += std::norm(x[static_cast<std::size_t>(i)]);
      const double scale = 1.0 / std::sqrt(norm2);

      for (int r = 0; r < n; ++r) {
        Complex acc = 0.0;
        const Complex* qrow = q.row(r);
        for (int k = 0; k <= j; ++k) acc += cmul(qrow[k], x[static_cast<std::size_t>(k)]);
        vectors(r, jj) = acc * scale;
      }
    }
    double vn = 0.0;  // final 2-norm fixup per column
    for (int jj = 0; jj < n; ++jj) {
      vn = 0.0;
      for (int r = 0; r < n; ++r) vn += std::norm(vectors(r, jj));
      const double s = 1.0 / std::sqrt(vn);
      for (int r = 0; r < n; ++r) vectors(r, jj) *= s;
    }
    spec.eigenvectors = std::move(vectors);
  }

  std::vector<Complex> sorted(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sorted[static_cast<std::size_t>(i)] =
        spec.eigenvalues[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  spec.eigenvalues = std::move(sorted);
  return spec;
}

inline Spectrum eig(const OperatorMatrix& op, bool want_vectors = false) {
  return eig(op.mat, want_vectors);
}

// ---------------------------------------------------------------------------
// Spectrum vs closed-form comparison

struct LevelEntry {
  int n = 0;
  Complex analytic;
  Complex numeric;
  double abs_error = 0.0;
  std::optional<double> residual;
};

struct LevelReport {
  std::vector<LevelEntry> levels;
  double imag_offset_mean = 0.0;  // mean(Im numeric) over the trusted levels
  PhysParams params;
  std::optional<Grid> grid;
  std::optional<MatrixForm> form;
};

// Relative residual ||A psi - E psi||_2 / ||psi||_2 over interior nodes
// (two excluded at each boundary, where the stencil is truncated).
inline double residual(const ComplexMatrix& a, const WaveFunction& psi, Complex energy) {
  const int n = a.size();
  if (static_cast<int>(psi.values.size()) != n)
    throw std::invalid_argument("residual: matrix/wavefunction dimension mismatch");
  if (n < 5) throw std::invalid_argument("residual needs at least 5 nodes");
  const std::vector<Complex> ap = a.apply(psi.values);
  double rnorm2 = 0.0;
  double pnorm2 = 0.0;
  for (int j = 2; j < n - 2; ++j) {
    rnorm2 += std::norm(ap[static_cast<std::size_t>(j)] -
                        cmul(energy, psi.values[static_cast<std::size_t>(j)]));
    pnorm2 += std::norm(psi.values[static_cast<std::size_t>(j)]);
  }
  if (!(pnorm2 > 0.0)) throw std::invalid_argument("residual of zero wavefunction");
  return std::sqrt(rnorm2 / pnorm2);
}

inline double residual(const OperatorMatrix& op, const WaveFunction& psi, Complex energy) {
  if (!(psi.grid == op.grid))
    throw std::invalid_argument("residual: wavefunction grid does not match matrix grid");
  return residual(op.mat, psi, energy);
}

// Pairs the k lowest-real-part eigenvalues with the analytic levels
// E_0..E_{k-1}. Levels with Re above 0.5*(m w^2 L^2/2) sit against the box
// wall and are discretization artifacts, so a spectrum with fewer than k
// levels under that threshold is rejected.
inline LevelReport match_levels(const Spectrum& spectrum, const PhysParams& params, int k,
                                const Grid& grid) {
  params.validate();
  if (k < 1 || k > 12) throw std::invalid_argument("trusted level count must be in 1..12");
  if (params.lambda >= 2.0 * params.omega)
    throw RegimeError("level matching requires the underdamped regime");

  const double trust_threshold =
      0.5 * (params.m * params.omega * params.omega * grid.half_width * grid.half_width / 2.0);
  int below = 0;
  for (const Complex& z : spectrum.eigenvalues)
    if (z.real() < trust_threshold) ++below;
  if (below < k)
    throw MismatchError("only " + std::to_string(below) + " of " + std::to_string(k) +
                        " requested levels lie below the box-state threshold");

  LevelReport report;
  report.params = params;
  report.grid = grid;
  double imag_sum = 0.0;
  for (int n = 0; n < k; ++n) {
    LevelEntry e;
    e.n = n;
    e.analytic = complex_eigenvalue(n, params).value();
    e.numeric = spectrum.eigenvalues[static_cast<std::size_t>(n)];
    e.abs_error = std::abs(e.numeric - e.analytic);
    imag_sum += e.numeric.imag();
    report.levels.push_back(e);
  }
  report.imag_offset_mean = imag_sum / k;
  return report;
}

inline LevelReport match_levels(const Spectrum& spectrum, const OperatorMatrix& op, int k) {
  LevelReport r = match_levels(spectrum, op.params, k, op.grid);
  r.form = op.form;
  if (spectrum.eigenvectors) {
    const int n = op.mat.size();
    for (LevelEntry& entry : r.levels) {
      WaveFunction v(op.grid);
      for (int i = 0; i < n; ++i)
        v.values[static_cast<std::size_t>(i)] = (*spectrum.eigenvectors)(i, entry.n);
      entry.residual = residual(op.mat, v, entry.numeric);
    }
  }
  return r;
}

// Fixed field order and %.17g floats: byte-identical reruns.
inline std::string level_report_json(const LevelReport& report) {
  char buf[400];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "{\n";
  os << "  \"params\": {\"m\": " << num(report.params.m)
     << ", \"hbar\": " << num(report.params.hbar)
     << ", \"omega\": " << num(report.params.omega)
     << ", \"lambda\": " << num(report.params.lambda) << "},\n";
  if (report.grid)
    os << "  \"grid\": {\"L\": " << num(report.grid->half_width)
       << ", \"N\": " << report.grid->points << "},\n";
  if (report.form) os << "  \"form\": \"" << form_name(*report.form) << "\",\n";
  os << "  \"imag_offset_mean\": " << num(report.imag_offset_mean) << ",\n";
  os << "  \"levels\": [\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const LevelEntry& e = report.levels[i];
    os << "    {\"n\": " << e.n << ", \"analytic_re\": " << num(e.analytic.real())
       << ", \"analytic_im\": " << num(e.analytic.imag())
       << ", \"numeric_re\": " << num(e.numeric.real())
       << ", \"numeric_im\": " << num(e.numeric.imag())
       << ", \"abs_error\": " << num(e.abs_error) << "}"
       << (i + 1 < report.levels.size() ? "," : "") << "\n";
  }
  os << "  ]\n";
  os << "}\n";
  return os.str();
}

}  // namespace dho
