#include <catch2/catch.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dho/analytic.hpp"
#include "dho/discretize.hpp"
#include "dho/eigensolve.hpp"
#include "dho/errors.hpp"
#include "dho/tolerances.hpp"

using namespace dho;

namespace {

PhysParams standard_params() {
  PhysParams p;
  p.lambda = 0.5;
  return p;
}

ComplexMatrix random_matrix(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return a;
}

// greedy nearest-neighbour pairing; returns the worst distance
double match_sets(std::vector<Complex> a, const std::vector<Complex>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (const Complex& z : b) {
    std::size_t best = 0;
    double dist = std::abs(a[0] - z);
    for (std::size_t i = 1; i < a.size(); ++i) {
      const double d = std::abs(a[i] - z);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    worst = std::max(worst, dist);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

}  // namespace

TEST_CASE("eig_diagonal_matrix_is_exact") {
  ComplexMatrix d(2);
  d(0, 0) = Complex(1.0, 2.0);
  d(1, 1) = Complex(3.0, 0.0);
  Spectrum s = eig(d);
  CHECK(s.eigenvalues[0] == Complex(1.0, 2.0));
  CHECK(s.eigenvalues[1] == Complex(3.0, 0.0));
}

TEST_CASE("eig_companion_of_the_classical_equation") {
  // [[0, 1], [-1, -lambda]] with omega = 1: roots -lambda/2 +- i sqrt(1 - lambda^2/4)
  const double lambda = 0.5;
  ComplexMatrix c(2);
  c(0, 1) = 1.0;
  c(1, 0) = -1.0;
  c(1, 1) = -lambda;
  Spectrum s = eig(c);
  const double re = -lambda / 2.0;
  const double im = std::sqrt(1.0 - lambda * lambda / 4.0);
  CHECK(match_sets(s.eigenvalues, {Complex(re, im), Complex(re, -im)}) <= 1e-14);
}

TEST_CASE("eig_hermitian_input_has_real_spectrum") {
  PhysParams p;
  p.lambda = 0.0;
  Grid grid = make_grid(10.0, 200);
  Spectrum s = eig(assemble(p, grid, MatrixForm::EQ5));
  for (const Complex& z : s.eigenvalues) CHECK(std::abs(z.imag()) <= 1e-10);
}

TEST_CASE("eig_matches_the_reference_solver_on_random_matrices") {
  std::mt19937 rng(101);
  for (int n : {5, 12, 24, 40}) {
    ComplexMatrix a = random_matrix(rng, n);
    Eigen::MatrixXcd e(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) e(i, j) = a(i, j);
    Spectrum s = eig(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(e);
    REQUIRE(es.info() == Eigen::Success);
    std::vector<Complex> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
    CHECK(match_sets(s.eigenvalues, ref) <= 1e-11 * std::max(1.0, a.max_abs()) * n);
  }
}

TEST_CASE("eig_eigenvector_backward_error_contract") {
  // ||A v - lambda v|| <= 1e-10 ||A|| per converged pair
  std::mt19937 rng(103);
  for (int n : {6, 20, 40}) {
    ComplexMatrix a = random_matrix(rng, n);
    Spectrum s = eig(a, true);
    REQUIRE(s.eigenvectors.has_value());
    const double anorm = a.max_abs();
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> v(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (*s.eigenvectors)(i, j);
      const std::vector<Complex> av = a.apply(v);
      double r2 = 0.0;
      double v2 = 0.0;
      for (int i = 0; i < n; ++i) {
        r2 += std::norm(av[static_cast<std::size_t>(i)] -
                        s.eigenvalues[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)]);
        v2 += std::norm(v[static_cast<std::size_t>(i)]);
      }
      CHECK(std::sqrt(v2) == Approx(1.0).epsilon(1e-12));
      CHECK(std::sqrt(r2) <= 1e-10 * anorm);
    }
  }
}

TEST_CASE("eig_is_deterministic") {
  std::mt19937 rng(107);
  ComplexMatrix a = random_matrix(rng, 30);
  Spectrum s1 = eig(a);
  Spectrum s2 = eig(a);
  for (int i = 0; i < 30; ++i)
    CHECK(s1.eigenvalues[static_cast<std::size_t>(i)] ==
          s2.eigenvalues[static_cast<std::size_t>(i)]);
}

TEST_CASE("eig_trace_identity") {
  std::mt19937 rng(109);
  ComplexMatrix a = random_matrix(rng, 60);
  Spectrum s = eig(a);
  Complex sum = 0.0;
  for (const Complex& z : s.eigenvalues) sum += z;
  CHECK(std::abs(sum - a.trace()) <= 1e-8 * a.max_abs() * 60);

  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 240);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ2);
  Spectrum so = eig(op);
  Complex sum2 = 0.0;
  for (const Complex& z : so.eigenvalues) sum2 += z;
  CHECK(std::abs(sum2 - op.mat.trace()) <= 1e-8 * op.mat.max_abs() * 240);
}

TEST_CASE("eig_precondition_checks") {
  CHECK_THROWS_AS(eig(ComplexMatrix(1)), std::invalid_argument);
  ComplexMatrix bad(3);
  bad(1, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(eig(bad), std::invalid_argument);
}

TEST_CASE("eig_sorting_is_by_real_then_imaginary_part") {
  ComplexMatrix d(4);
  d(0, 0) = Complex(2.0, -1.0);
  d(1, 1) = Complex(1.0, 5.0);
  d(2, 2) = Complex(1.0, -5.0);
  d(3, 3) = Complex(0.5, 0.0);
  Spectrum s = eig(d);
  CHECK(s.eigenvalues[0] == Complex(0.5, 0.0));
  CHECK(s.eigenvalues[1] == Complex(1.0, -5.0));
  CHECK(s.eigenvalues[2] == Complex(1.0, 5.0));
  CHECK(s.eigenvalues[3] == Complex(2.0, -1.0));
}

TEST_CASE("grid_refinement_converges_at_second_order") {
  // lambda = 0 ground state: error drops ~4x when h halves
  PhysParams p;
  p.lambda = 0.0;
  Grid coarse = make_grid(10.0, 150);
  Grid fine = make_grid(10.0, 299);  // exactly half the spacing
  REQUIRE(fine.spacing == Approx(coarse.spacing / 2.0).epsilon(1e-14));
  const double e_coarse = eig(assemble(p, coarse, MatrixForm::EQ5)).eigenvalues[0].real();
  const double e_fine = eig(assemble(p, fine, MatrixForm::EQ5)).eigenvalues[0].real();
  const double err_coarse = std::abs(e_coarse - 0.5);
  const double err_fine = std::abs(e_fine - 0.5);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("match_levels_pairs_and_reports") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 300);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  Spectrum s = eig(op);
  LevelReport report = match_levels(s, op, 8);
  REQUIRE(report.levels.size() == 8u);
  CHECK(report.form == MatrixForm::EQ5);
  for (int n = 0; n < 8; ++n) {
    const LevelEntry& e = report.levels[static_cast<std::size_t>(n)];
    CHECK(e.n == n);
    CHECK(e.analytic == complex_eigenvalue(n, p).value());
    CHECK(e.abs_error ==
          Approx(std::abs(e.numeric - e.analytic)).margin(0.0));
    // h^2-scaled discretization bound (first-order perturbation estimate)
    CHECK(e.abs_error <= 1.2 * fd_level_error_estimate(p, grid, n) + 1e-12);
    CHECK(std::abs(e.numeric.imag() - 0.125) <= 1e-12);
  }
  CHECK(report.imag_offset_mean == Approx(0.125).margin(1e-12));
}

TEST_CASE("match_levels_regime_and_argument_errors") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 64);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  Spectrum s = eig(op);
  PhysParams over = p;
  over.lambda = 2.5;
  CHECK_THROWS_AS(match_levels(s, over, 4, grid), RegimeError);
  CHECK_THROWS_AS(match_levels(s, p, 13, grid), std::invalid_argument);
  CHECK_THROWS_AS(match_levels(s, p, 0, grid), std::invalid_argument);
}

TEST_CASE("match_levels_rejects_spectra_without_enough_trusted_levels") {
  // a tiny box: all levels sit above the trust threshold 0.25 m w^2 L^2
  PhysParams p = standard_params();
  Grid grid = make_grid(1.0, 32);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  Spectrum s = eig(op);
  CHECK_THROWS_AS(match_levels(s, op, 12), MismatchError);
}

TEST_CASE("residual_of_numerical_eigenpairs_meets_the_solver_contract") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 160);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  Spectrum s = eig(op, true);
  REQUIRE(s.eigenvectors.has_value());
  WaveFunction psi(grid);
  for (int i = 0; i < grid.points; ++i)
    psi.values[static_cast<std::size_t>(i)] = (*s.eigenvectors)(i, 0);
  CHECK(residual(op, psi, s.eigenvalues[0]) <= 1e-10);

  // with eigenvectors on hand, the level report carries per-level residuals
  LevelReport report = match_levels(s, op, 4);
  for (const LevelEntry& e : report.levels) {
    REQUIRE(e.residual.has_value());
    CHECK(*e.residual <= 1e-10);
  }
}

TEST_CASE("residual_of_analytic_eigenfunctions") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 1200);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  WaveFunction psi0 = eigenfunction(0, p, grid);
  const Complex e0 = complex_eigenvalue(0, p).value();
  CHECK(residual(op, psi0, e0) <= 1e-3);

  // halving h cuts the residual ~4x
  Grid fine = make_grid(10.0, 2399);
  OperatorMatrix op_fine = assemble(p, fine, MatrixForm::EQ5);
  const double r_coarse = residual(op, psi0, e0);
  const double r_fine = residual(op_fine, eigenfunction(0, p, fine), e0);
  CHECK(r_coarse / r_fine >= 3.0);
  CHECK(r_coarse / r_fine <= 5.0);

  // wrong energy: residual jumps to the spectral-gap scale
  const Complex e1 = complex_eigenvalue(1, p).value();
  CHECK(residual(op, psi0, e1) >= p.Omega() / 2.0);
}

TEST_CASE("residual_dimension_mismatch") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 64);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  WaveFunction psi(make_grid(10.0, 32));
  CHECK_THROWS_AS(residual(op, psi, Complex(0.0)), std::invalid_argument);
}

TEST_CASE("eq2_and_eq5_trusted_levels_agree_within_the_defect_bound") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 240);
  Spectrum s2 = eig(assemble(p, grid, MatrixForm::EQ2));
  Spectrum s5 = eig(assemble(p, grid, MatrixForm::EQ5));
  const double bound = tol::kFormAgreementBase +
                       0.25 * p.lambda * commutator_defect_with_boundary(grid, p);
  for (int n = 0; n < 5; ++n)
    CHECK(std::abs(s2.eigenvalues[static_cast<std::size_t>(n)] -
                   s5.eigenvalues[static_cast<std::size_t>(n)]) <= bound);
}

TEST_CASE("lambda_sweep_real_parts_decrease") {
  // Re E_0 tracks Omega downward as damping grows
  Grid grid = make_grid(10.0, 240);
  double previous = 1e300;
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 1.9}) {
    PhysParams p;
    p.lambda = lambda;
    Spectrum s = eig(assemble(p, grid, MatrixForm::EQ5));
    const double re0 = s.eigenvalues[0].real();
    CHECK(re0 < previous);
    previous = re0;
  }
}

TEST_CASE("gauge_conjugated_matrix_is_isospectral") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 240);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  ComplexMatrix conj = gauge_conjugate_matrix(op.mat, grid, p);
  Spectrum before = eig(op);
  Spectrum after = eig(conj);
  for (int n = 0; n < 8; ++n)
    CHECK(std::abs(before.eigenvalues[static_cast<std::size_t>(n)] -
                   after.eigenvalues[static_cast<std::size_t>(n)]) <= tol::kGaugeSpectrumAbs);

  // Hermitian part carries the reduced-frequency oscillator levels
  Spectrum herm = eig(hermitian_part(conj));
  for (int n = 0; n < 8; ++n) {
    const double expected = (n + 0.5) * p.hbar * p.Omega();
    CHECK(std::abs(herm.eigenvalues[static_cast<std::size_t>(n)] - Complex(expected)) <=
          tol::kGaugeOscillatorMargin * fd_level_error_estimate(p, grid, n));
  }
}

TEST_CASE("level_report_json_is_deterministic_and_ordered") {
  PhysParams p = standard_params();
  Grid grid = make_grid(10.0, 300);
  OperatorMatrix op = assemble(p, grid, MatrixForm::EQ5);
  Spectrum s = eig(op);
  LevelReport report = match_levels(s, op, 4);
  const std::string a = level_report_json(report);
  const std::string b = level_report_json(report);
  CHECK(a == b);
  CHECK(a.find("\"params\"") != std::string::npos);
  CHECK(a.find("\"params\"") < a.find("\"grid\""));
  CHECK(a.find("\"grid\"") < a.find("\"form\""));
  CHECK(a.find("\"form\"") < a.find("\"imag_offset_mean\""));
  CHECK(a.find("\"imag_offset_mean\"") < a.find("\"levels\""));
  CHECK(a.find("\"analytic_re\"") < a.find("\"analytic_im\""));
  CHECK(a.find("\"numeric_re\"") < a.find("\"numeric_im\""));
  CHECK(a.find("\"abs_error\"") != std::string::npos);
}
