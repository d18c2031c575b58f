// Acceptance suite: runs every verification criterion at the standard
// parameters and prints one PASS/FAIL line per criterion. Exits nonzero if
// any criterion fails. Expected wall time is dominated by three dense
// N = 1200 diagonalizations (a few seconds each in a release build).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "dho/analytic.hpp"
#include "dho/commands.hpp"
#include "dho/config.hpp"
#include "dho/discretize.hpp"
#include "dho/dynamics.hpp"
#include "dho/eigensolve.hpp"
#include "dho/evolve.hpp"
#include "dho/tolerances.hpp"
#include "dho/weyl.hpp"

using namespace dho;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

PhysParams standard_params() {
  PhysParams p;
  p.lambda = 0.5;
  return p;
}

Rational random_positive(std::mt19937& rng, int hi = 6, int den_hi = 4) {
  std::uniform_int_distribution<int> num(1, hi);
  std::uniform_int_distribution<int> den(1, den_hi);
  return Rational(num(rng), den(rng));
}

// 1. exact symbolic identity suite at 20 randomized rational parameter sets
void criterion_1() {
  std::mt19937 rng(2718);
  bool ok = true;
  std::string failure;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    SymbolicParams sp;
    sp.m = random_positive(rng);
    sp.omega = random_positive(rng);
    sp.hbar = random_positive(rng);
    std::uniform_int_distribution<int> lam_num(0, 6);
    std::uniform_int_distribution<int> lam_den(1, 4);
    sp.lambda = Rational(lam_num(rng), lam_den(rng));

    const Rational sigma = sp.m * sp.lambda * Rational(1, 4);
    const OperatorPoly h2 = build_hamiltonian(sp, HamiltonianForm::EQ2);
    const OperatorPoly h4 = build_hamiltonian(sp, HamiltonianForm::EQ4);
    const OperatorPoly h5 = build_hamiltonian(sp, HamiltonianForm::EQ5);
    if (!(h2 == h4 && h4 == h5)) {
      ok = false;
      failure = "form equality";
      break;
    }

    const auto [herm, anti] = split_hermitian(h2, sp.hbar);
    const OperatorPoly anti_expected = OperatorPoly::constant(
        RationalComplex{Rational(0), sp.hbar * sp.lambda * Rational(1, 4)});
    if (anti != anti_expected || herm + anti != h2) {
      ok = false;
      failure = "hermitian split";
      break;
    }

    OperatorPoly reduced = OperatorPoly::monomial(0, 2, Rational(1, 2) / sp.m);
    reduced += OperatorPoly::monomial(
        2, 0,
        RationalComplex{Rational(1, 2) * sp.m *
                        (sp.omega * sp.omega - Rational(1, 4) * sp.lambda * sp.lambda)});
    reduced += OperatorPoly::constant(
        RationalComplex{Rational(0), sp.hbar * sp.lambda * Rational(1, 4)});
    if (gauge_conjugate(h2, sigma, sp.hbar) != reduced) {
      ok = false;
      failure = "gauge conjugation of H";
      break;
    }

    const OperatorPoly shifted =
        OperatorPoly::p() + OperatorPoly::monomial(1, 0, Rational(1, 2) * sp.m * sp.lambda);
    if (gauge_conjugate(shifted, sigma, sp.hbar) != OperatorPoly::p()) {
      ok = false;
      failure = "gauge conjugation of the shifted momentum";
      break;
    }

    const OperatorPoly yp = normal_order_mul(OperatorPoly::y(), OperatorPoly::p(), sp.hbar);
    if (adjoint(yp, sp.hbar) !=
        yp - OperatorPoly::constant(RationalComplex{Rational(0), sp.hbar})) {
      ok = false;
      failure = "adjoint identity";
      break;
    }
  }
  report(1, ok, "symbolic identity suite",
         ok ? "all five identities exact at 20 randomized rational parameter sets"
            : "failed: " + failure);
}

// 2+3. spectrum reproduction and the imaginary-offset verdict
void criteria_2_and_3(const LevelReport& report5, const PhysParams& params) {
  const double imag_target = params.hbar * params.lambda / 4.0;  // 0.125
  double worst_rel = 0.0;
  double worst_imag = 0.0;
  for (const LevelEntry& e : report5.levels) {
    worst_rel = std::max(worst_rel, std::abs(e.numeric - e.analytic) / std::abs(e.analytic));
    worst_imag = std::max(worst_imag, std::abs(e.numeric.imag() - imag_target));
  }
  const bool ok2 = worst_rel <= tol::kLevelRelError && worst_imag <= tol::kImagAbsError;
  report(2, ok2, "spectrum reproduction (EQ5, N=1200, k=8)",
         "max relative level error " + fmt(worst_rel) + " (tol " + fmt(tol::kLevelRelError) +
             "), max |Im - 0.125| " + fmt(worst_imag) + " (tol " + fmt(tol::kImagAbsError) + ")");

  const double mean_dev = std::abs(report5.imag_offset_mean - imag_target);
  const double mean_vs_zero = std::abs(report5.imag_offset_mean);
  const bool ok3 = mean_dev <= tol::kImagAbsError && mean_vs_zero > 10.0 * tol::kImagAbsError;
  report(3, ok3, "imaginary-offset discrepancy",
         "mean Im = " + fmt(report5.imag_offset_mean) + " matches hbar*lambda/4 within " +
             fmt(mean_dev) + "; a real spectrum (offset 0) is excluded by " + fmt(mean_vs_zero) +
             " — complex-spectrum claim confirmed");
}

// 4. EQ2/EQ5 equivalence: trusted spectra and the exact matrix identity
void criterion_4(const Spectrum& s2, const Spectrum& s5, const PhysParams& params,
                 const Grid& grid) {
  const double defect = commutator_defect_with_boundary(grid, params);
  const double bound = tol::kFormAgreementBase + 0.25 * params.lambda * defect;
  double worst_level = 0.0;
  for (int n = 0; n < 8; ++n)
    worst_level = std::max(worst_level,
                           std::abs(s2.eigenvalues[static_cast<std::size_t>(n)] -
                                    s5.eigenvalues[static_cast<std::size_t>(n)]));

  const OperatorMatrix eq2 = assemble(params, grid, MatrixForm::EQ2);
  const OperatorMatrix eq5 = assemble(params, grid, MatrixForm::EQ5);
  const ComplexMatrix y = position_matrix(grid);
  const ComplexMatrix p = momentum_matrix(grid, params);
  const int n = grid.points;
  double worst_entry = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // [Y,P] is tridiagonal with entries (y_i - y_j) P_ij
      const Complex comm = (y(i, i) - y(j, j)) * p(i, j);
      const Complex rhs =
          0.25 * params.lambda * (comm - (i == j ? Complex(0.0, params.hbar) : Complex(0.0)));
      const Complex lhs = eq2.mat(i, j) - eq5.mat(i, j);
      worst_entry = std::max(worst_entry, std::abs(lhs - rhs));
    }

  const bool ok = worst_level <= bound && worst_entry <= tol::kFormIdentityAbs;
  report(4, ok, "form equivalence (EQ2 vs EQ5)",
         "trusted levels agree within " + fmt(worst_level) + " (bound " + fmt(bound) +
             "); matrix identity EQ2 - EQ5 = (lambda/4)([Y,P] - i hbar I) entrywise to " +
             fmt(worst_entry));
}

// 5. analytic eigenfunction residuals and their h^2 scaling
void criterion_5(const OperatorMatrix& op, const PhysParams& params, const Grid& grid) {
  Grid fine = make_grid(grid.half_width, 2 * grid.points - 1);  // exactly h/2
  OperatorMatrix op_fine = assemble(params, fine, MatrixForm::EQ5);
  double worst = 0.0;
  double worst_ratio_low = 1e300;
  double worst_ratio_high = 0.0;
  for (int level = 0; level <= 5; ++level) {
    const Complex energy = complex_eigenvalue(level, params).value();
    const double r_coarse = residual(op, eigenfunction(level, params, grid), energy);
    const double r_fine = residual(op_fine, eigenfunction(level, params, fine), energy);
    worst = std::max(worst, r_coarse);
    const double ratio = r_coarse / r_fine;
    worst_ratio_low = std::min(worst_ratio_low, ratio);
    worst_ratio_high = std::max(worst_ratio_high, ratio);
  }
  const bool ok = worst <= tol::kResidualMax && worst_ratio_low >= tol::kResidualRatioLow &&
                  worst_ratio_high <= tol::kResidualRatioHigh;
  report(5, ok, "eigenfunction residuals (n <= 5)",
         "max interior relative residual " + fmt(worst) + " (tol " + fmt(tol::kResidualMax) +
             "); halving h scales residuals by " + fmt(worst_ratio_low) + ".." +
             fmt(worst_ratio_high) + " (expected ~4)");
}

// 6. norm growth: eigenstate slope lambda/2, Hermitian control flat
void criterion_6(const OperatorMatrix& op, const PhysParams& params, const Grid& grid) {
  const WaveFunction psi0 = eigenfunction(0, params, grid);
  const EvolutionSeries series = propagate(op, psi0, 1e-3, 5000);
  const double slope = growth_rate(series);
  const double target = params.lambda / 2.0;
  const double rel = std::abs(slope - target) / target;

  PhysParams hermitian = params;
  hermitian.lambda = 0.0;
  const OperatorMatrix op0 = assemble(hermitian, grid, MatrixForm::EQ5);
  const EvolutionSeries control = propagate(op0, eigenfunction(0, hermitian, grid), 1e-3, 5000);
  const double slope0 = growth_rate(control);

  const bool ok = rel <= tol::kGrowthRelError && std::abs(slope0) <= tol::kGrowthZeroAbs;
  report(6, ok, "norm growth rate (dt=1e-3, 5000 steps)",
         "fitted slope " + fmt(slope) + " vs lambda/2 = " + fmt(target) + " (rel err " +
             fmt(rel) + ", tol " + fmt(tol::kGrowthRelError) + "); lambda=0 control slope " +
             fmt(slope0) + " (tol " + fmt(tol::kGrowthZeroAbs) + ")");
}

// 7. classical cross-check: RK4 vs closed form plus the spectrum identities
void criterion_7(const PhysParams& params) {
  const InitialCondition ic{1.0, 0.0};
  const Trajectory traj = integrate_rk4(params, ic, 20.0, 1e-3);
  double max_dq = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto [q, v] = closed_form(params, ic, traj.times[k]);
    (void)v;
    max_dq = std::max(max_dq, std::abs(traj.positions[k] - q));
  }

  const double omega_d = params.Omega();
  const ComplexEnergy e0 = complex_eigenvalue(0, params);
  const ComplexEnergy e1 = complex_eigenvalue(1, params);
  const double spacing = (e1.re - e0.re) / params.hbar;
  const double eps = std::numeric_limits<double>::epsilon();
  const bool freq_ok = std::abs(omega_d - spacing) <= tol::kIdentityUlps * eps * omega_d;
  const bool rate_ok = std::abs(params.lambda / 2.0 - 2.0 * e0.im / params.hbar) <=
                       tol::kIdentityUlps * eps * params.lambda;

  // the CLI report states the dissipation-signature identity; run it here
  RunConfig config;
  config.out_dir =
      (std::filesystem::temp_directory_path() / "dho_acceptance_classical").string();
  std::ostringstream cli_out;
  const int cli_rc = cmd_classical(config, cli_out);
  const bool cli_ok = cli_rc == 0 &&
                      cli_out.str().find("dissipation signature") != std::string::npos &&
                      cli_out.str().find("omega_d") != std::string::npos;

  const bool ok = max_dq <= tol::kClassicalMaxError && freq_ok && rate_ok && cli_ok;
  report(7, ok, "classical cross-check",
         "max |q_rk4 - q_closed| = " + fmt(max_dq) + " (tol " + fmt(tol::kClassicalMaxError) +
             "); omega_d == Re(E1-E0)/hbar and lambda/2 == 2 Im(E_n)/hbar " +
             (freq_ok && rate_ok ? "hold to ulp accuracy" : "FAIL") +
             (cli_ok ? "; CLI report states the identities" : "; CLI report missing"));
}

// 8. Hermitian control: lambda = 0 end-to-end
void criterion_8(const PhysParams& params, const Grid& grid) {
  PhysParams hermitian = params;
  hermitian.lambda = 0.0;
  const OperatorMatrix op = assemble(hermitian, grid, MatrixForm::EQ5);
  const Spectrum spectrum = eig(op);
  const LevelReport rep = match_levels(spectrum, op, 8);
  double worst_rel = 0.0;
  double worst_imag = 0.0;
  for (const LevelEntry& e : rep.levels) {
    worst_rel = std::max(worst_rel, std::abs(e.numeric.real() - e.analytic.real()) /
                                        e.analytic.real());
    worst_imag = std::max(worst_imag, std::abs(e.numeric.imag()));
  }
  const bool ok = worst_rel <= tol::kLevelRelError && worst_imag <= tol::kHermitianImagAbs;
  report(8, ok, "Hermitian control (lambda = 0)",
         "levels match (n+1/2) within relative " + fmt(worst_rel) + " (tol " +
             fmt(tol::kLevelRelError) + "); max |Im| = " + fmt(worst_imag) + " (tol " +
             fmt(tol::kHermitianImagAbs) + ")");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const PhysParams params = standard_params();
  const Grid grid = make_grid(10.0, 1200);

  criterion_1();

  const OperatorMatrix eq5 = assemble(params, grid, MatrixForm::EQ5);
  const Spectrum s5 = eig(eq5);
  const LevelReport report5 = match_levels(s5, eq5, 8);
  criteria_2_and_3(report5, params);

  const Spectrum s2 = eig(assemble(params, grid, MatrixForm::EQ2));
  criterion_4(s2, s5, params, grid);

  criterion_5(eq5, params, grid);
  criterion_6(eq5, params, grid);
  criterion_7(params);
  criterion_8(params, grid);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 8 criteria passed in %.1f s\n", 8 - failures, elapsed);
  return failures == 0 ? 0 : 1;
}
