#pragma once

namespace dho {
namespace tol {

// Frozen verification thresholds for the standard run (m = hbar = 1,
// omega = 1, lambda = 1/2, L = 10, N = 1200, EQ5). Spectrum tolerances were
// fixed after an N = 2400 run confirmed clean O(h^2) convergence (per-level
// relative errors 1.1e-4 at N = 1200 dropping 4.0x at N = 2400).

// per-level |Ehat_n - E_n| / |E_n| for the trusted levels
inline constexpr double kLevelRelError = 2e-4;
// per-level and mean |Im Ehat_n - hbar*lambda/4|
inline constexpr double kImagAbsError = 2e-4;
// EQ2 vs EQ5 trusted levels: base tolerance, plus (lambda/4) * boundary defect
inline constexpr double kFormAgreementBase = 1e-8;
// entrywise EQ2 - EQ5 = (lambda/4)([Y,P] - i hbar I)
inline constexpr double kFormIdentityAbs = 1e-10;
// interior relative residual of analytic eigenfunctions, n <= 5
inline constexpr double kResidualMax = 1e-3;
// residual ratio when h is halved (nominal 4)
inline constexpr double kResidualRatioLow = 3.0;
inline constexpr double kResidualRatioHigh = 5.0;
// norm growth-rate fit: relative to lambda/2, and the lambda = 0 control
inline constexpr double kGrowthRelError = 1e-3;
inline constexpr double kGrowthZeroAbs = 1e-6;
// RK4 vs closed form over t in [0, 20] at step 1e-3
inline constexpr double kClassicalMaxError = 1e-8;
// frequency / dissipation identities evaluated from the same formulas
inline constexpr double kIdentityUlps = 4.0;
// lambda = 0 control: imaginary parts of the trusted levels
inline constexpr double kHermitianImagAbs = 1e-10;
// gauge checks: anti-Hermitian exactness (in units of eps * max|A_ij|, the
// rounding scale of the conjugation), spectrum invariance under the unitary
// conjugation, and the margin on the per-level finite-difference error
// estimate for the oscillator-spectrum comparison
inline constexpr double kGaugeAntiHermUlps = 64.0;
inline constexpr double kGaugeSpectrumAbs = 1e-8;
inline constexpr double kGaugeOscillatorMargin = 2.0;

}  // namespace tol
}  // namespace dho
