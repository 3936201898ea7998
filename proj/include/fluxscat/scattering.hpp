#pragma once

#include <complex>
#include <vector>

#include "fluxscat/errors.hpp"
#include "fluxscat/model.hpp"
#include "fluxscat/specfun.hpp"

// Partial-wave assembly: wavefunctions, scattering amplitudes (exact
// finite-sum F_h, asymptotic F, closed-form F_AB) and differential cross
// sections sigma_h, sigma_AB.
//
// Conventions: the incident wave comes from chi = 0 and travels in -x,
//   psi_inc = exp(-i k r cos(chi) - i alpha_tilde chi),
// with the branch cut of the alpha_tilde*chi phase at chi = +-pi. The
// 1/sqrt(2 pi i) and sqrt(2 i / pi) prefactors are on the principal
// branch. Time dependence is dropped (global phase).

namespace fluxscat {

using ComplexAmplitude = std::complex<double>;

struct ScatteringSetup {
    double alpha_tilde = 0.0;  // renormalized flux quanta count, signed
    double tan2eps = 0.0;      // >= 0
    double kh = 100.0;         // screen distance x wavenumber, [20, 4000]
    int order_max = 0;         // truncation order M >= 1; 0 selects automatically
    double tol = 1e-10;        // Bessel/truncation tolerance, > 0
};

// Throws domain_error for parameters outside the supported ranges.
void validate(const ScatteringSetup& setup);

// True when kh is large enough to be accepted but too small for the
// far-field formulas to be trustworthy (kh < 50); callers should warn.
bool low_kh(const ScatteringSetup& setup);

// Smallest M with tail_bound(nu(+-M), kh) * 4M < tol, clamped below at
// ceil(kh) + 10.
int auto_truncation_order(double kh, double alpha_tilde, double tan2eps, double tol);

// setup.order_max, or the automatic choice when order_max == 0.
int resolved_order_max(const ScatteringSetup& setup);

// Closed-form Aharonov-Bohm scattering function
//   F_AB = 1/sqrt(2 pi i) * sin(pi alpha_tilde)/cos(chi/2) * e^{-i chi/2},
// |chi| < pi. Throws divergence_error in the forward direction.
ComplexAmplitude ab_amplitude(double alpha_tilde, double chi);

// sigma_AB = sin^2(pi alpha_tilde) / (2 pi cos^2(chi/2)); exactly 0 at
// integer alpha_tilde.
double ab_cross_section(double alpha_tilde, double chi);

// Precomputed partial-wave coefficients (-i)^nu(m) J_nu(m)(x) for
// m = -M..M at fixed argument x (= kh for amplitudes, kr for the
// wavefunction). Building the table is the expensive step; every angle
// evaluation afterwards is a plain compensated sum.
struct PartialWaveTable {
    int order_max = 0;
    double x = 0.0;
    std::vector<std::complex<double>> coeff;  // index m + order_max
    double truncation_bound = 0.0;  // tail_bound at the edge orders * 4M
    double bessel_abs_error = 0.0;  // summed |error| of the J factors
};

PartialWaveTable build_partial_wave_table(const ScatteringSetup& setup, double x);

// Exact finite-sum amplitude
//   F_h = sqrt(kh) e^{-i kh} [ sum_m (-i)^nu J_nu(kh) e^{i m chi}
//                              - e^{-i kh cos chi - i alpha_tilde chi} ],
// |chi| <= pi.
ComplexAmplitude amplitude_numeric(const ScatteringSetup& setup, double chi);
ComplexAmplitude amplitude_numeric(const PartialWaveTable& table,
                                   const ScatteringSetup& setup, double chi);

// sigma_h = |F_h|^2.
double cross_section_numeric(const ScatteringSetup& setup, double chi);
double cross_section_numeric(const PartialWaveTable& table,
                             const ScatteringSetup& setup, double chi);

// Far-field asymptotic amplitude
//   F = F_AB - sqrt(2i/pi) sum_m sin{(pi/2)[nu - |m+a|]}
//                                e^{i m chi - i (pi/2)[nu + |m+a|]},
// truncated at |m| <= M. A diagnostic: its term-by-term asymptotics
// degrade toward the forward cone, so it tracks amplitude_numeric only
// at moderate angles. |chi| < pi.
ComplexAmplitude amplitude_asymptotic(const ScatteringSetup& setup, double chi);

// Total wavefunction sum_m (-i)^nu(m) J_nu(m)(kr) e^{i m chi}, kr > 0
// (time factor omitted).
std::complex<double> total_wavefunction(const ScatteringSetup& setup, double kr, double chi);

}  // namespace fluxscat
