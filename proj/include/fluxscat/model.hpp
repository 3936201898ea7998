#pragma once

#include "fluxscat/errors.hpp"

// Map physical inputs (pairing potentials a, b, beam energy, bare flux)
// to the derived scattering parameters: Bogolyubov angle, renormalized
// flux, quasiparticle dispersion, partial-wave index and the effective
// potential. Units: hbar = m0 = 1 throughout.

namespace fluxscat {

struct MediumParams {
    double a;           // normal pairing potential (energy)
    double b;           // abnormal pairing potential, >= 0
    double omega_hbar;  // beam energy, > 0
};

struct DerivedParams {
    double tan2eps;      // tan(2 eps) = b / omega_hbar
    double cos2eps;      // 1 / sqrt(1 + tan2eps^2)
    double alpha_tilde;  // renormalized flux quanta count, alpha * cos2eps
    double lambda;       // quasiparticle energy, sqrt(b^2 + omega_hbar^2)
};

// Bogolyubov rotation, renormalized flux and quasiparticle energy.
// alpha is the bare flux quanta count (alpha = -Phi_s / Phi_0).
DerivedParams derive_params(const MediumParams& medium, double alpha);

// Partial-wave Bessel index nu(m) = sqrt((m + alpha_tilde)^2
// + alpha_tilde^2 tan2eps^2), positive root. Core form used everywhere.
double partial_wave_nu(double m, double alpha_tilde, double tan2eps);

// Same, for an integer azimuthal number and derived parameters. |m| <= 1e6.
double partial_wave_index(long long m, const DerivedParams& derived);

// Gap spectrum inverted for the wavenumber: k = sqrt(2 (lambda - a)).
// Throws domain_error when lambda <= a (no propagating mode).
double dispersion_k(double lambda, double a);

// Beam energy from the wavenumber:
// omega_hbar = sqrt(a^2 - b^2 + a k^2 + k^4/4).
double omega_from_k(double k, double a, double b);

// Effective potential V(r) = alpha_tilde^2 tan2eps^2 / (2 r^2) + a, r > 0.
double effective_potential(double r, const DerivedParams& derived, double a);

}  // namespace fluxscat
