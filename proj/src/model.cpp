#include "fluxscat/model.hpp"

#include <cmath>

namespace fluxscat {

DerivedParams derive_params(const MediumParams& medium, double alpha) {
    if (!std::isfinite(medium.a) || !std::isfinite(medium.b) || !std::isfinite(medium.omega_hbar))
        throw domain_error("derive_params: medium parameters must be finite");
    if (medium.b < 0.0)
        throw domain_error("derive_params: abnormal pairing potential b must be >= 0");
    if (!(medium.omega_hbar > 0.0))
        throw domain_error("derive_params: beam energy omega_hbar must be > 0");
    if (!std::isfinite(alpha))
        throw domain_error("derive_params: flux count alpha must be finite");

    DerivedParams d;
    d.tan2eps = medium.b / medium.omega_hbar;
    d.cos2eps = 1.0 / std::sqrt(1.0 + d.tan2eps * d.tan2eps);
    d.alpha_tilde = alpha * d.cos2eps;
    d.lambda = std::hypot(medium.b, medium.omega_hbar);
    return d;
}

double partial_wave_nu(double m, double alpha_tilde, double tan2eps) {
    return std::hypot(m + alpha_tilde, alpha_tilde * tan2eps);
}

double partial_wave_index(long long m, const DerivedParams& derived) {
    if (m > 1000000LL || m < -1000000LL)
        throw domain_error("partial_wave_index: |m| must be <= 1e6");
    return partial_wave_nu(static_cast<double>(m), derived.alpha_tilde, derived.tan2eps);
}

double dispersion_k(double lambda, double a) {
    if (!std::isfinite(lambda) || !std::isfinite(a))
        throw domain_error("dispersion_k: arguments must be finite");
    if (!(lambda > a))
        throw domain_error("dispersion_k: no propagating mode, lambda must exceed a");
    return std::sqrt(2.0 * (lambda - a));
}

double omega_from_k(double k, double a, double b) {
    if (!std::isfinite(k) || k < 0.0)
        throw domain_error("omega_from_k: wavenumber must be finite and >= 0");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw domain_error("omega_from_k: potentials must be finite");
    const double k2 = k * k;
    const double radicand = a * a - b * b + a * k2 + 0.25 * k2 * k2;
    if (radicand < 0.0)
        throw domain_error("omega_from_k: negative radicand, unstable or evanescent regime");
    return std::sqrt(radicand);
}

double effective_potential(double r, const DerivedParams& derived, double a) {
    if (!std::isfinite(r) || !(r > 0.0))
        throw domain_error("effective_potential: radius must be finite and > 0");
    const double barrier = derived.alpha_tilde * derived.tan2eps;
    return 0.5 * barrier * barrier / (r * r) + a;
}

}  // namespace fluxscat
