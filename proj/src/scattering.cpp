#include "fluxscat/scattering.hpp"

#include <cmath>

namespace fluxscat {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kMaxBesselOrder = 5000.0;

// Neumaier-compensated accumulator; the partial-wave sums have ~2M
// oscillatory unit-scale terms and naive ordering loses digits.
struct CompensatedSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        c += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double result() const { return s + c; }
};

std::complex<double> unit_phase(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

void validate(const ScatteringSetup& setup) {
    if (!std::isfinite(setup.alpha_tilde))
        throw domain_error("setup: alpha_tilde must be finite");
    if (!std::isfinite(setup.tan2eps) || setup.tan2eps < 0.0)
        throw domain_error("setup: tan2eps must be finite and >= 0");
    if (!std::isfinite(setup.kh) || setup.kh < 20.0 || setup.kh > 4000.0)
        throw domain_error("setup: kh must lie in [20, 4000] (kh >> 2 pi required)");
    if (setup.order_max < 0 || setup.order_max > 2000000)
        throw domain_error("setup: order_max must be in [0, 2e6] (0 = auto)");
    if (!(setup.tol > 0.0) || !std::isfinite(setup.tol))
        throw domain_error("setup: tol must be finite and > 0");
}

bool low_kh(const ScatteringSetup& setup) { return setup.kh < 50.0; }

int auto_truncation_order(double kh, double alpha_tilde, double tan2eps, double tol) {
    if (!(kh > 0.0) || !std::isfinite(kh))
        throw domain_error("auto_truncation_order: kh must be > 0");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw domain_error("auto_truncation_order: tol must be > 0");
    const double log_tol = std::log(tol);
    int m = static_cast<int>(std::ceil(kh)) + 10;
    for (;; ++m) {
        const double nu_hi = partial_wave_nu(m, alpha_tilde, tan2eps);
        const double nu_lo = partial_wave_nu(-m, alpha_tilde, tan2eps);
        const double lb = std::max(detail::log_tail_bound(nu_hi, kh),
                                   detail::log_tail_bound(nu_lo, kh));
        if (lb + std::log(4.0 * m) < log_tol) return m;
        if (m > 2000000)
            throw domain_error("auto_truncation_order: order exceeds supported range");
    }
}

int resolved_order_max(const ScatteringSetup& setup) {
    if (setup.order_max > 0) return setup.order_max;
    return auto_truncation_order(setup.kh, setup.alpha_tilde, setup.tan2eps, setup.tol);
}

ComplexAmplitude ab_amplitude(double alpha_tilde, double chi) {
    if (!std::isfinite(alpha_tilde) || !std::isfinite(chi))
        throw domain_error("ab_amplitude: arguments must be finite");
    if (std::fabs(chi) >= kPi)
        throw divergence_error("ab_amplitude: diverges in the forward direction chi = +-pi");
    const double c = std::cos(0.5 * chi);
    const double s = sin_pi(alpha_tilde);
    // 1/sqrt(2 pi i) = e^{-i pi/4} / sqrt(2 pi)
    const std::complex<double> pref =
        std::polar(1.0 / std::sqrt(2.0 * kPi), -0.25 * kPi);
    return pref * (s / c) * unit_phase(-0.5 * chi);
}

double ab_cross_section(double alpha_tilde, double chi) {
    if (!std::isfinite(alpha_tilde) || !std::isfinite(chi))
        throw domain_error("ab_cross_section: arguments must be finite");
    if (std::fabs(chi) >= kPi)
        throw divergence_error("ab_cross_section: diverges in the forward direction chi = +-pi");
    const double s = sin_pi(alpha_tilde);
    const double c = std::cos(0.5 * chi);
    return s * s / (2.0 * kPi * c * c);
}

PartialWaveTable build_partial_wave_table(const ScatteringSetup& setup, double x) {
    validate(setup);
    if (!std::isfinite(x) || !(x > 0.0) || x > 10000.0)
        throw domain_error("partial_wave_table: argument must lie in (0, 10000]");
    const int m_max = resolved_order_max(setup);
    if (m_max < 1) throw domain_error("partial_wave_table: order_max must be >= 1");

    const double nu_hi = partial_wave_nu(m_max, setup.alpha_tilde, setup.tan2eps);
    const double nu_lo = partial_wave_nu(-m_max, setup.alpha_tilde, setup.tan2eps);
    if (std::max(nu_hi, nu_lo) > kMaxBesselOrder)
        throw domain_error("partial_wave_table: required Bessel order exceeds 5000; "
                           "reduce kh, order_max or |alpha_tilde|");

    PartialWaveTable t;
    t.order_max = m_max;
    t.x = x;
    t.coeff.resize(2 * m_max + 1);
    for (int m = -m_max; m <= m_max; ++m) {
        const double nu = partial_wave_nu(m, setup.alpha_tilde, setup.tan2eps);
        const BesselEval be = bessel_j(nu, x, setup.tol);
        t.coeff[m + m_max] = phase_minus_i_pow(nu) * be.value;
        t.bessel_abs_error += be.abs_error_estimate;
    }
    t.truncation_bound = std::max(tail_bound(nu_hi, x), tail_bound(nu_lo, x)) * 4.0 * m_max;
    return t;
}

namespace {

// sum_m coeff_m e^{i m chi}, accumulated pairwise outward from m = 0 with
// compensated summation on both components.
std::complex<double> partial_wave_sum(const PartialWaveTable& t, double chi) {
    const int m_max = t.order_max;
    CompensatedSum re, im;
    const std::complex<double> center = t.coeff[m_max];
    re.add(center.real());
    im.add(center.imag());
    for (int j = 1; j <= m_max; ++j) {
        const std::complex<double> e = unit_phase(j * chi);
        const std::complex<double> pair =
            t.coeff[m_max + j] * e + t.coeff[m_max - j] * std::conj(e);
        re.add(pair.real());
        im.add(pair.imag());
    }
    return {re.result(), im.result()};
}

}  // namespace

ComplexAmplitude amplitude_numeric(const PartialWaveTable& table,
                                   const ScatteringSetup& setup, double chi) {
    if (!std::isfinite(chi) || std::fabs(chi) > kPi)
        throw domain_error("amplitude_numeric: require |chi| <= pi");
    const std::complex<double> sum = partial_wave_sum(table, chi);
    const std::complex<double> incident =
        unit_phase(-(table.x * std::cos(chi) + setup.alpha_tilde * chi));
    return std::sqrt(table.x) * unit_phase(-table.x) * (sum - incident);
}

ComplexAmplitude amplitude_numeric(const ScatteringSetup& setup, double chi) {
    if (!std::isfinite(chi) || std::fabs(chi) > kPi)
        throw domain_error("amplitude_numeric: require |chi| <= pi");
    const PartialWaveTable table = build_partial_wave_table(setup, setup.kh);
    return amplitude_numeric(table, setup, chi);
}

double cross_section_numeric(const PartialWaveTable& table,
                             const ScatteringSetup& setup, double chi) {
    return std::norm(amplitude_numeric(table, setup, chi));
}

double cross_section_numeric(const ScatteringSetup& setup, double chi) {
    return std::norm(amplitude_numeric(setup, chi));
}

ComplexAmplitude amplitude_asymptotic(const ScatteringSetup& setup, double chi) {
    validate(setup);
    if (!std::isfinite(chi))
        throw domain_error("amplitude_asymptotic: chi must be finite");
    const ComplexAmplitude f_ab = ab_amplitude(setup.alpha_tilde, chi);  // throws at +-pi

    const int m_max = resolved_order_max(setup);
    const double barrier = setup.alpha_tilde * setup.tan2eps;
    const double c2 = barrier * barrier;

    CompensatedSum re, im;
    auto add_term = [&](int m) {
        const double nu = partial_wave_nu(m, setup.alpha_tilde, setup.tan2eps);
        const double a_mu = std::fabs(m + setup.alpha_tilde);
        const double pair_sum = nu + a_mu;
        if (pair_sum == 0.0) return;  // delta = 0, vanishing term
        const double delta = c2 / pair_sum;  // nu - |m + alpha|, stable for large m
        const double s = sin_pi(0.5 * delta);
        // e^{i m chi} * e^{-i (pi/2)(nu + |m+alpha|)}, the latter with
        // exact mod-4 reduction.
        const std::complex<double> term =
            s * unit_phase(m * chi) *
            std::complex<double>{cos_pi(0.5 * pair_sum), -sin_pi(0.5 * pair_sum)};
        re.add(term.real());
        im.add(term.imag());
    };
    add_term(0);
    for (int j = 1; j <= m_max; ++j) {
        add_term(j);
        add_term(-j);
    }
    // sqrt(2 i / pi) = sqrt(2/pi) e^{i pi/4}
    const std::complex<double> pref = std::polar(std::sqrt(2.0 / kPi), 0.25 * kPi);
    return f_ab - pref * std::complex<double>{re.result(), im.result()};
}

std::complex<double> total_wavefunction(const ScatteringSetup& setup, double kr, double chi) {
    if (!std::isfinite(kr) || !(kr > 0.0))
        throw domain_error("total_wavefunction: require kr > 0");
    if (!std::isfinite(chi))
        throw domain_error("total_wavefunction: chi must be finite");
    const PartialWaveTable table = build_partial_wave_table(setup, kr);
    return partial_wave_sum(table, chi);
}

}  // namespace fluxscat
