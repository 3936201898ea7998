#pragma once

#include <complex>
#include <string>

#include "fluxscat/errors.hpp"

// Scalar special functions: J_nu(x) for arbitrary real order nu >= 0 with
// controlled accuracy, log-gamma, and the complex phase (-i)^nu.

namespace fluxscat {

enum class BesselMethod { series, asymptotic, quadrature };

const char* to_string(BesselMethod m);

struct BesselEval {
    double value;
    BesselMethod method;
    double abs_error_estimate;  // >= 0 and finite
};

// ln Gamma(x), x > 0. Relative accuracy better than 1e-13 on [0.5, 2000].
double log_gamma(double x);

// Bessel function of the first kind of real order nu in [0, 5000] at
// x in [0, 10000]. The result satisfies
//   |value - J_nu(x)| <= max(tol * |J_nu(x)|, floor)
// except in a narrow transition band where only an absolute accuracy of
// ~1e-13 is reachable in double precision; abs_error_estimate is always
// an honest bound. Values whose tail bound is below 1e-280 are returned
// as exact 0 (method = series).
BesselEval bessel_j(double nu, double x, double tol = 1e-12);

// Independent verification oracle: evaluates J_nu(x) solely by numerical
// quadrature of the integral representation
//   J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt
//           - sin(nu pi)/pi int_0^inf exp(-nu t - x sinh t) dt
// to absolute accuracy <= 1e-12 or relative <= 1e-10.
// Valid for nu in [0, 2000], x in [0, 1000].
double bessel_j_oracle(double nu, double x);

// Rigorous bound (x/2)^nu / Gamma(nu+1) >= |J_nu(x)|, evaluated in log
// space so it neither overflows nor loses the exponent for huge nu.
double tail_bound(double nu, double x);

// (-i)^nu on the principal branch, exp(-i pi nu / 2). nu any finite real.
std::complex<double> phase_minus_i_pow(double nu);

// sin(pi x) and cos(pi x) with exact reduction: exact zeros at integer
// (resp. half-integer) x, any finite x.
double sin_pi(double x);
double cos_pi(double x);

namespace detail {

// Individual evaluation regimes, exposed for regime-overlap tests.
// Each returns converged=false instead of throwing when it cannot
// deliver a meaningful result for the given (nu, x).
struct RegimeResult {
    double value;
    double abs_error;
    bool converged;
};

RegimeResult series_j(double nu, double x);            // compensated ascending series
RegimeResult hankel_j(double nu, double x, double tol);  // large-argument expansion
RegimeResult quad_j(double nu, double x, double tol);    // adaptive Gauss-Kronrod

// log of tail_bound without the bessel_j domain limits (internal scans).
double log_tail_bound(double nu, double x);

}  // namespace detail

}  // namespace fluxscat
