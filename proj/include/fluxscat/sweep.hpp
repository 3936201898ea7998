#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxscat/scattering.hpp"

// Parameter sweeps over flux and angle, and their CSV serialization.
// Sweeps are embarrassingly parallel across grid points and produce
// bit-identical results for any worker count (each point is computed
// sequentially and written to its own slot).

namespace fluxscat {

enum class SweepKind { flux_sweep, angle_sweep };

struct CrossSectionCurve {
    std::vector<double> abscissa;  // alpha_tilde or chi [rad], strictly increasing
    std::vector<double> sigma_h;
    std::vector<double> sigma_ab;  // NaN marks a flagged-missing value
    ScatteringSetup setup;         // the sweep template (order_max 0 = auto)
    SweepKind kind = SweepKind::flux_sweep;
};

// sigma_h and sigma_AB on a uniform alpha_tilde grid at fixed chi.
// setup.alpha_tilde is ignored (replaced per grid point).
CrossSectionCurve sweep_flux(const ScatteringSetup& setup, double alpha_min,
                             double alpha_max, int steps, double chi,
                             int threads = 1);

// sigma_h and sigma_AB on a uniform chi grid; endpoints within (-pi, pi).
// sigma_AB is flagged missing (NaN) for |chi| > pi - 0.1.
CrossSectionCurve sweep_angle(const ScatteringSetup& setup, double chi_min,
                              double chi_max, int steps, int threads = 1);

// One double as CSV text: 17 significant digits, period decimal separator.
std::string format_csv_number(double v);

// Header plus one row per grid point, comma-delimited, LF line endings.
// Missing sigma_ab values become empty fields.
void write_curve_csv(std::ostream& os, const CrossSectionCurve& curve);
std::string curve_csv_string(const CrossSectionCurve& curve);

}  // namespace fluxscat
