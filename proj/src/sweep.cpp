#include "fluxscat/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace fluxscat {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
// sigma_AB is reported only inside |chi| <= pi - 0.1; beyond that the
// forward divergence makes the closed form meaningless on a screen.
constexpr double kAbCutoff = kPi - 0.1;

// Uniform grid with exact endpoints at nice fractions: lo + (i * range) / n
// keeps integer alpha_tilde values exact for ranges like [0, 5] x 501.
double grid_point(double lo, double hi, int steps, int i) {
    return lo + (i * (hi - lo)) / (steps - 1);
}

// Static block partition; each index is computed independently and written
// to its own slot, so results are identical for every worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            const int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
            const int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void check_steps(int steps) {
    if (steps < 2) throw domain_error("sweep: steps must be >= 2");
    if (steps > 10000000) throw domain_error("sweep: steps too large");
}

}  // namespace

CrossSectionCurve sweep_flux(const ScatteringSetup& setup, double alpha_min,
                             double alpha_max, int steps, double chi, int threads) {
    validate(setup);
    check_steps(steps);
    if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || !(alpha_max > alpha_min))
        throw domain_error("sweep_flux: require alpha_min < alpha_max, both finite");
    if (!std::isfinite(chi) || std::fabs(chi) > kPi)
        throw domain_error("sweep_flux: require |chi| <= pi");

    CrossSectionCurve curve;
    curve.setup = setup;
    curve.kind = SweepKind::flux_sweep;
    curve.abscissa.resize(steps);
    curve.sigma_h.resize(steps);
    curve.sigma_ab.resize(steps);

    const bool ab_ok = std::fabs(chi) <= kAbCutoff;
    parallel_for(steps, threads, [&](int i) {
        const double a = grid_point(alpha_min, alpha_max, steps, i);
        ScatteringSetup point = setup;
        point.alpha_tilde = a;
        const PartialWaveTable table = build_partial_wave_table(point, point.kh);
        curve.abscissa[i] = a;
        curve.sigma_h[i] = cross_section_numeric(table, point, chi);
        curve.sigma_ab[i] =
            ab_ok ? ab_cross_section(a, chi) : std::numeric_limits<double>::quiet_NaN();
    });

    for (int i = 1; i < steps; ++i)
        if (!(curve.abscissa[i] > curve.abscissa[i - 1]))
            throw domain_error("sweep_flux: grid is not strictly increasing");
    return curve;
}

CrossSectionCurve sweep_angle(const ScatteringSetup& setup, double chi_min,
                              double chi_max, int steps, int threads) {
    validate(setup);
    check_steps(steps);
    if (!std::isfinite(chi_min) || !std::isfinite(chi_max) || !(chi_max > chi_min))
        throw domain_error("sweep_angle: require chi_min < chi_max, both finite");
    if (std::fabs(chi_min) >= kPi || std::fabs(chi_max) >= kPi)
        throw domain_error("sweep_angle: angle range must lie within (-pi, pi)");

    const PartialWaveTable table = build_partial_wave_table(setup, setup.kh);

    CrossSectionCurve curve;
    curve.setup = setup;
    curve.kind = SweepKind::angle_sweep;
    curve.abscissa.resize(steps);
    curve.sigma_h.resize(steps);
    curve.sigma_ab.resize(steps);

    parallel_for(steps, threads, [&](int i) {
        const double chi = grid_point(chi_min, chi_max, steps, i);
        curve.abscissa[i] = chi;
        curve.sigma_h[i] = cross_section_numeric(table, setup, chi);
        curve.sigma_ab[i] = (std::fabs(chi) <= kAbCutoff)
                                ? ab_cross_section(setup.alpha_tilde, chi)
                                : std::numeric_limits<double>::quiet_NaN();
    });

    for (int i = 1; i < steps; ++i)
        if (!(curve.abscissa[i] > curve.abscissa[i - 1]))
            throw domain_error("sweep_angle: grid is not strictly increasing");
    return curve;
}

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_curve_csv(std::ostream& os, const CrossSectionCurve& curve) {
    os << (curve.kind == SweepKind::flux_sweep ? "alpha_tilde" : "chi_rad")
       << ",sigma_h,sigma_ab\n";
    for (size_t i = 0; i < curve.abscissa.size(); ++i) {
        os << format_csv_number(curve.abscissa[i]) << ',' << format_csv_number(curve.sigma_h[i])
           << ',';
        if (!std::isnan(curve.sigma_ab[i])) os << format_csv_number(curve.sigma_ab[i]);
        os << '\n';
    }
}

std::string curve_csv_string(const CrossSectionCurve& curve) {
    std::ostringstream oss;
    write_curve_csv(oss, curve);
    return oss.str();
}

}  // namespace fluxscat
