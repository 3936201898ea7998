#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fluxscat/sweep.hpp"

using namespace fluxscat;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

ScatteringSetup base_setup() {
    ScatteringSetup s;
    s.tan2eps = 0.2;
    s.kh = 100.0;
    s.order_max = 0;  // auto
    s.tol = 1e-10;
    return s;
}
}  // namespace

TEST_CASE("sweep_flux: shape, positivity, integer-flux contrast") {
    ScatteringSetup s = base_setup();
    CrossSectionCurve c = sweep_flux(s, 0.0, 2.0, 21, kPi / 15.0, 2);
    REQUIRE(c.abscissa.size() == 21);
    REQUIRE(c.sigma_h.size() == 21);
    REQUIRE(c.sigma_ab.size() == 21);
    CHECK(c.kind == SweepKind::flux_sweep);

    for (size_t i = 0; i < c.abscissa.size(); ++i) {
        if (i > 0) CHECK(c.abscissa[i] > c.abscissa[i - 1]);
        CHECK(c.sigma_h[i] >= 0.0);
        CHECK(c.sigma_ab[i] >= 0.0);
    }
    // Grid arithmetic keeps integer flux values exact.
    CHECK(c.abscissa[10] == 1.0);
    CHECK(c.abscissa[20] == 2.0);
    // The closed form vanishes there; the exact sum does not (barrier on).
    CHECK(c.sigma_ab[10] == 0.0);
    CHECK(c.sigma_ab[20] == 0.0);
    CHECK(c.sigma_h[10] > 1e-3);
    CHECK(c.sigma_h[20] > 1e-3);
}

TEST_CASE("sweep_flux: b = 0 tracks the closed form away from integers") {
    ScatteringSetup s = base_setup();
    s.tan2eps = 0.0;
    CrossSectionCurve c = sweep_flux(s, 0.1, 0.9, 9, kPi / 15.0, 1);
    for (size_t i = 0; i < c.abscissa.size(); ++i) {
        CHECK(std::fabs(c.sigma_h[i] - c.sigma_ab[i]) <=
              0.15 * std::max(c.sigma_ab[i], 1e-6));
    }
}

TEST_CASE("sweep_angle: two-point contract and missing sigma_ab flags") {
    ScatteringSetup s = base_setup();
    s.alpha_tilde = 3.5;
    s.order_max = 200;

    CrossSectionCurve two = sweep_angle(s, -0.4, 0.9, 2, 1);
    REQUIRE(two.abscissa.size() == 2);
    CHECK(two.abscissa[0] == -0.4);
    CHECK(two.abscissa[1] == 0.9);
    CHECK(two.kind == SweepKind::angle_sweep);

    // Beyond |chi| = pi - 0.1 the closed form is flagged missing.
    CrossSectionCurve edge = sweep_angle(s, 2.9, 3.1, 3, 1);
    CHECK(!std::isnan(edge.sigma_ab[0]));
    CHECK(std::isnan(edge.sigma_ab[2]));
    CHECK(std::isfinite(edge.sigma_h[2]));  // sigma_h stays finite
}

TEST_CASE("sweep validation") {
    ScatteringSetup s = base_setup();
    CHECK_THROWS_AS(sweep_flux(s, 0.0, 1.0, 1, 0.2, 1), domain_error);
    CHECK_THROWS_AS(sweep_flux(s, 1.0, 0.0, 5, 0.2, 1), domain_error);
    CHECK_THROWS_AS(sweep_flux(s, 0.0, 1.0, 5, 3.2, 1), domain_error);
    CHECK_THROWS_AS(sweep_angle(s, -3.2, 1.0, 5, 1), domain_error);
    CHECK_THROWS_AS(sweep_angle(s, 0.0, kPi, 5, 1), domain_error);
}

TEST_CASE("sweeps are bit-identical for any worker count") {
    ScatteringSetup s = base_setup();
    s.alpha_tilde = 1.25;
    s.order_max = 150;
    CrossSectionCurve c1 = sweep_angle(s, -2.0, 2.0, 41, 1);
    CrossSectionCurve c4 = sweep_angle(s, -2.0, 2.0, 41, 4);
    CHECK(curve_csv_string(c1) == curve_csv_string(c4));

    CrossSectionCurve f1 = sweep_flux(s, 0.0, 1.0, 11, 0.3, 1);
    CrossSectionCurve f3 = sweep_flux(s, 0.0, 1.0, 11, 0.3, 3);
    CHECK(curve_csv_string(f1) == curve_csv_string(f3));
}

TEST_CASE("CSV serialization format") {
    CrossSectionCurve c;
    c.kind = SweepKind::angle_sweep;
    c.abscissa = {0.1, 0.2, 0.3};
    c.sigma_h = {1.0, 0.125, 3.0e-15};
    c.sigma_ab = {2.0, std::numeric_limits<double>::quiet_NaN(), 1.0 / 3.0};

    std::string text = curve_csv_string(c);
    CHECK(text ==
          "chi_rad,sigma_h,sigma_ab\n"
          "0.10000000000000001,1,2\n"
          "0.20000000000000001,0.125,\n"
          "0.29999999999999999,2.9999999999999998e-15,0.33333333333333331\n");

    // 17 significant digits reproduce every double exactly on read-back.
    for (double v : {1.0 / 3.0, 0.1, 3.0e-15, 123456.789}) {
        CHECK(std::stod(format_csv_number(v)) == v);
    }
}
