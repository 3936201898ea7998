// fluxscat: differential cross sections for quasiparticle scattering on a
// magnetic flux line. Subcommands sweep the renormalized flux or the
// scattering angle and emit CSV (plus a .meta.json sidecar for file
// outputs); `amplitude`, `bessel` and `dispersion` expose single-point
// diagnostics.
//
// Exit codes: 0 ok, 2 invalid flags/parameters, 3 numerical accuracy
// failure. FLUXSCAT_THREADS (positive integer) sets the worker count;
// results are byte-identical for any value.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxscat/model.hpp"
#include "fluxscat/scattering.hpp"
#include "fluxscat/specfun.hpp"
#include "fluxscat/sweep.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846264338327950288;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int resolve_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    int fallback = static_cast<int>(std::max(1u, std::min(hw ? hw : 1u, 8u)));
    const char* env = std::getenv("FLUXSCAT_THREADS");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024)
        throw usage_error("FLUXSCAT_THREADS must be a positive integer (got '" +
                          std::string(env) + "')");
    return static_cast<int>(v);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
        f.flush();
        if (!f) {
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed for " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

// CSV to stdout or to <path> (atomically), with a .meta.json sidecar for
// file outputs.
void emit(const std::string& output, const std::string& csv, nlohmann::json meta,
          double wall_seconds) {
    if (output == "-") {
        std::cout << csv;
        std::cout.flush();
        return;
    }
    meta["wall_time_s"] = wall_seconds;
    meta["output"] = output;
    write_file_atomic(output, csv);
    write_file_atomic(output + ".meta.json", meta.dump(2) + "\n");
}

nlohmann::json base_meta(const std::string& subcommand, int threads) {
    nlohmann::json j;
    j["tool"] = "fluxscat";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["threads"] = threads;
    return j;
}

void warn_low_kh(const fluxscat::ScatteringSetup& setup) {
    if (fluxscat::low_kh(setup))
        std::cerr << "fluxscat: warning: kh = " << setup.kh
                  << " is below 50; far-field formulas assume kh >> 2 pi\n";
}

// The edge orders of an explicitly chosen truncation must carry a
// negligible tail; auto-selected orders guarantee it by construction.
void warn_truncation(const fluxscat::ScatteringSetup& setup, double alpha_extreme) {
    if (setup.order_max <= 0) return;
    const int m = setup.order_max;
    const double nu_hi = fluxscat::partial_wave_nu(m, alpha_extreme, setup.tan2eps);
    const double nu_lo = fluxscat::partial_wave_nu(-m, alpha_extreme, setup.tan2eps);
    const double bound =
        std::max(fluxscat::tail_bound(std::min(nu_hi, 5000.0), setup.kh),
                 fluxscat::tail_bound(std::min(nu_lo, 5000.0), setup.kh)) *
        4.0 * m;
    if (bound > setup.tol)
        std::cerr << "fluxscat: warning: truncation order M = " << m
                  << " leaves a tail bound " << bound << " above tol = " << setup.tol
                  << "\n";
}

struct SweepAlphaConfig {
    double tan2eps = 0.2;
    double kh = 100.0;
    int order_max = 0;  // auto
    double chi = kPi / 15.0;
    double alpha_min = 0.0;
    double alpha_max = 5.0;
    int steps = 501;
    double tol = 1e-10;
    std::string output = "-";
};

int run_sweep_alpha(const SweepAlphaConfig& cfg) {
    const int threads = resolve_threads();
    fluxscat::ScatteringSetup setup;
    setup.tan2eps = cfg.tan2eps;
    setup.kh = cfg.kh;
    setup.order_max = cfg.order_max;
    setup.tol = cfg.tol;

    fluxscat::validate(setup);
    if (cfg.steps < 2) throw usage_error("--alpha-steps must be >= 2");
    if (!(cfg.alpha_max > cfg.alpha_min))
        throw usage_error("--alpha-max must exceed --alpha-min");
    if (std::fabs(cfg.chi) > kPi) throw usage_error("--chi must lie in [-pi, pi]");
    warn_low_kh(setup);
    warn_truncation(setup, std::fabs(cfg.alpha_min) > std::fabs(cfg.alpha_max)
                               ? cfg.alpha_min
                               : cfg.alpha_max);

    const auto t0 = std::chrono::steady_clock::now();
    fluxscat::CrossSectionCurve curve =
        fluxscat::sweep_flux(setup, cfg.alpha_min, cfg.alpha_max, cfg.steps, cfg.chi, threads);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json meta = base_meta("sweep-alpha", threads);
    meta["parameters"] = {{"tan2eps", cfg.tan2eps},     {"kh", cfg.kh},
                          {"order_max", cfg.order_max}, {"chi", cfg.chi},
                          {"alpha_min", cfg.alpha_min}, {"alpha_max", cfg.alpha_max},
                          {"alpha_steps", cfg.steps},   {"tol", cfg.tol}};
    meta["rows"] = cfg.steps;
    emit(cfg.output, fluxscat::curve_csv_string(curve), std::move(meta), secs);
    return 0;
}

struct SweepChiConfig {
    double alpha_tilde = 3.5;
    double tan2eps = 0.2;
    double kh = 100.0;
    int order_max = 600;
    double chi_min = -2.9;
    double chi_max = 2.9;
    int steps = 581;
    double tol = 1e-10;
    std::string output = "-";
};

int run_sweep_chi(const SweepChiConfig& cfg) {
    const int threads = resolve_threads();
    fluxscat::ScatteringSetup setup;
    setup.alpha_tilde = cfg.alpha_tilde;
    setup.tan2eps = cfg.tan2eps;
    setup.kh = cfg.kh;
    setup.order_max = cfg.order_max;
    setup.tol = cfg.tol;

    fluxscat::validate(setup);
    if (cfg.steps < 2) throw usage_error("--chi-steps must be >= 2");
    if (!(cfg.chi_max > cfg.chi_min)) throw usage_error("--chi-max must exceed --chi-min");
    if (std::fabs(cfg.chi_min) >= kPi || std::fabs(cfg.chi_max) >= kPi)
        throw usage_error("angle range must lie within (-pi, pi)");
    warn_low_kh(setup);
    warn_truncation(setup, cfg.alpha_tilde);

    const auto t0 = std::chrono::steady_clock::now();
    fluxscat::CrossSectionCurve curve =
        fluxscat::sweep_angle(setup, cfg.chi_min, cfg.chi_max, cfg.steps, threads);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json meta = base_meta("sweep-chi", threads);
    meta["parameters"] = {{"alpha_tilde", cfg.alpha_tilde}, {"tan2eps", cfg.tan2eps},
                          {"kh", cfg.kh},                   {"order_max", cfg.order_max},
                          {"chi_min", cfg.chi_min},         {"chi_max", cfg.chi_max},
                          {"chi_steps", cfg.steps},         {"tol", cfg.tol}};
    meta["rows"] = cfg.steps;
    emit(cfg.output, fluxscat::curve_csv_string(curve), std::move(meta), secs);
    return 0;
}

struct AmplitudeConfig {
    double alpha_tilde = 3.5;
    double tan2eps = 0.2;
    double kh = 100.0;
    int order_max = 0;
    double chi = kPi / 15.0;
    double tol = 1e-10;
    std::string output = "-";
};

int run_amplitude(const AmplitudeConfig& cfg) {
    const int threads = resolve_threads();
    fluxscat::ScatteringSetup setup;
    setup.alpha_tilde = cfg.alpha_tilde;
    setup.tan2eps = cfg.tan2eps;
    setup.kh = cfg.kh;
    setup.order_max = cfg.order_max;
    setup.tol = cfg.tol;

    fluxscat::validate(setup);
    if (std::fabs(cfg.chi) >= kPi)
        throw usage_error("--chi must lie within (-pi, pi); the asymptotic "
                          "amplitude diverges in the forward direction");
    warn_low_kh(setup);
    warn_truncation(setup, cfg.alpha_tilde);

    const auto t0 = std::chrono::steady_clock::now();
    const fluxscat::ComplexAmplitude fh = fluxscat::amplitude_numeric(setup, cfg.chi);
    const fluxscat::ComplexAmplitude fa = fluxscat::amplitude_asymptotic(setup, cfg.chi);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream csv;
    csv << "chi_rad,re_fh,im_fh,sigma_h,re_fasym,im_fasym\n"
        << fluxscat::format_csv_number(cfg.chi) << ','
        << fluxscat::format_csv_number(fh.real()) << ','
        << fluxscat::format_csv_number(fh.imag()) << ','
        << fluxscat::format_csv_number(std::norm(fh)) << ','
        << fluxscat::format_csv_number(fa.real()) << ','
        << fluxscat::format_csv_number(fa.imag()) << '\n';

    nlohmann::json meta = base_meta("amplitude", threads);
    meta["parameters"] = {{"alpha_tilde", cfg.alpha_tilde}, {"tan2eps", cfg.tan2eps},
                          {"kh", cfg.kh},                   {"order_max", cfg.order_max},
                          {"chi", cfg.chi},                 {"tol", cfg.tol}};
    meta["rows"] = 1;
    emit(cfg.output, csv.str(), std::move(meta), secs);
    return 0;
}

struct BesselConfig {
    double nu = 0.0;
    double x = 0.0;
    double tol = 1e-10;
    std::string output = "-";
};

int run_bessel(const BesselConfig& cfg) {
    const int threads = resolve_threads();
    const auto t0 = std::chrono::steady_clock::now();
    const fluxscat::BesselEval eval = fluxscat::bessel_j(cfg.nu, cfg.x, cfg.tol);

    std::string oracle_field;
    if (cfg.nu <= 2000.0 && cfg.x <= 1000.0)
        oracle_field = fluxscat::format_csv_number(fluxscat::bessel_j_oracle(cfg.nu, cfg.x));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream csv;
    csv << "nu,x,value,method,abs_error_estimate,oracle_value\n"
        << fluxscat::format_csv_number(cfg.nu) << ',' << fluxscat::format_csv_number(cfg.x)
        << ',' << fluxscat::format_csv_number(eval.value) << ','
        << fluxscat::to_string(eval.method) << ','
        << fluxscat::format_csv_number(eval.abs_error_estimate) << ',' << oracle_field
        << '\n';

    nlohmann::json meta = base_meta("bessel", threads);
    meta["parameters"] = {{"nu", cfg.nu}, {"x", cfg.x}, {"tol", cfg.tol}};
    meta["rows"] = 1;
    emit(cfg.output, csv.str(), std::move(meta), secs);
    return 0;
}

struct DispersionConfig {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double k = -1.0;
    double omega_hbar = -1.0;
    bool has_k = false;
    bool has_omega = false;
    std::string output = "-";
};

int run_dispersion(const DispersionConfig& cfg) {
    const int threads = resolve_threads();
    if (cfg.has_k == cfg.has_omega)
        throw usage_error("provide exactly one of --k or --omega-hbar");

    const auto t0 = std::chrono::steady_clock::now();
    double k, omega, lambda;
    if (cfg.has_k) {
        k = cfg.k;
        omega = fluxscat::omega_from_k(k, cfg.a, cfg.b);  // throws on bad domain
        lambda = cfg.a + 0.5 * k * k;
    } else {
        omega = cfg.omega_hbar;
        if (!(omega > 0.0)) throw usage_error("--omega-hbar must be > 0");
        lambda = std::hypot(cfg.b, omega);
        k = fluxscat::dispersion_k(lambda, cfg.a);
    }
    const fluxscat::DerivedParams d = fluxscat::derive_params({cfg.a, cfg.b, omega}, cfg.alpha);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream csv;
    csv << "a,b,omega_hbar,k,lambda,tan2eps,cos2eps,alpha,alpha_tilde\n"
        << fluxscat::format_csv_number(cfg.a) << ',' << fluxscat::format_csv_number(cfg.b)
        << ',' << fluxscat::format_csv_number(omega) << ',' << fluxscat::format_csv_number(k)
        << ',' << fluxscat::format_csv_number(lambda) << ','
        << fluxscat::format_csv_number(d.tan2eps) << ','
        << fluxscat::format_csv_number(d.cos2eps) << ','
        << fluxscat::format_csv_number(cfg.alpha) << ','
        << fluxscat::format_csv_number(d.alpha_tilde) << '\n';

    nlohmann::json meta = base_meta("dispersion", threads);
    meta["parameters"] = {{"a", cfg.a},
                          {"b", cfg.b},
                          {"alpha", cfg.alpha},
                          {"k", cfg.has_k ? nlohmann::json(cfg.k) : nlohmann::json()},
                          {"omega_hbar",
                           cfg.has_omega ? nlohmann::json(cfg.omega_hbar) : nlohmann::json()}};
    meta["rows"] = 1;
    emit(cfg.output, csv.str(), std::move(meta), secs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluxscat: differential scattering cross sections of quasiparticles "
                 "on a magnetic flux line.\n"
                 "Flux is counted in quanta; alpha_tilde is the renormalized count "
                 "(alpha * cos 2eps, stored signed). The incident beam comes from "
                 "chi = 0; the forward direction is chi = +-pi."};
    app.set_version_flag("--version", std::string("fluxscat ") + kVersion);
    app.require_subcommand(1);

    SweepAlphaConfig sa;
    CLI::App* cmd_sa = app.add_subcommand(
        "sweep-alpha", "Cross sections on a uniform alpha_tilde grid at fixed chi (CSV "
                       "alpha_tilde,sigma_h,sigma_ab)");
    cmd_sa->add_option("--tan2eps", sa.tan2eps, "Barrier strength tan(2 eps) = b/(omega hbar)")
        ->capture_default_str();
    cmd_sa->add_option("--kh", sa.kh, "Screen distance times wavenumber [rad]")
        ->capture_default_str();
    cmd_sa->add_option("--order-max", sa.order_max, "Truncation order M (0 = auto)")
        ->capture_default_str();
    cmd_sa->add_option("--chi", sa.chi, "Scattering angle [rad]")->capture_default_str();
    cmd_sa->add_option("--alpha-min", sa.alpha_min, "Grid start")->capture_default_str();
    cmd_sa->add_option("--alpha-max", sa.alpha_max, "Grid end")->capture_default_str();
    cmd_sa->add_option("--alpha-steps", sa.steps, "Grid size (>= 2)")->capture_default_str();
    cmd_sa->add_option("--tol", sa.tol, "Bessel/truncation tolerance")->capture_default_str();
    cmd_sa->add_option("--output,-o", sa.output, "Output CSV path, or - for stdout")
        ->capture_default_str();

    SweepChiConfig sc;
    CLI::App* cmd_sc = app.add_subcommand(
        "sweep-chi", "Angular dependence at fixed alpha_tilde (CSV chi_rad,sigma_h,sigma_ab; "
                     "sigma_ab empty where |chi| > pi - 0.1)");
    cmd_sc->add_option("--alpha-tilde", sc.alpha_tilde, "Renormalized flux quanta count")
        ->capture_default_str();
    cmd_sc->add_option("--tan2eps", sc.tan2eps, "Barrier strength tan(2 eps)")
        ->capture_default_str();
    cmd_sc->add_option("--kh", sc.kh, "Screen distance times wavenumber [rad]")
        ->capture_default_str();
    cmd_sc->add_option("--order-max", sc.order_max, "Truncation order M (0 = auto)")
        ->capture_default_str();
    cmd_sc->add_option("--chi-min", sc.chi_min, "Grid start [rad]")->capture_default_str();
    cmd_sc->add_option("--chi-max", sc.chi_max, "Grid end [rad]")->capture_default_str();
    cmd_sc->add_option("--chi-steps", sc.steps, "Grid size (>= 2)")->capture_default_str();
    cmd_sc->add_option("--tol", sc.tol, "Bessel/truncation tolerance")->capture_default_str();
    cmd_sc->add_option("--output,-o", sc.output, "Output CSV path, or - for stdout")
        ->capture_default_str();

    AmplitudeConfig am;
    CLI::App* cmd_am = app.add_subcommand(
        "amplitude", "Single-point exact amplitude F_h and far-field diagnostic F (CSV "
                     "chi_rad,re_fh,im_fh,sigma_h,re_fasym,im_fasym)");
    cmd_am->add_option("--alpha-tilde", am.alpha_tilde, "Renormalized flux quanta count")
        ->capture_default_str();
    cmd_am->add_option("--tan2eps", am.tan2eps, "Barrier strength tan(2 eps)")
        ->capture_default_str();
    cmd_am->add_option("--kh", am.kh, "Screen distance times wavenumber [rad]")
        ->capture_default_str();
    cmd_am->add_option("--order-max", am.order_max, "Truncation order M (0 = auto)")
        ->capture_default_str();
    cmd_am->add_option("--chi", am.chi, "Scattering angle [rad]")->capture_default_str();
    cmd_am->add_option("--tol", am.tol, "Bessel/truncation tolerance")->capture_default_str();
    cmd_am->add_option("--output,-o", am.output, "Output CSV path, or - for stdout")
        ->capture_default_str();

    BesselConfig be;
    CLI::App* cmd_be = app.add_subcommand(
        "bessel", "Debug: J_nu(x) with method, error estimate and quadrature oracle");
    cmd_be->add_option("--nu", be.nu, "Order (0 <= nu <= 5000)")->required();
    cmd_be->add_option("--x", be.x, "Argument (0 <= x <= 10000)")->required();
    cmd_be->add_option("--tol", be.tol, "Relative tolerance")->capture_default_str();
    cmd_be->add_option("--output,-o", be.output, "Output CSV path, or - for stdout")
        ->capture_default_str();

    DispersionConfig di;
    CLI::App* cmd_di = app.add_subcommand(
        "dispersion", "Quasiparticle energy, beam energy, wavenumber and renormalized "
                      "flux from raw medium parameters");
    cmd_di->add_option("--a", di.a, "Normal pairing potential")->required();
    cmd_di->add_option("--b", di.b, "Abnormal pairing potential (>= 0)")->required();
    cmd_di->add_option("--alpha", di.alpha, "Bare flux quanta count")->capture_default_str();
    CLI::Option* opt_k = cmd_di->add_option("--k", di.k, "Wavenumber");
    CLI::Option* opt_om = cmd_di->add_option("--omega-hbar", di.omega_hbar, "Beam energy");
    opt_k->excludes(opt_om);
    cmd_di->add_option("--output,-o", di.output, "Output CSV path, or - for stdout")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    di.has_k = cmd_di->count("--k") > 0;
    di.has_omega = cmd_di->count("--omega-hbar") > 0;

    try {
        if (cmd_sa->parsed()) return run_sweep_alpha(sa);
        if (cmd_sc->parsed()) return run_sweep_chi(sc);
        if (cmd_am->parsed()) return run_amplitude(am);
        if (cmd_be->parsed()) return run_bessel(be);
        if (cmd_di->parsed()) return run_dispersion(di);
        std::cerr << "fluxscat: no subcommand\n";
        return 2;
    } catch (const fluxscat::accuracy_error& e) {
        std::cerr << "fluxscat: accuracy failure: " << e.what() << " (best value "
                  << e.best_value() << ", error estimate " << e.abs_error_estimate()
                  << ")\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "fluxscat: " << e.what() << "\n";
        return 2;
    } catch (const fluxscat::domain_error& e) {
        std::cerr << "fluxscat: " << e.what() << "\n";
        return 2;
    } catch (const fluxscat::divergence_error& e) {
        std::cerr << "fluxscat: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fluxscat: error: " << e.what() << "\n";
        return 1;
    }
}
