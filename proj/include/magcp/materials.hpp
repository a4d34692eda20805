#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "magcp/core_params.hpp"

namespace magcp {

struct PerfectConductor {};

struct Drude {
    double omega_p = 0.0;  // rad/s
    double gamma = 0.0;    // rad/s
};

struct Plasma {
    double omega_p = 0.0;  // rad/s
};

using SurfaceModel = std::variant<PerfectConductor, Drude, Plasma>;

// Throws NonPositiveInput for invalid parameters; returns warnings (gamma > omega_p / 10).
std::vector<std::string> validate_surface(const SurfaceModel& model);

std::string model_name(const SurfaceModel& model);

// All frequencies divided by omega_ref. Used with c = 1 and wavenumbers in units of omega_ref / c.
SurfaceModel scaled(const SurfaceModel& model, double omega_ref);

inline bool is_perfect_conductor(const SurfaceModel& m) {
    return std::holds_alternative<PerfectConductor>(m);
}

struct FresnelPair {
    std::complex<double> r_s;
    std::complex<double> r_p;
};

// Real-valued reflection on the imaginary axis.
struct ReflectionPair {
    double r_s = 0.0;
    double r_p = 0.0;
};

// The optional speed-of-light argument lets the same routines run in reduced units (c = 1).

// epsilon(i xi); +infinity for the perfect conductor.
double permittivity_imag_axis(const SurfaceModel& model, double xi);
// epsilon(i xi) - 1, evaluated without forming epsilon first.
double susceptibility_imag_axis(const SurfaceModel& model, double xi);

ReflectionPair reflection_imag_axis(const SurfaceModel& model, double kappa_perp, double xi,
                                    double c = constants::c);
FresnelPair fresnel_imag_axis(const SurfaceModel& model, double kappa_perp, double xi,
                              double c = constants::c);
FresnelPair fresnel_static_limit(const SurfaceModel& model, double kappa_perp,
                                 double c = constants::c);

// epsilon(omega) = 1 - omega_p^2 / (omega^2 + i gamma omega); complex infinity for the perfect conductor.
std::complex<double> permittivity_real_freq(const SurfaceModel& model, double omega);

// Root with Re >= 0, except on the negative real axis where -i sqrt|z| is returned.
std::complex<double> decaying_sqrt(std::complex<double> z);

// kappa_perp for real frequency: -i sqrt(k^2 - k_par^2) below the light line, sqrt(k_par^2 - k^2) above.
std::complex<double> kappa_perp_real(double k_par, double k);

FresnelPair fresnel_real_freq(const SurfaceModel& model, double k_par, double omega,
                              double c = constants::c);

// Same, with kappa_perp supplied by the caller (used where kappa is known more accurately than
// from k_par, e.g. after a substitution).
FresnelPair fresnel_real_freq_kappa(const SurfaceModel& model, std::complex<double> kappa_perp,
                                    double omega, double c = constants::c);

}  // namespace magcp
