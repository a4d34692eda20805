#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include "magcp/core_params.hpp"
#include "magcp/materials.hpp"

namespace magcp {

// Distance regimes. The length scales in units of 1/k_e are 1 (c/omega_e), 1/P (c/omega_p) and
// 1/omega_tilde (c/omega_m).
//   I          z below min(c/omega_e, c/omega_p) / margin
//   II         max(c/omega_e, c/omega_p) * margin < z < (c/omega_m) / margin
//   III        z above max of all three scales times margin
//   crossover  none of the above
enum class Region { I, II, III, crossover };

std::string_view to_string(Region r);

Region classify_region(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g, double margin = 10.0);

enum class ShiftKind { electric, magnetic };

// Ground-state (m_S = -S) asymptotic shift in units of hbar Gamma0. The magnetic entries include the
// magnetostatic term. The Drude and plasma Region I electric entries both use -c_e3_drude / z^3.
// Throws CrossoverRegion for Region::crossover.
double table1_potential(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g, Region region,
                        ShiftKind kind);

struct AsymptoticCoefficients {
    double c_e3_drude = 0.0;  // positive; the electric Region I shift is -c_e3_drude / z^3
    double c_m1_drude = 0.0;
    double c_m1_plasma = 0.0;
};

// Evaluated at the model's omega_p (and gamma for the Drude coefficient; a plasma model gives the
// gamma -> 0 limit of c_m1_drude, which diverges logarithmically and is reported as NaN).
// Throws UnsupportedModel for the perfect conductor.
AsymptoticCoefficients coefficients(const ParticleSpec& p, const SurfaceModel& s);

// Second-order expansion of the imaginary-axis Fresnel coefficients in
//   t = sqrt(eps(i xi) - 1) xi / (kappa c),
// valid for t < 0.3 (ExpansionOutOfValidity otherwise).
FresnelPair fresnel_nr_expansion(const SurfaceModel& s, double kappa_perp, double xi, double c = constants::c);
FresnelPair fresnel_nr_expansion_eps(double eps, double kappa_perp, double xi, double c = constants::c);
double nr_expansion_parameter(double eps, double kappa_perp, double xi, double c = constants::c);

// Q = omega_p / (sqrt 2 gamma), delta_p = (omega_m - omega_p / sqrt 2) / gamma.
struct SurfaceResonance {
    std::complex<double> eps_m;  // eps(omega_m)
    double q_factor = 0.0;
    double detuning = 0.0;
    double re_form = 0.0;                  // (3 eta S(S+1) w^2 / 128 z) Re[(eps-1)(eps+5)/(eps+1)]
    std::optional<double> q_delta_form;    // -(3 eta S(S+1) w^2 / 256 z) Q / delta_p
    std::optional<double> rate_q_delta;    // (3 eta S(S+1) w^2 / 64 z) Q / delta_p^2, units of Gamma0
};

inline double resonance_bracket(std::complex<double> eps) {
    return ((eps - 1.0) * (eps + 5.0) / (eps + 1.0)).real();
}

// Requires omega_tilde z_tilde < 1 / margin (RegimeViolation otherwise). The Q/delta_p forms are
// filled only when Q >= margin |delta_p| and |delta_p| >= margin.
SurfaceResonance surface_resonance_potential(const ParticleSpec& p, const Drude& surface, const Geometry& g,
                                             double margin = 10.0);

// Non-retarded perfect-conductor spin-flip rate of |S, 0> in units of Gamma0: eta S(S+1) w^3 / 3.
double spin_flip_nr_pc(const ParticleSpec& p);

}  // namespace magcp
