#include "magcp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magcp/errors.hpp"

namespace magcp {

namespace {

constexpr double pi = constants::pi;

// omega_p / omega_e, or +inf for the perfect conductor.
double reduced_plasma_frequency(const ParticleSpec& p, const SurfaceModel& s) {
    if (const auto* d = std::get_if<Drude>(&s)) return d->omega_p / p.omega_e;
    if (const auto* pl = std::get_if<Plasma>(&s)) return pl->omega_p / p.omega_e;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

std::string_view to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::crossover: break;
    }
    return "crossover";
}

Region classify_region(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g, double margin) {
    if (!(margin >= 1.0)) throw NonPositiveInput("region margin must be >= 1");
    validate_surface(s);
    const double z = g.z_tilde;
    const double len_e = 1.0;
    const double len_p = 1.0 / reduced_plasma_frequency(p, s);  // 0 for the perfect conductor
    const double len_m = 1.0 / p.omega_tilde;

    const double short_min = is_perfect_conductor(s) ? len_e : std::min(len_e, len_p);
    const double short_max = std::max(len_e, len_p);
    if (z * margin < std::min(short_min, len_m)) return Region::I;
    if (z > short_max * margin && z * margin < len_m) return Region::II;
    if (z > std::max(short_max, len_m) * margin) return Region::III;
    return Region::crossover;
}

AsymptoticCoefficients coefficients(const ParticleSpec& p, const SurfaceModel& s) {
    if (is_perfect_conductor(s)) throw UnsupportedModel("no finite-plasma-frequency coefficients for a perfect conductor");
    validate_surface(s);
    const double P = reduced_plasma_frequency(p, s);
    const double w = p.omega_tilde;
    const double pref = 3.0 * w * p.eta * p.spin * P / 64.0;
    const double common = P / (w + P / std::sqrt(2.0));

    AsymptoticCoefficients c;
    c.c_e3_drude = 3.0 * P / (64.0 * (std::sqrt(2.0) + P));
    if (const auto* d = std::get_if<Drude>(&s)) {
        const double g = d->gamma / p.omega_e;
        c.c_m1_drude = pref * (common + P * (w + 2.0 * g / pi * std::log(g / w)) / (2.0 * (w * w + g * g)));
    } else {
        c.c_m1_drude = std::numeric_limits<double>::quiet_NaN();
    }
    c.c_m1_plasma = pref * (common + P / (2.0 * w)) + 3.0 / 64.0 * P * P * p.eta * p.spin * p.spin;
    return c;
}

double table1_potential(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g, Region region,
                        ShiftKind kind) {
    if (region == Region::crossover) throw CrossoverRegion("no asymptotic law in the crossover region");
    const double z = g.z_tilde;
    if (!(z > 0.0)) throw NonPositiveInput("z_tilde must be positive");
    const double z3 = z * z * z;
    const double z4 = z3 * z;
    const double S = p.spin;
    const double eta_s = p.eta * S;
    const double w = p.omega_tilde;
    const bool electric = kind == ShiftKind::electric;
    const bool drude = std::holds_alternative<Drude>(s);

    const double retarded_e = -3.0 / (16.0 * pi * z4);
    const double near_m = 3.0 / 64.0 * eta_s * (2.0 * S + 1.0) / z3;
    const double far_m = 3.0 / (16.0 * pi * z4) * eta_s / w;

    if (is_perfect_conductor(s)) {
        switch (region) {
            case Region::I: return electric ? -3.0 / (64.0 * z3) : near_m;
            case Region::II: return electric ? retarded_e : near_m;
            default: return electric ? retarded_e : far_m * (pi * S * z * w / 2.0 + 1.0);
        }
    }

    if (region == Region::I) {
        const AsymptoticCoefficients c = coefficients(p, s);
        if (electric) return -c.c_e3_drude / z3;
        return (drude ? c.c_m1_drude : c.c_m1_plasma) / z;
    }
    if (electric) return retarded_e;
    if (region == Region::II) return drude ? 3.0 / 64.0 * eta_s / z3 : near_m;
    return drude ? far_m : far_m * (pi * S * z * w / 2.0 + 1.0);
}

double nr_expansion_parameter(double eps, double kappa_perp, double xi, double c) {
    if (!(kappa_perp > 0.0)) throw DomainViolation("kappa_perp must be positive");
    if (!(xi >= 0.0)) throw NegativeFrequency("xi must be >= 0");
    if (!(eps >= 1.0)) throw DomainViolation("eps(i xi) must be >= 1");
    return std::sqrt(eps - 1.0) * xi / (kappa_perp * c);
}

FresnelPair fresnel_nr_expansion_eps(double eps, double kappa_perp, double xi, double c) {
    const double t = nr_expansion_parameter(eps, kappa_perp, xi, c);
    if (!(t < 0.3)) throw ExpansionOutOfValidity("non-retarded Fresnel expansion needs parameter < 0.3");
    const double x2 = (xi / (kappa_perp * c)) * (xi / (kappa_perp * c));
    const double r_p0 = (eps - 1.0) / (eps + 1.0);
    const double r_p = r_p0 - eps * (eps - 1.0) / ((eps + 1.0) * (eps + 1.0)) * x2;
    const double r_s = -0.25 * (eps - 1.0) * x2;
    return {r_s, r_p};
}

FresnelPair fresnel_nr_expansion(const SurfaceModel& s, double kappa_perp, double xi, double c) {
    if (is_perfect_conductor(s)) throw ExpansionOutOfValidity("perfect conductor has no finite expansion parameter");
    return fresnel_nr_expansion_eps(permittivity_imag_axis(s, xi), kappa_perp, xi, c);
}

SurfaceResonance surface_resonance_potential(const ParticleSpec& p, const Drude& surface, const Geometry& g,
                                             double margin) {
    validate_surface(surface);
    const double z = g.z_tilde;
    const double w = p.omega_tilde;
    if (!(z > 0.0)) throw NonPositiveInput("z_tilde must be positive");
    if (!(w * z * margin < 1.0)) throw RegimeViolation("surface-resonance forms need omega_m z0 / c << 1");

    SurfaceResonance out;
    out.eps_m = permittivity_real_freq(surface, p.omega_m);
    out.q_factor = surface.omega_p / (std::sqrt(2.0) * surface.gamma);
    out.detuning = (p.omega_m - surface.omega_p / std::sqrt(2.0)) / surface.gamma;

    const double a = p.eta * p.spin * (p.spin + 1.0) * w * w / z;
    out.re_form = 3.0 * a / 128.0 * resonance_bracket(out.eps_m);
    const double q = out.q_factor;
    const double d = out.detuning;
    if (q >= margin * std::abs(d) && std::abs(d) >= margin) {
        out.q_delta_form = -3.0 * a / 256.0 * q / d;
        out.rate_q_delta = 3.0 * a / 64.0 * q / (d * d);
    }
    return out;
}

double spin_flip_nr_pc(const ParticleSpec& p) {
    const double w = p.omega_tilde;
    return p.eta * p.spin * (p.spin + 1.0) * w * w * w / 3.0;
}

}  // namespace magcp
