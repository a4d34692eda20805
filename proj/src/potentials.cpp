#include "magcp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magcp/errors.hpp"

namespace magcp {

namespace {

using cd = std::complex<double>;
constexpr double pi = constants::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Reduced units: frequencies in omega_e, wavenumbers in k_e, c = 1.
SurfaceModel reduced_surface(const ParticleSpec& p, const SurfaceModel& s) {
    validate_surface(s);
    return scaled(s, p.omega_e);
}

std::vector<double> natural_scales(const ParticleSpec& p, const SurfaceModel& reduced, double z) {
    std::vector<double> pts{p.omega_tilde, 1.0, 1.0 / (2.0 * z)};
    if (const auto* d = std::get_if<Drude>(&reduced)) {
        pts.push_back(d->omega_p);
        pts.push_back(d->gamma);
    } else if (const auto* pl = std::get_if<Plasma>(&reduced)) {
        pts.push_back(pl->omega_p);
    }
    return pts;
}

// The user's tolerances and budget, the natural scales as breakpoints. Absolute tolerance is dropped
// for integrals of one sign, where the relative criterion is always attainable.
QuadratureConfig with_breaks(const QuadratureConfig& user, const std::vector<double>& scales, bool single_signed) {
    QuadratureConfig cfg = user;
    cfg.validate();
    cfg.split_points.insert(cfg.split_points.end(), scales.begin(), scales.end());
    std::erase_if(cfg.split_points, [](double x) { return !(x > 0.0) || !std::isfinite(x); });
    if (single_signed) cfg.abs_tol = 0.0;
    return cfg;
}

template <class T>
T checked(const IntegralResult<T>& r, T scale, const char* what) {
    if (!r.converged)
        throw QuadratureFailure(std::string(what) + ": quadrature did not converge", cd(r.value * scale),
                                r.error_estimate * std::abs(scale), r.evaluations, r.failed_level);
    return r.value * scale;
}

double check_z(const Geometry& g) {
    if (!(g.z_tilde > 0.0) || !std::isfinite(g.z_tilde)) throw NonPositiveInput("z_tilde must be positive");
    return g.z_tilde;
}

// Ground-state imaginary-axis double integral
//   int_0^inf dx w(x) int_x^inf dk exp(-2 k z) [a x^2 r_s + b k^2 r_p] (x 2k for the force)
double ground_double_integral(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                              const QuadratureConfig& quad, Observable what, bool magnetic) {
    const double z = check_z(g);
    const SurfaceModel m = reduced_surface(p, s);
    const double w2 = magnetic ? p.omega_tilde * p.omega_tilde : 1.0;
    const bool force = what == Observable::force;

    NestedIntegrand ni;
    ni.f = [&](double x, double k) {
        const ReflectionPair r = reflection_imag_axis(m, k, x, 1.0);
        const double bracket = magnetic ? x * x * r.r_p - r.r_s * k * k : x * x * r.r_s - r.r_p * k * k;
        double v = std::exp(-2.0 * k * z) * bracket / (x * x + w2);
        if (force) v *= 2.0 * k;
        return v;
    };
    ni.inner_lower = [](double x) { return x; };
    ni.inner_offsets = {1.0 / (2.0 * z)};

    const auto cfg = with_breaks(quad, natural_scales(p, m, z), true);
    const auto r = integrate_nested(ni, 0.0, cfg);
    double pref = 3.0 / (8.0 * pi);
    if (magnetic) pref *= p.eta * p.spin * p.omega_tilde;
    return checked(r, pref, magnetic ? "magnetic broadband shift" : "electric ground shift");
}

// f(y) = (1 + y + y^2) e^-y and the combination 3 f(y) - y^2 (1 - y) e^-y that appears in -d/dz.
double f_shift(double y) { return (1.0 + y + y * y) * std::exp(-y); }
double f_force(double y) { return 3.0 * f_shift(y) - y * y * (1.0 - y) * std::exp(-y); }

double pc_closed(const Geometry& g, const QuadratureConfig& quad, Observable what,
                 double w) {
    const double z = check_z(g);
    const bool force = what == Observable::force;
    const auto integrand = [&](double x) {
        const double y = 2.0 * x * z;
        return w / (x * x + w * w) * (force ? f_force(y) : f_shift(y));
    };
    const auto cfg = with_breaks(quad, {w, 1.0 / (2.0 * z)}, true);
    const auto r = integrate_semi_infinite(integrand, 0.0, cfg);
    const double zp = force ? z * z * z * z : z * z * z;
    return checked(r, 3.0 / (32.0 * pi * zp), "perfect-conductor closed form");
}

// e^-x Ei(x) for x > 0 without overflow.
double exp_neg_ei(double x) {
    if (x < 40.0) return std::exp(-x) * std::expint(x);
    double term = 1.0 / x;
    double sum = term;
    for (int k = 1; k < 40; ++k) {
        const double next = term * k / x;
        if (next > term || next < 1e-17 * sum) break;
        term = next;
        sum += term;
    }
    return sum;
}

struct SurfacePole {
    bool present = false;
    bool on_axis = false;  // lossless: principal value plus half residue
    cd v0;
    cd eps;
};

// p-polarised surface-mode pole of r_p in the evanescent variable v = kappa (eps v + kappa_m = 0).
SurfacePole surface_pole(const SurfaceModel& m, double omega) {
    SurfacePole sp;
    if (is_perfect_conductor(m)) return sp;
    sp.eps = permittivity_real_freq(m, omega);
    if (!(sp.eps.real() < -1.0)) return sp;
    sp.v0 = omega / std::sqrt(-(sp.eps + 1.0));
    sp.on_axis = sp.eps.imag() == 0.0;
    sp.present = sp.on_axis || std::abs(sp.v0.imag()) < 0.1 * sp.v0.real();
    return sp;
}

// int_0^inf dk_par (k_par/kappa) exp(-2 kappa z) [a_p(kappa) r_p + a_s(kappa) r_s] (x 2 kappa for the force)
// at reduced frequency k.
template <class Ap, class As>
cd resonant_integral(const SurfaceModel& m, double k, double z, const QuadratureConfig& quad, Observable what,
                     Ap a_p, As a_s, const char* label) {
    const bool force = what == Observable::force;
    const auto weight = [&](cd kappa) { return force ? 2.0 * kappa : cd(1.0); };

    const SurfacePole pole = surface_pole(m, k);
    cd residue_coeff = 0.0;
    if (pole.present && pole.on_axis) {
        const cd e2 = pole.eps * pole.eps;
        residue_coeff = 2.0 * e2 * pole.v0 / (e2 - 1.0) * a_p(pole.v0) * weight(pole.v0);
    }
    const double v0 = pole.v0.real();

    const auto f = [&](double q, cd kappa) -> cd {
        const FresnelPair r = fresnel_real_freq_kappa(m, kappa, k, 1.0);
        cd v = (q / kappa) * std::exp(-2.0 * kappa * z) * (a_p(kappa) * r.r_p + a_s(kappa) * r.r_s) * weight(kappa);
        if (residue_coeff != 0.0 && kappa.imag() == 0.0)
            v -= residue_coeff * std::exp(-2.0 * kappa.real() * z) / (kappa.real() - v0) * (q / kappa.real());
        return v;
    };

    std::vector<double> v_scales{1.0 / (2.0 * z), k};
    if (pole.present) {
        const double width = std::abs(pole.v0.imag());
        v_scales.push_back(v0);
        for (double n : {1.0, 4.0, 16.0, 64.0}) {
            v_scales.push_back(v0 + n * width);
            if (v0 - n * width > 0.0) v_scales.push_back(v0 - n * width);
        }
    }
    std::erase_if(v_scales, [](double v) { return !(v > 0.0) || !std::isfinite(v); });

    const QuadratureConfig cfg = with_breaks(quad, {}, false);
    const auto r = integrate_oscillatory_split(f, k, cfg, pi / z, v_scales);
    cd value = checked(r, cd(1.0), label);
    if (residue_coeff != 0.0) {
        const double a = 2.0 * z;
        value += residue_coeff * (-exp_neg_ei(a * v0) + cd(0.0, pi) * std::exp(-a * v0));
    }
    return value;
}

}  // namespace

double electric_ground(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                       const QuadratureConfig& quad, Observable what) {
    return ground_double_integral(p, s, g, quad, what, false);
}

double magnetic_broadband(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                          const QuadratureConfig& quad, Observable what) {
    return ground_double_integral(p, s, g, quad, what, true);
}

double magnetic_static(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                       const QuadratureConfig& quad, Observable what) {
    const double z = check_z(g);
    const SurfaceModel m = reduced_surface(p, s);
    const bool force = what == Observable::force;
    const double pref = p.eta * p.spin * p.spin;
    if (std::holds_alternative<Drude>(m)) return 0.0;
    if (is_perfect_conductor(m))
        return force ? 9.0 / 32.0 * pref / (z * z * z * z) : 3.0 / 32.0 * pref / (z * z * z);

    const double kp = std::get<Plasma>(m).omega_p;
    const auto integrand = [&](double k) {
        const double r_s = fresnel_static_limit(m, k, 1.0).r_s.real();
        double v = -std::exp(-2.0 * k * z) * k * k * r_s;
        if (force) v *= 2.0 * k;
        return v;
    };
    const auto cfg = with_breaks(quad, {1.0 / (2.0 * z), kp}, true);
    const auto r = integrate_semi_infinite(integrand, 0.0, cfg);
    return checked(r, 3.0 / 8.0 * pref, "magnetostatic shift");
}

std::complex<double> magnetic_resonant_integral(const ParticleSpec& p, const SurfaceModel& s,
                                                const Geometry& g, const QuadratureConfig& quad,
                                                Observable what) {
    const double z = check_z(g);
    const SurfaceModel m = reduced_surface(p, s);
    const double k = p.omega_tilde;
    const auto a_p = [k](cd) { return cd(1.0 / k); };
    const auto a_s = [k](cd kappa) { return kappa * kappa / (k * k * k); };
    return resonant_integral(m, k, z, quad, what, a_p, a_s, "resonant magnetic integral");
}

double magnetic_excited0(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                         const QuadratureConfig& quad, Observable what) {
    if (p.m_s != 0.0) throw SublevelOutOfRange("excited-state shift is defined for m_S = 0");
    const double w = p.omega_tilde;
    const cd integral = magnetic_resonant_integral(p, s, g, quad, what);
    return -3.0 / 16.0 * p.eta * p.spin * (p.spin + 1.0) * w * w * w * integral.real();
}

double electric_pc_closed(const ParticleSpec&, const Geometry& g, const QuadratureConfig& quad,
                          Observable what) {
    return -pc_closed(g, quad, what, 1.0);
}

double magnetic_pc_closed(const ParticleSpec& p, const Geometry& g, const QuadratureConfig& quad,
                          Observable what) {
    return p.eta * p.spin * pc_closed(g, quad, what, p.omega_tilde);
}

double magnetic_excited0_pc_closed(const ParticleSpec& p, const Geometry& g, Observable what) {
    const double z = check_z(g);
    const double w = p.omega_tilde * z;
    const double c2 = std::cos(2.0 * w);
    const double s2 = std::sin(2.0 * w);
    const double bracket = c2 + 2.0 * w * s2 - 4.0 * w * w * c2;
    const double a = 3.0 * p.eta * p.spin * (p.spin + 1.0) / 64.0;
    if (what == Observable::shift) return a * bracket / (z * z * z);
    const double dbracket = -4.0 * w * c2 + 8.0 * w * w * s2;
    return a * (3.0 * bracket - w * dbracket) / (z * z * z * z);
}

double delta_gamma_e(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                     const QuadratureConfig& quad) {
    const double z = check_z(g);
    const SurfaceModel m = reduced_surface(p, s);
    const auto a_p = [](cd kappa) { return kappa * kappa; };
    const auto a_s = [](cd) { return cd(1.0); };
    const cd j = resonant_integral(m, 1.0, z, quad, Observable::shift, a_p, a_s, "electric rate integral");
    return 0.75 * j.imag();
}

double delta_gamma_m(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                     const QuadratureConfig& quad, double m_s) {
    if (std::abs(m_s) > p.spin) throw SublevelOutOfRange("|m_S| exceeds S");
    const double matrix_element = p.spin * (p.spin + 1.0) - m_s * (m_s - 1.0);
    if (matrix_element == 0.0) return 0.0;
    const double w = p.omega_tilde;
    const cd integral = magnetic_resonant_integral(p, s, g, quad, Observable::shift);
    return 3.0 / 8.0 * p.eta * w * w * w * matrix_element * integral.imag();
}

PotentialBreakdown potential_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                                       const QuadratureConfig& quad, LevelMode mode) {
    PotentialBreakdown out;
    const auto eval = [](auto&& fn, double& slot, bool& ok) {
        try {
            slot = fn();
        } catch (const QuadratureFailure& e) {
            slot = e.value.real();
            ok = false;
        }
    };
    const ParticleSpec ground = p.with_spin(p.spin, -p.spin);
    eval([&] { return u_e_ground(ground, s, g, quad); }, out.u_e_minus, out.converged_e);
    eval([&] { return u_m_ground_broadband(ground, s, g, quad); }, out.u_m_minus, out.converged_m_minus);
    eval([&] { return u_m_static(ground, s, g, quad); }, out.u_m_z, out.converged_m_z);
    out.total_ground = out.u_e_minus + out.u_m_minus + out.u_m_z;
    out.u_m_excited0 = nan;
    out.total_excited0 = nan;
    if (mode == LevelMode::excited0) {
        const ParticleSpec excited = p.with_spin(p.spin, 0.0);
        eval([&] { return u_m_excited0(excited, s, g, quad); }, out.u_m_excited0, out.converged_m_excited0);
        out.total_excited0 = out.u_e_minus + out.u_m_excited0;
    }
    return out;
}

DecayBreakdown decay_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                               const QuadratureConfig& quad, double m_s) {
    DecayBreakdown out;
    try {
        out.delta_gamma_e = delta_gamma_e(p, s, g, quad);
    } catch (const QuadratureFailure& e) {
        out.delta_gamma_e = 0.75 * e.value.imag();
        out.converged_e = false;
    }
    try {
        out.delta_gamma_m = delta_gamma_m(p, s, g, quad, m_s);
    } catch (const QuadratureFailure& e) {
        const double w = p.omega_tilde;
        out.delta_gamma_m = 3.0 / 8.0 * p.eta * w * w * w *
                            (p.spin * (p.spin + 1.0) - m_s * (m_s - 1.0)) * e.value.imag();
        out.converged_m = false;
    }
    return out;
}

ExcitedDecomposition excited_shift_decomposition(const ParticleSpec& p, const SurfaceModel& s,
                                                 const Geometry& g, const QuadratureConfig& quad,
                                                 double m_s) {
    if (std::abs(m_s) > p.spin) throw SublevelOutOfRange("|m_S| exceeds S");
    const double s2 = p.spin * (p.spin + 1.0);
    const double up = s2 - m_s * (m_s + 1.0);    // <S- S+>
    const double down = s2 - m_s * (m_s - 1.0);  // <S+ S->
    const double per_spin = u_m_ground_broadband(p.with_spin(1.0, -1.0), s, g, quad);

    ExcitedDecomposition out;
    out.off_resonant_raising = 0.5 * up * per_spin;
    out.off_resonant_lowering = -0.5 * down * per_spin;
    if (down != 0.0) {
        const double w = p.omega_tilde;
        out.resonant = -3.0 / 16.0 * p.eta * w * w * w * down *
                       magnetic_resonant_integral(p, s, g, quad).real();
    }
    return out;
}

}  // namespace magcp
