#include "magcp/materials.hpp"

#include <cmath>
#include <limits>

#include "magcp/errors.hpp"

namespace magcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double inf = std::numeric_limits<double>::infinity();

void check_frequency(double xi) {
    if (xi < 0.0 || std::isnan(xi)) throw NegativeFrequency("frequency must be >= 0");
}

// (epsilon - 1) (xi / c)^2 on the imaginary axis, finite as xi -> 0.
double screening(const SurfaceModel& model, double xi, double c) {
    return std::visit(overloaded{
                          [](const PerfectConductor&) { return inf; },
                          [&](const Drude& d) {
                              const double kp = d.omega_p / c;
                              return kp * kp * xi / (xi + d.gamma);
                          },
                          [&](const Plasma& p) {
                              const double kp = p.omega_p / c;
                              return kp * kp;
                          },
                      },
                      model);
}

}  // namespace

std::vector<std::string> validate_surface(const SurfaceModel& model) {
    std::vector<std::string> warnings;
    std::visit(overloaded{
                   [](const PerfectConductor&) {},
                   [&](const Drude& d) {
                       if (!(d.omega_p > 0.0) || !std::isfinite(d.omega_p))
                           throw NonPositiveInput("Drude omega_p must be positive");
                       if (!(d.gamma > 0.0) || !std::isfinite(d.gamma))
                           throw NonPositiveInput("Drude gamma must be positive");
                       if (d.gamma > d.omega_p / 10.0)
                           warnings.emplace_back("Drude gamma exceeds omega_p/10; weak-damping assumption is poor");
                   },
                   [](const Plasma& p) {
                       if (!(p.omega_p > 0.0) || !std::isfinite(p.omega_p))
                           throw NonPositiveInput("plasma omega_p must be positive");
                   },
               },
               model);
    return warnings;
}

std::string model_name(const SurfaceModel& model) {
    return std::visit(overloaded{
                          [](const PerfectConductor&) { return std::string("perfect_conductor"); },
                          [](const Drude&) { return std::string("drude"); },
                          [](const Plasma&) { return std::string("plasma"); },
                      },
                      model);
}

SurfaceModel scaled(const SurfaceModel& model, double omega_ref) {
    return std::visit(overloaded{
                          [](const PerfectConductor& m) -> SurfaceModel { return m; },
                          [&](const Drude& d) -> SurfaceModel {
                              return Drude{d.omega_p / omega_ref, d.gamma / omega_ref};
                          },
                          [&](const Plasma& p) -> SurfaceModel { return Plasma{p.omega_p / omega_ref}; },
                      },
                      model);
}

double susceptibility_imag_axis(const SurfaceModel& model, double xi) {
    check_frequency(xi);
    return std::visit(overloaded{
                          [](const PerfectConductor&) { return inf; },
                          [&](const Drude& d) {
                              return xi == 0.0 ? inf : d.omega_p * d.omega_p / (xi * (xi + d.gamma));
                          },
                          [&](const Plasma& p) { return xi == 0.0 ? inf : (p.omega_p / xi) * (p.omega_p / xi); },
                      },
                      model);
}

double permittivity_imag_axis(const SurfaceModel& model, double xi) {
    return 1.0 + susceptibility_imag_axis(model, xi);
}

ReflectionPair reflection_imag_axis(const SurfaceModel& model, double kappa_perp, double xi, double c) {
    check_frequency(xi);
    const double k = xi / c;
    if (kappa_perp < k * (1.0 - 1e-12))
        throw DomainViolation("kappa_perp below xi/c on the imaginary axis");
    if (is_perfect_conductor(model)) return {-1.0, 1.0};
    if (xi == 0.0) {
        const FresnelPair st = fresnel_static_limit(model, kappa_perp, c);
        return {st.r_s.real(), st.r_p.real()};
    }

    const double d = screening(model, xi, c);
    const double chi = susceptibility_imag_axis(model, xi);
    const double s = std::sqrt(kappa_perp * kappa_perp + d);
    const double rs_den = kappa_perp + s;
    const double r_s = -d / (rs_den * rs_den);

    double r_p;
    if (chi > 1.0) {
        // Divide through by chi^2 so that the Drude xi -> 0 end cannot overflow.
        const double ic = 1.0 / chi;
        const double den = (ic + 1.0) * kappa_perp + s * ic;
        r_p = ((2.0 * ic + 1.0) * kappa_perp * kappa_perp - k * k * ic) / (den * den);
    } else {
        const double den = (1.0 + chi) * kappa_perp + s;
        r_p = chi * ((2.0 + chi) * kappa_perp * kappa_perp - k * k) / (den * den);
    }
    return {r_s, r_p};
}

FresnelPair fresnel_imag_axis(const SurfaceModel& model, double kappa_perp, double xi, double c) {
    const ReflectionPair r = reflection_imag_axis(model, kappa_perp, xi, c);
    return {r.r_s, r.r_p};
}

FresnelPair fresnel_static_limit(const SurfaceModel& model, double kappa_perp, double c) {
    if (!(kappa_perp > 0.0)) throw DomainViolation("static limit needs kappa_perp > 0");
    return std::visit(overloaded{
                          [](const PerfectConductor&) { return FresnelPair{-1.0, 1.0}; },
                          [](const Drude&) { return FresnelPair{0.0, 1.0}; },
                          [&](const Plasma& p) {
                              const double kp = p.omega_p / c;
                              const double s = std::hypot(kappa_perp, kp);
                              const double den = kappa_perp + s;
                              return FresnelPair{-kp * kp / (den * den), 1.0};
                          },
                      },
                      model);
}

std::complex<double> permittivity_real_freq(const SurfaceModel& model, double omega) {
    if (!(omega > 0.0)) throw NegativeFrequency("real frequency must be positive");
    using cd = std::complex<double>;
    return std::visit(overloaded{
                          [](const PerfectConductor&) { return cd(inf, 0.0); },
                          [&](const Drude& d) {
                              return 1.0 - d.omega_p * d.omega_p / cd(omega * omega, d.gamma * omega);
                          },
                          [&](const Plasma& p) { return cd(1.0 - (p.omega_p / omega) * (p.omega_p / omega), 0.0); },
                      },
                      model);
}

std::complex<double> decaying_sqrt(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() < 0.0) return {0.0, -std::sqrt(-z.real())};
    return std::sqrt(z);
}

std::complex<double> kappa_perp_real(double k_par, double k) {
    if (k_par < k) return {0.0, -std::sqrt((k - k_par) * (k + k_par))};
    return {std::sqrt((k_par - k) * (k_par + k)), 0.0};
}

FresnelPair fresnel_real_freq_kappa(const SurfaceModel& model, std::complex<double> kappa, double omega,
                                    double c) {
    if (is_perfect_conductor(model)) return {-1.0, 1.0};
    const std::complex<double> eps = permittivity_real_freq(model, omega);
    const std::complex<double> chi = eps - 1.0;
    const double k = omega / c;
    const std::complex<double> kappa_m = decaying_sqrt(kappa * kappa - chi * k * k);

    if (std::abs(kappa * kappa + k * k) <= 1e-14 * k * k) {
        // Normal incidence: kappa = -i k, kappa_m = -i n k. Written through n so that eps = 0 stays finite.
        const std::complex<double> n = std::complex<double>(0.0, 1.0) * kappa_m / k;
        return {(1.0 - n) / (1.0 + n), (n - 1.0) / (n + 1.0)};
    }
    const std::complex<double> ds = kappa + kappa_m;
    const std::complex<double> dp = eps * kappa + kappa_m;
    return {chi * k * k / (ds * ds), chi * ((eps + 1.0) * kappa * kappa + k * k) / (dp * dp)};
}

FresnelPair fresnel_real_freq(const SurfaceModel& model, double k_par, double omega, double c) {
    if (!(k_par >= 0.0)) throw DomainViolation("k_par must be >= 0");
    if (!(omega > 0.0)) throw NegativeFrequency("real frequency must be positive");
    const double k = omega / c;
    return fresnel_real_freq_kappa(model, kappa_perp_real(k_par, k), omega, c);
}

}  // namespace magcp
