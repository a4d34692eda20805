#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magcp {

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299792458.0;
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / (2.0 * pi);
inline constexpr double e = 1.602176634e-19;
inline constexpr double m_e = 9.1093837015e-31;
inline constexpr double alpha = 7.2973525693e-3;
// epsilon_0, a_0 and the spin gyromagnetic ratio follow from the set above, so the
// two expressions for eta agree to rounding.
inline constexpr double epsilon_0 = e * e / (2.0 * alpha * h * c);
inline constexpr double a_0 = hbar / (m_e * c * alpha);
inline constexpr double gamma_spin = e / m_e;
inline constexpr double m_u = 1.66053906660e-27;
inline constexpr double standard_gravity = 9.81;
}  // namespace constants

enum class DipoleUnit { coulomb_metre, e_bohr };

struct DipoleMoment {
    double value = 0.0;
    DipoleUnit unit = DipoleUnit::e_bohr;

    double coulomb_metres() const {
        return unit == DipoleUnit::e_bohr ? value * constants::e * constants::a_0 : value;
    }
};

// How a directly supplied Gamma0 is read: as rad/s, or as a cyclic rate to be multiplied by 2 pi.
enum class RateConvention { angular, cyclic };

struct RawParticle {
    double omega_e = 0.0;  // rad/s
    double omega_m = 0.0;  // rad/s
    DipoleMoment dipole;
    double spin = 0.0;
    double m_s = 0.0;
    std::optional<double> gamma_0;  // 1/s, see gamma_0_convention
    RateConvention gamma_0_convention = RateConvention::angular;
    double mass_per_spin = constants::m_u;  // kg
    std::optional<double> mass;             // kg, replaces spin * mass_per_spin
    bool allow_hierarchy_violation = false;
};

struct ParticleSpec {
    double omega_e = 0.0;
    double omega_m = 0.0;
    double dipole_moment = 0.0;  // C m
    double spin = 0.0;
    double m_s = 0.0;
    double mass_per_spin = constants::m_u;
    std::optional<double> mass_override;

    double gamma_0_free = 0.0;  // from |d|, rad/s
    double gamma_0 = 0.0;       // rate used for all dimensionless units, rad/s
    double eta = 0.0;
    double omega_tilde = 0.0;
    double k_e = 0.0;

    // Non-fatal diagnostics collected while building (Gamma0 discrepancy, hierarchy override).
    std::vector<std::string> notes;

    double mass() const { return mass_override.value_or(spin * mass_per_spin); }
    double hbar_gamma0() const { return constants::hbar * gamma_0; }
    double force_unit() const { return constants::hbar * gamma_0 * k_e; }

    // Same particle with a different spin (and sublevel); derived quantities do not depend on S.
    ParticleSpec with_spin(double s, double m) const;
};

ParticleSpec build_particle(const RawParticle& raw);

// Inputs used for the numerical estimates throughout: omega_e = 2 pi 1e15, omega_m = 2 pi 1e10,
// |d| = e a0 / 2, Gamma0 = 1.8e7 rad/s supplied directly.
RawParticle reference_particle(double spin, double m_s);

struct Geometry {
    double z0 = 0.0;
    double z_tilde = 0.0;

    static Geometry from_z0(double z0, const ParticleSpec& p);
    static Geometry from_z_tilde(double z_tilde, const ParticleSpec& p);
};

struct EnvironmentSpec {
    double g = constants::standard_gravity;

    static EnvironmentSpec no_gravity() { return EnvironmentSpec{0.0}; }
};

enum class QuantityKind { potential, force, distance, frequency };

QuantityKind parse_quantity_kind(std::string_view name);
std::string_view to_string(QuantityKind kind);

double to_dimensionless(const ParticleSpec& p, double si_value, QuantityKind kind);
double from_dimensionless(const ParticleSpec& p, double value, QuantityKind kind);

// F_G in units of hbar Gamma0 k_e (negative: towards the surface).
double gravity_force(const ParticleSpec& p, const EnvironmentSpec& env);

}  // namespace magcp
