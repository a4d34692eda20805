#include "magcp/core_params.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "magcp/errors.hpp"

namespace magcp {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw NonPositiveInput(std::string(name) + " must be positive and finite");
}

}  // namespace

ParticleSpec ParticleSpec::with_spin(double s, double m) const {
    if (!(s >= 0.0)) throw NonPositiveInput("spin must be >= 0");
    if (std::abs(m) > s) throw SublevelOutOfRange("|m_S| exceeds S");
    ParticleSpec out = *this;
    out.spin = s;
    out.m_s = m;
    return out;
}

ParticleSpec build_particle(const RawParticle& raw) {
    using namespace constants;
    require_positive(raw.omega_e, "omega_e");
    require_positive(raw.omega_m, "omega_m");
    require_positive(raw.dipole.value, "dipole moment");
    require_positive(raw.mass_per_spin, "mass per spin");
    if (!(raw.spin >= 0.0) || !std::isfinite(raw.spin)) throw NonPositiveInput("spin must be >= 0");
    if (raw.gamma_0) require_positive(*raw.gamma_0, "Gamma0");
    if (raw.mass) require_positive(*raw.mass, "mass");
    if (!(std::abs(raw.m_s) <= raw.spin)) throw SublevelOutOfRange("|m_S| exceeds S");

    ParticleSpec p;
    if (raw.omega_m >= raw.omega_e) {
        if (!raw.allow_hierarchy_violation)
            throw HierarchyViolation("omega_m >= omega_e: no intermediate distance regime exists");
        p.notes.emplace_back("hierarchy override: omega_m >= omega_e");
    }

    p.omega_e = raw.omega_e;
    p.omega_m = raw.omega_m;
    p.dipole_moment = raw.dipole.coulomb_metres();
    p.spin = raw.spin;
    p.m_s = raw.m_s;
    p.mass_per_spin = raw.mass_per_spin;
    p.mass_override = raw.mass;
    p.k_e = raw.omega_e / c;
    p.omega_tilde = raw.omega_m / raw.omega_e;

    const double d2 = p.dipole_moment * p.dipole_moment;
    p.gamma_0_free = d2 * p.k_e * p.k_e * p.k_e / (3.0 * pi * epsilon_0 * hbar);

    const double eta_gyro = hbar * hbar * gamma_spin * gamma_spin / (d2 * c * c);
    const double d_atomic = p.dipole_moment / (e * a_0);
    const double eta_alpha = alpha * alpha / (d_atomic * d_atomic);
    if (std::abs(eta_gyro - eta_alpha) > 1e-12 * eta_alpha)
        throw std::logic_error("eta consistency check failed");
    p.eta = eta_alpha;

    if (raw.gamma_0) {
        p.gamma_0 = raw.gamma_0_convention == RateConvention::cyclic ? 2.0 * pi * *raw.gamma_0
                                                                     : *raw.gamma_0;
        const double rel = p.gamma_0 / p.gamma_0_free - 1.0;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "supplied Gamma0 = %.6g rad/s overrides dipole-derived %.6g rad/s (%+.2f%%)",
                      p.gamma_0, p.gamma_0_free, 100.0 * rel);
        p.notes.emplace_back(buf);
    } else {
        p.gamma_0 = p.gamma_0_free;
    }
    return p;
}

RawParticle reference_particle(double spin, double m_s) {
    RawParticle r;
    r.omega_e = 2.0 * constants::pi * 1e15;
    r.omega_m = 2.0 * constants::pi * 1e10;
    r.dipole = DipoleMoment{0.5, DipoleUnit::e_bohr};
    r.gamma_0 = 1.8e7;
    r.spin = spin;
    r.m_s = m_s;
    return r;
}

Geometry Geometry::from_z0(double z0, const ParticleSpec& p) {
    require_positive(z0, "z0");
    return Geometry{z0, z0 * p.k_e};
}

Geometry Geometry::from_z_tilde(double z_tilde, const ParticleSpec& p) {
    require_positive(z_tilde, "z_tilde");
    return Geometry{z_tilde / p.k_e, z_tilde};
}

QuantityKind parse_quantity_kind(std::string_view name) {
    if (name == "potential") return QuantityKind::potential;
    if (name == "force") return QuantityKind::force;
    if (name == "distance") return QuantityKind::distance;
    if (name == "frequency") return QuantityKind::frequency;
    throw UnknownKind("unknown quantity kind '" + std::string(name) + "'");
}

std::string_view to_string(QuantityKind kind) {
    switch (kind) {
        case QuantityKind::potential: return "potential";
        case QuantityKind::force: return "force";
        case QuantityKind::distance: return "distance";
        case QuantityKind::frequency: return "frequency";
    }
    throw UnknownKind("unknown quantity kind");
}

namespace {

double unit_of(const ParticleSpec& p, QuantityKind kind) {
    switch (kind) {
        case QuantityKind::potential: return p.hbar_gamma0();
        case QuantityKind::force: return p.force_unit();
        case QuantityKind::distance: return 1.0 / p.k_e;
        case QuantityKind::frequency: return p.omega_e;
    }
    throw UnknownKind("unknown quantity kind");
}

}  // namespace

double to_dimensionless(const ParticleSpec& p, double si_value, QuantityKind kind) {
    return si_value / unit_of(p, kind);
}

double from_dimensionless(const ParticleSpec& p, double value, QuantityKind kind) {
    return value * unit_of(p, kind);
}

double gravity_force(const ParticleSpec& p, const EnvironmentSpec& env) {
    if (!(env.g >= 0.0)) throw NonPositiveInput("g must be >= 0");
    return -p.mass() * env.g / p.force_unit();
}

}  // namespace magcp
