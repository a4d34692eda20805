#include <doctest.h>

#include <cmath>

#include "magcp/asymptotics.hpp"
#include "magcp/potentials.hpp"

using namespace magcp;

namespace {

constexpr double pi = 3.14159265358979323846;

// Frozen from tests/oracles/generate.py (mpmath substitution, reference particle, gold).
constexpr double c_e3_gold = 0.028351269132062372;
constexpr double c_m1_drude_gold_s1 = 6.9289987279993152e-8;
constexpr double c_m1_plasma_gold_s1 = 7.0168656603768861e-5;
constexpr double c_m1_plasma_gold_s100 = 0.47012798205404129;

const SurfaceModel pc = PerfectConductor{};
const SurfaceModel gold = Drude{1.36e16, 1e14};
const SurfaceModel gold_plasma = Plasma{1.36e16};

ParticleSpec particle(double s, double m) { return build_particle(reference_particle(s, m)); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Drude model with the given quality factor and detuning at the particle's omega_m.
Drude tuned(const ParticleSpec& p, double q, double delta) {
    const double wp = std::sqrt(2.0) * p.omega_m / (1.0 + delta / q);
    return Drude{wp, wp / (std::sqrt(2.0) * q)};
}

}  // namespace

TEST_CASE("region classification") {
    const ParticleSpec p = particle(1.0, -1.0);
    CHECK(classify_region(p, pc, Geometry::from_z0(10e-9, p)) == Region::crossover);
    CHECK(classify_region(p, pc, Geometry::from_z_tilde(1e-4, p)) == Region::I);
    CHECK(classify_region(p, pc, Geometry::from_z_tilde(1e2, p)) == Region::II);
    CHECK(classify_region(p, pc, Geometry::from_z_tilde(1e3 / p.omega_tilde, p)) == Region::III);
    CHECK(classify_region(p, gold, Geometry::from_z_tilde(1e-4, p)) == Region::I);
    CHECK(classify_region(p, gold, Geometry::from_z_tilde(1e-1, p)) == Region::crossover);
    CHECK(to_string(Region::II) == "II");
    CHECK_THROWS_AS(classify_region(p, pc, Geometry::from_z_tilde(1.0, p), 0.5), NonPositiveInput);
}

TEST_CASE("perfect conductor table entries") {
    const ParticleSpec p = particle(50.0, -50.0);
    const Geometry g = Geometry::from_z_tilde(1e-2, p);
    CHECK(table1_potential(p, pc, g, Region::I, ShiftKind::electric) == doctest::Approx(-3.0 / 64.0 * 1e6));
    const double m = table1_potential(p, pc, g, Region::I, ShiftKind::magnetic);
    CHECK(m == doctest::Approx(3.0 / 64.0 * p.eta * 50.0 * 101.0 * 1e6).epsilon(1e-14));
    CHECK(m == doctest::Approx(5.04e4).epsilon(2e-3));

    const Geometry g2 = Geometry::from_z_tilde(1e2, p);
    CHECK(table1_potential(p, pc, g2, Region::II, ShiftKind::electric) ==
          doctest::Approx(-3.0 / (16.0 * pi * 1e8)).epsilon(1e-14));
    CHECK_THROWS_AS(table1_potential(p, pc, g2, Region::crossover, ShiftKind::electric), CrossoverRegion);
}

TEST_CASE("drude short-distance electric entry") {
    const ParticleSpec p = particle(1.0, -1.0);
    const Geometry g = Geometry::from_z_tilde(1.0, p);
    CHECK(table1_potential(p, gold, g, Region::I, ShiftKind::electric) == doctest::Approx(-0.0284).epsilon(2e-3));
}

TEST_CASE("gold coefficients against oracle") {
    const AsymptoticCoefficients d = coefficients(particle(1.0, -1.0), gold);
    CHECK(rel(d.c_e3_drude, c_e3_gold) < 1e-10);
    CHECK(rel(d.c_m1_drude, c_m1_drude_gold_s1) < 1e-10);
    CHECK(rel(d.c_m1_plasma, c_m1_plasma_gold_s1) < 1e-10);
    CHECK(d.c_e3_drude > 0.0);
    CHECK(d.c_m1_drude > 0.0);
    CHECK(d.c_m1_plasma > d.c_m1_drude);

    const AsymptoticCoefficients s100 = coefficients(particle(100.0, -100.0), gold_plasma);
    CHECK(rel(s100.c_m1_plasma, c_m1_plasma_gold_s100) < 1e-10);
    CHECK(std::isnan(s100.c_m1_drude));
    CHECK_THROWS_AS(coefficients(particle(1.0, -1.0), pc), UnsupportedModel);
}

TEST_CASE("drude magnetic coefficient loses its logarithm at gamma = omega_m") {
    const ParticleSpec p = particle(1.0, -1.0);
    const double wp = 1.36e16;
    const double P = wp / p.omega_e;
    const double w = p.omega_tilde;
    const AsymptoticCoefficients c = coefficients(p, Drude{wp, p.omega_m});
    const double pref = 3.0 * w * p.eta * P / 64.0;
    const double expect = pref * (P / (w + P / std::sqrt(2.0)) + P * w / (2.0 * (w * w + w * w)));
    CHECK(rel(c.c_m1_drude, expect) < 1e-12);
}

TEST_CASE("drude magnetic entry decays as one over z") {
    const ParticleSpec p = particle(1.0, -1.0);
    const double a = table1_potential(p, gold, Geometry::from_z_tilde(1e-4, p), Region::I, ShiftKind::magnetic);
    const double b = table1_potential(p, gold, Geometry::from_z_tilde(1e-3, p), Region::I, ShiftKind::magnetic);
    CHECK(a / b == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("second-order Fresnel expansion") {
    const FresnelPair vac = fresnel_nr_expansion_eps(1.0, 2.0, 1.0, 1.0);
    CHECK(vac.r_s.real() == 0.0);
    CHECK(vac.r_p.real() == 0.0);

    // Plasma with xi = omega_p: eps = 2, parameter = xi / kappa.
    const SurfaceModel pl = Plasma{1.0};
    double last = 0.0;
    for (double t : {0.1, 0.05, 0.025}) {
        const double kappa = 1.0 / t;
        CHECK(nr_expansion_parameter(2.0, kappa, 1.0, 1.0) == doctest::Approx(t));
        const FresnelPair e = fresnel_nr_expansion(pl, kappa, 1.0, 1.0);
        const ReflectionPair x = reflection_imag_axis(pl, kappa, 1.0, 1.0);
        CHECK(rel(e.r_p.real(), x.r_p) < 1e-3);
        CHECK(rel(e.r_s.real(), x.r_s) < 1e-2);
        const double err = std::abs(e.r_p.real() - x.r_p);
        if (last > 0.0) CHECK(last / err == doctest::Approx(16.0).epsilon(0.1));
        last = err;
    }
    CHECK_THROWS_AS(fresnel_nr_expansion(pl, 2.0, 1.0, 1.0), ExpansionOutOfValidity);
    CHECK_THROWS_AS(fresnel_nr_expansion(pc, 2.0, 1.0, 1.0), ExpansionOutOfValidity);

    // Drude at vanishing frequency: the s coefficient goes to zero.
    const SurfaceModel dr = Drude{1.0, 0.01};
    const double a = fresnel_nr_expansion(dr, 1.0, 1e-8, 1.0).r_s.real();
    const double b = fresnel_nr_expansion(dr, 1.0, 1e-10, 1.0).r_s.real();
    CHECK(a < 0.0);
    CHECK(a / b == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("surface resonance forms") {
    const ParticleSpec p = particle(1.0, 0.0);
    CHECK(resonance_bracket({3.0, 0.0}) == doctest::Approx(4.0));

    const Geometry g = Geometry::from_z_tilde(1e-3 / p.omega_tilde, p);
    const SurfaceResonance r = surface_resonance_potential(p, tuned(p, 1e12, -100.0), g);
    CHECK(r.q_factor == doctest::Approx(1e12).epsilon(1e-9));
    // omega_m - omega_p / sqrt 2 loses ten digits to cancellation at this Q.
    CHECK(r.detuning == doctest::Approx(-100.0).epsilon(1e-3));
    REQUIRE(r.q_delta_form.has_value());
    const double unit = 3.0 * p.eta * 2.0 * p.omega_tilde * p.omega_tilde / (256.0 * g.z_tilde);
    CHECK(*r.q_delta_form > 0.0);
    CHECK(*r.q_delta_form == doctest::Approx(unit * 1e10).epsilon(1e-6));
    REQUIRE(r.rate_q_delta.has_value());
    CHECK(*r.rate_q_delta == doctest::Approx(4.0 * unit * 1e12 / 1e4).epsilon(1e-6));

    const SurfaceResonance flipped = surface_resonance_potential(p, tuned(p, 1e12, 100.0), g);
    REQUIRE(flipped.q_delta_form.has_value());
    CHECK(*flipped.q_delta_form == doctest::Approx(-*r.q_delta_form).epsilon(1e-6));

    // Off resonance the Q / delta form is not offered.
    const SurfaceResonance off = surface_resonance_potential(p, Drude{2.0 * p.omega_m, 1e-3 * p.omega_m}, g);
    CHECK_FALSE(off.q_delta_form.has_value());

    CHECK_THROWS_AS(surface_resonance_potential(p, Drude{2.0 * p.omega_m, 1e-3 * p.omega_m},
                                                Geometry::from_z_tilde(1.0 / p.omega_tilde, p)),
                    RegimeViolation);
}

TEST_CASE("perfect conductor spin-flip law") {
    const ParticleSpec p = particle(100.0, 0.0);
    CHECK(spin_flip_nr_pc(p) == doctest::Approx(p.eta * 100.0 * 101.0 * 1e-15 / 3.0).epsilon(1e-9));
}

TEST_CASE("numeric potentials follow the perfect conductor table deep inside each region") {
    const ParticleSpec p = particle(3.0, -3.0);
    const QuadratureConfig q;
    struct Point {
        double z;
        Region r;
    };
    for (const Point& pt : {Point{1e-4, Region::I}, Point{3e2, Region::II}, Point{1e3 / p.omega_tilde, Region::III}}) {
        const Geometry g = Geometry::from_z_tilde(pt.z, p);
        REQUIRE(classify_region(p, pc, g, 100.0) == pt.r);
        const double e = u_e_pc_closed(p, g, q);
        const double m = u_m_pc_closed(p, g, q) + u_m_static(p, pc, g, q);
        CHECK(rel(e, table1_potential(p, pc, g, pt.r, ShiftKind::electric)) < 2e-2);
        CHECK(rel(m, table1_potential(p, pc, g, pt.r, ShiftKind::magnetic)) < 2e-2);
    }
}
