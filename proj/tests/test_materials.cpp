#include <doctest.h>

#include <cmath>
#include <complex>

#include "magcp/errors.hpp"
#include "magcp/materials.hpp"

using namespace magcp;
using cd = std::complex<double>;

namespace {

constexpr double wp = 1.36e16;
constexpr double gam = 1e14;
const double c = constants::c;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("imaginary-axis permittivity") {
    CHECK(permittivity_imag_axis(Drude{wp, gam}, wp) == doctest::Approx(1.0 + wp / (wp + gam)).epsilon(1e-15));
    CHECK(permittivity_imag_axis(Plasma{wp}, wp) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::isinf(permittivity_imag_axis(PerfectConductor{}, 1e10)));
    // The relative gap is gamma (eps - 1) / (xi eps): below 1e-10 only once xi is far above omega_p.
    const double g = 1e-8 * wp;
    for (double xi : {1e10, 1e14, 1e16, 1e18, 1e19}) {
        const double d = permittivity_imag_axis(Drude{wp, g}, xi);
        const double p = permittivity_imag_axis(Plasma{wp}, xi);
        CHECK(rel(d, p) <= g / xi * (p - 1.0) / p * (1.0 + 1e-6));
        if (xi >= 1e18) CHECK(rel(d, p) < 1e-10);
        CHECK(d >= 1.0);
    }
    CHECK_THROWS_AS(permittivity_imag_axis(Plasma{wp}, -1.0), NegativeFrequency);
}

TEST_CASE("surface validation") {
    CHECK(validate_surface(Drude{wp, gam}).empty());
    CHECK(validate_surface(Drude{wp, wp}).size() == 1);
    CHECK_THROWS_AS(validate_surface(Drude{wp, 0.0}), NonPositiveInput);
    CHECK_THROWS_AS(validate_surface(Plasma{-1.0}), NonPositiveInput);
    CHECK(model_name(Plasma{wp}) == "plasma");
}

TEST_CASE("perfect conductor reflects with -1 and +1") {
    for (double xi : {0.0, 1e12, 1e17}) {
        const ReflectionPair r = reflection_imag_axis(PerfectConductor{}, 3.0 * xi / c + 1.0, xi);
        CHECK(r.r_s == -1.0);
        CHECK(r.r_p == 1.0);
    }
    const FresnelPair f = fresnel_real_freq(PerfectConductor{}, 1e7, 1e15);
    CHECK(f.r_s == cd(-1.0, 0.0));
    CHECK(f.r_p == cd(1.0, 0.0));
}

TEST_CASE("imaginary-axis coefficients lie strictly inside (-1, 1)") {
    for (const SurfaceModel& m : {SurfaceModel{Drude{wp, gam}}, SurfaceModel{Plasma{wp}}}) {
        for (double xi : {1e11, 1e15, 1e17}) {
            for (double f : {1.0, 1.5, 10.0, 1e4}) {
                const ReflectionPair r = reflection_imag_axis(m, f * xi / c, xi);
                CHECK(r.r_s > -1.0);
                CHECK(r.r_s < 1.0);
                CHECK(r.r_p > -1.0);
                CHECK(r.r_p < 1.0);
            }
        }
    }
    CHECK_THROWS_AS(reflection_imag_axis(Plasma{wp}, 0.5e15 / c, 1e15), DomainViolation);
}

TEST_CASE("static limits") {
    const double kp = wp / c;
    CHECK(fresnel_static_limit(Drude{wp, gam}, kp).r_s == cd(0.0, 0.0));
    CHECK(fresnel_static_limit(PerfectConductor{}, kp).r_s == cd(-1.0, 0.0));
    CHECK(fresnel_static_limit(Plasma{wp}, 0.75 * kp).r_s.real() == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(fresnel_static_limit(Plasma{wp}, 1e-9 * kp).r_s.real() == doctest::Approx(-1.0).epsilon(1e-8));
    for (const SurfaceModel& m : {SurfaceModel{Drude{wp, gam}}, SurfaceModel{Plasma{wp}}, SurfaceModel{PerfectConductor{}}})
        CHECK(fresnel_static_limit(m, kp).r_p == cd(1.0, 0.0));
    CHECK_THROWS_AS(fresnel_static_limit(Plasma{wp}, 0.0), DomainViolation);

    // xi = 0 dispatches to the static form; small xi approaches it.
    CHECK(reflection_imag_axis(Drude{wp, gam}, kp, 0.0).r_s == 0.0);
    CHECK(std::abs(reflection_imag_axis(Drude{wp, gam}, kp, 1e-3).r_s) < 1e-15);
    CHECK(reflection_imag_axis(Plasma{wp}, 0.75 * kp, 1e-3).r_s == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("degeneracy chain drude to plasma to perfect conductor") {
    const double xi = 1e15;
    for (double f : {1.0, 2.0, 30.0}) {
        const double kappa = f * xi / c;
        const ReflectionPair d = reflection_imag_axis(Drude{wp, 1e-8 * wp}, kappa, xi);
        const ReflectionPair p = reflection_imag_axis(Plasma{wp}, kappa, xi);
        CHECK(rel(d.r_s, p.r_s) < 1e-4);
        CHECK(rel(d.r_p, p.r_p) < 1e-4);
        const ReflectionPair big = reflection_imag_axis(Plasma{1e6 * xi}, kappa, xi);
        CHECK(rel(big.r_s, -1.0) < 1e-4);
        CHECK(rel(big.r_p, 1.0) < 1e-4);
    }
}

TEST_CASE("coefficients are monotone in the permittivity") {
    const double xi = 1e15;
    const double kappa = 2.0 * xi / c;
    double last_s = 1.0;
    double last_p = -1.0;
    for (double w : {1e14, 1e15, 1e16, 1e17, 1e18}) {
        const ReflectionPair r = reflection_imag_axis(Plasma{w}, kappa, xi);
        CHECK(r.r_s < last_s);
        CHECK(r.r_p > last_p);
        last_s = r.r_s;
        last_p = r.r_p;
    }
}

TEST_CASE("real-frequency permittivity and plasma zero") {
    const cd e = permittivity_real_freq(Drude{wp, gam}, 1e15);
    const cd expect = 1.0 - wp * wp / cd(1e30, gam * 1e15);
    CHECK(std::abs(e - expect) < 1e-12 * std::abs(expect));
    CHECK(std::abs(permittivity_real_freq(Plasma{wp}, wp)) < 1e-15);

    const FresnelPair r = fresnel_real_freq(Plasma{wp}, 0.0, wp);
    CHECK(std::abs(r.r_p - cd(-1.0, 0.0)) < 1e-12);
    // Normal-incidence form (1 - sqrt eps)/(1 + sqrt eps) with eps slightly off zero.
    const double w = wp * (1.0 + 1e-6);
    const cd se = std::sqrt(permittivity_real_freq(Plasma{wp}, w));
    const cd rs_normal = (1.0 - se) / (1.0 + se);
    const FresnelPair r2 = fresnel_real_freq(Plasma{wp}, 0.0, w);
    CHECK(std::abs(r2.r_s - rs_normal) < 1e-10);
    CHECK(std::abs(r2.r_p + r2.r_s) < 1e-10);
}

TEST_CASE("drude surface resonance is limited by damping") {
    const double w = wp / std::sqrt(2.0);
    const cd e1 = permittivity_real_freq(Drude{wp, gam}, w) + 1.0;
    const cd e2 = permittivity_real_freq(Drude{wp, 0.1 * gam}, w) + 1.0;
    CHECK(std::abs(e1) == doctest::Approx(10.0 * std::abs(e2)).epsilon(1e-3));
    CHECK(std::abs(e1) == doctest::Approx(2.0 * gam / w).epsilon(1e-3));
}

TEST_CASE("propagating and evanescent branches join continuously") {
    const double k = 5.0;
    CHECK(kappa_perp_real(0.0, k) == cd(0.0, -5.0));
    CHECK(kappa_perp_real(13.0, k).imag() == 0.0);
    CHECK(kappa_perp_real(13.0, k).real() == doctest::Approx(12.0));
    for (double kp : {0.0, 1.0, 4.0, 4.999}) CHECK(kappa_perp_real(kp, k).imag() <= 0.0);
    const cd below = kappa_perp_real(k * (1.0 - 1e-12), k);
    const cd above = kappa_perp_real(k * (1.0 + 1e-12), k);
    CHECK(std::abs(below - above) < 2e-5);

    const double omega = 1e15;
    const double kk = omega / c;
    const FresnelPair a = fresnel_real_freq(Drude{wp, gam}, kk * (1.0 - 1e-14), omega);
    const FresnelPair b = fresnel_real_freq(Drude{wp, gam}, kk * (1.0 + 1e-14), omega);
    CHECK(std::abs(a.r_s - b.r_s) < 1e-4);
    CHECK(std::abs(a.r_p - b.r_p) < 1e-4);
}

TEST_CASE("decaying square root") {
    CHECK(decaying_sqrt(cd(4.0, 0.0)) == cd(2.0, 0.0));
    CHECK(decaying_sqrt(cd(-4.0, 0.0)) == cd(0.0, -2.0));
    CHECK(decaying_sqrt(cd(-4.0, 1e-3)).real() >= 0.0);
}
