// Acceptance suite: one PASS/FAIL line per criterion, followed by the measured values behind it.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "magcp/asymptotics.hpp"
#include "magcp/cli/commands.hpp"
#include "magcp/mechanics.hpp"
#include "magcp/potentials.hpp"

using namespace magcp;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Check {
    std::string text;
    bool ok = false;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool passed() const {
        if (checks.empty()) return false;
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ParticleSpec particle(double s, double m) { return build_particle(reference_particle(s, m)); }

const SurfaceModel pc = PerfectConductor{};
const SurfaceModel gold = Drude{1.36e16, 1e14};
const SurfaceModel gold_plasma = Plasma{1.36e16};
const QuadratureConfig quad{};

// Runs `body`, turning an escaped exception into a failed check.
void guarded(Criterion& c, const std::string& what, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        c.checks.push_back({what + ": error: " + e.what(), false});
    }
}

Criterion c1() {
    Criterion c{1, "perfect-conductor single-integral forms equal the double integrals"};
    const ParticleSpec p = particle(1.0, -1.0);
    for (double z : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        guarded(c, fmt("z=%g", z), [&] {
            const Geometry g = Geometry::from_z_tilde(z, p);
            const double de = rel(u_e_ground(p, pc, g, quad), u_e_pc_closed(p, g, quad));
            const double dm = rel(u_m_ground_broadband(p, pc, g, quad), u_m_pc_closed(p, g, quad));
            c.checks.push_back({fmt("z=%-6g U_e rel.dev %.2e, U_m rel.dev %.2e (tol 1e-6)", z, de, dm),
                                de < 1e-6 && dm < 1e-6});
        });
    }
    return c;
}

Criterion c2() {
    Criterion c{2, "asymptotic laws in each region's deep interior (margin x100), 2%"};
    const ParticleSpec p = particle(3.0, -3.0);
    struct Case {
        const char* name;
        SurfaceModel s;
    };
    struct Point {
        double z;
        Region r;
    };
    const std::vector<Point> points = {{1e-4, Region::I}, {std::sqrt(1e5), Region::II}, {1e8, Region::III}};
    for (const Case& m : {Case{"pc", pc}, Case{"drude", gold}, Case{"plasma", gold_plasma}}) {
        for (const Point& pt : points) {
            const std::string label = fmt("%-6s region %-3s z=%-8.3g", m.name, std::string(to_string(pt.r)).c_str(), pt.z);
            guarded(c, label, [&] {
                const Geometry g = Geometry::from_z_tilde(pt.z, p);
                const Region got = classify_region(p, m.s, g, 100.0);
                if (got != pt.r) {
                    c.checks.push_back({label + " classified as " + std::string(to_string(got)), false});
                    return;
                }
                const double e = u_e_ground(p, m.s, g, quad);
                const double mag = u_m_ground_broadband(p, m.s, g, quad) + u_m_static(p, m.s, g, quad);
                const double re = e / table1_potential(p, m.s, g, pt.r, ShiftKind::electric);
                const double rm = mag / table1_potential(p, m.s, g, pt.r, ShiftKind::magnetic);
                c.checks.push_back({label + fmt(" electric ratio %.4f", re), std::abs(re - 1.0) < 0.02});
                c.checks.push_back({label + fmt(" magnetic ratio %.4f", rm), std::abs(rm - 1.0) < 0.02});
            });
        }
    }
    // The intermediate Drude law deeper inside its window, for reference.
    guarded(c, "drude region II z=1000", [&] {
        const Geometry g = Geometry::from_z_tilde(1e3, p);
        const double rm = u_m_ground_broadband(p, gold, g, quad) / table1_potential(p, gold, g, Region::II, ShiftKind::magnetic);
        c.checks.push_back({fmt("drude  region II  z=1000     magnetic ratio %.4f", rm), std::abs(rm - 1.0) < 0.02});
    });
    return c;
}

Criterion c3() {
    Criterion c{3, "magnetostatic term"};
    const ParticleSpec p = particle(7.0, -7.0);
    guarded(c, "drude", [&] {
        double worst = 0.0;
        for (double z : {1e-3, 1.0, 1e3}) worst = std::max(worst, std::abs(u_m_static(p, gold, Geometry::from_z_tilde(z, p), quad)));
        c.checks.push_back({fmt("drude max |U_z| over z in {1e-3,1,1e3} = %g (exact 0)", worst), worst == 0.0});
    });
    guarded(c, "pc", [&] {
        bool exact = true;
        for (double z : {1e-3, 1.0, 1e3}) {
            const double v = u_m_static(p, pc, Geometry::from_z_tilde(z, p), quad);
            exact = exact && v == 3.0 / 32.0 * (p.eta * 7.0 * 7.0) / (z * z * z);
        }
        c.checks.push_back({"pc U_z equals (3/32) eta S^2 / z^3 bit for bit at z in {1e-3,1,1e3}", exact});
    });
    guarded(c, "plasma", [&] {
        const double z = 1e-4;
        const Geometry g = Geometry::from_z_tilde(z, p);
        const double P = 1.36e16 / p.omega_e;
        const double v = u_m_static(p, gold_plasma, g, quad);
        const double piece = 3.0 / 64.0 * P * P * p.eta * 49.0 / z;
        c.checks.push_back({fmt("plasma U_z=%.6g > 0, ratio to (3/64) P^2 eta S^2 / z = %.4f at z=1e-4 (5%%)", v, v / piece),
                            v > 0.0 && std::abs(v / piece - 1.0) < 0.05});
    });
    return c;
}

Criterion c4() {
    Criterion c{4, "spin thresholds"};
    const ParticleSpec p = particle(1.0, -1.0);
    guarded(c, "pc", [&] {
        const Geometry g = Geometry::from_z_tilde(1e-3, p);
        const double s0 = spin_threshold(p, pc, g, quad, ThresholdMode::with_static, EnvironmentSpec::no_gravity()).spin;
        const double scp = spin_threshold(p, pc, g, quad, ThresholdMode::without_static, EnvironmentSpec::no_gravity()).spin;
        c.checks.push_back({fmt("pc z=1e-3 S0 = %.3f (48.4 +- 0.5; sqrt(1/2eta) = %.3f)", s0, std::sqrt(0.5 / p.eta)),
                            std::abs(s0 - 48.4) <= 0.5});
        c.checks.push_back({fmt("pc z=1e-3 S0_cp = %.2f (4695 +- 50; 1/eta = %.2f)", scp, 1.0 / p.eta),
                            std::abs(scp - 4695.0) <= 50.0});
    });
    guarded(c, "metals", [&] {
        const Geometry g = Geometry::from_z0(10e-9, p);
        const double d = spin_threshold(p, gold, g, quad, ThresholdMode::with_static).spin;
        const double s = spin_threshold(p, gold_plasma, g, quad, ThresholdMode::with_static).spin;
        c.checks.push_back({fmt("drude gold z0=10nm S = %.4g (within x3 of 1e8)", d), d > 1e8 / 3.0 && d < 3e8});
        c.checks.push_back({fmt("plasma gold z0=10nm S = %.4g (within x10 of 1e2)", s), s > 10.0 && s < 1e3});
    });
    return c;
}

Criterion c5() {
    Criterion c{5, "equilibrium positions"};
    guarded(c, "cp-only", [&] {
        ForceOptions opt;
        opt.include_static = false;
        const Equilibrium a = find_equilibrium(particle(1e5, -1e5), pc, quad, opt, {0.5, 50.0});
        const Equilibrium b = find_equilibrium(particle(2e5, -2e5), pc, quad, opt, {0.5, 50.0});
        c.checks.push_back({fmt("cp-only S=1e5 z_eq = %.5f, analytic %.5f, ratio %.4f (10%%)", a.z_tilde_eq, *a.analytic,
                                a.z_tilde_eq / *a.analytic),
                            rel(a.z_tilde_eq, *a.analytic) < 0.1});
        c.checks.push_back({fmt("cp-only S=2e5 z_eq = %.5f, spread vs S=1e5 %.2e (1%%)", b.z_tilde_eq, rel(b.z_tilde_eq, a.z_tilde_eq)),
                            rel(b.z_tilde_eq, a.z_tilde_eq) < 0.01});
        c.checks.push_back({fmt("cp-only stable: %s / %s (slopes %.3g, %.3g)", a.stable ? "yes" : "no", b.stable ? "yes" : "no", a.slope, b.slope),
                            a.stable && b.stable});
    });
    guarded(c, "static", [&] {
        const Equilibrium e = find_equilibrium(particle(100.0, -100.0), pc, quad, ForceOptions{}, {0.5, 100.0});
        c.checks.push_back({fmt("static S=100 z_eq = %.5f, analytic %.5f, ratio %.4f (10%%), stable: %s", e.z_tilde_eq,
                                *e.analytic, e.z_tilde_eq / *e.analytic, e.stable ? "yes" : "no"),
                            rel(e.z_tilde_eq, *e.analytic) < 0.1 && e.stable});
    });
    return c;
}

Criterion c6() {
    Criterion c{6, "perfect-conductor excited-state closed form"};
    const ParticleSpec p1 = particle(1.0, 0.0);
    const ParticleSpec p3 = particle(3.0, 0.0);
    guarded(c, "closed form", [&] {
        double worst = 0.0;
        double worst_at = 0.0;
        const int n = 41;
        for (int i = 0; i < n; ++i) {
            const double wz = std::pow(10.0, -3.0 + 4.0 * i / (n - 1));
            const Geometry g = Geometry::from_z_tilde(wz / p1.omega_tilde, p1);
            const double num = u_m_excited0(p1, pc, g, quad);
            const double closed = u_m0_pc_closed(p1, g);
            // Deviation relative to the envelope of the oscillating bracket, so that zeros of
            // the closed form do not turn rounding into a large relative error.
            const double envelope = 3.0 * p1.eta * 2.0 / (64.0 * std::pow(g.z_tilde, 3)) * (1.0 + 2.0 * wz + 4.0 * wz * wz);
            const double d = std::abs(num - closed) / envelope;
            if (d > worst) {
                worst = d;
                worst_at = wz;
            }
        }
        c.checks.push_back({fmt("41 points w*z in [1e-3, 10]: max deviation/envelope %.2e at w*z=%.3g (tol 1e-6)", worst, worst_at),
                            worst < 1e-6});
    });
    guarded(c, "nr limit", [&] {
        const Geometry g = Geometry::from_z_tilde(1e-3 / p1.omega_tilde, p1);
        const double ratio = u_m_excited0(p1, pc, g, quad) / (3.0 * p1.eta * 2.0 / (64.0 * std::pow(g.z_tilde, 3)));
        c.checks.push_back({fmt("w*z=1e-3: ratio to 3 eta S(S+1)/(64 z^3) = %.6f (1%%)", ratio), std::abs(ratio - 1.0) < 0.01});
    });
    guarded(c, "scaling", [&] {
        const Geometry g = Geometry::from_z_tilde(0.5 / p1.omega_tilde, p1);
        const double r = u_m_excited0(p3, pc, g, quad) / u_m_excited0(p1, pc, g, quad);
        c.checks.push_back({fmt("S=3 / S=1 = %.15g (exact 6)", r), std::abs(r - 6.0) < 1e-12});
    });
    return c;
}

// Drude model with quality factor q and detuning delta at the particle's omega_m.
Drude tuned(const ParticleSpec& p, double q, double delta) {
    const double wp = std::sqrt(2.0) * p.omega_m / (1.0 + delta / q);
    return Drude{wp, wp / (std::sqrt(2.0) * q)};
}

Criterion c7() {
    Criterion c{7, "surface resonance, non-retarded Drude excited state (w*z = 1e-5)"};
    const ParticleSpec p = particle(1.0, 0.0);
    const Geometry g = Geometry::from_z_tilde(1e-5 / p.omega_tilde, p);
    guarded(c, "off resonance", [&] {
        // omega_p = 2 omega_m with weak damping: eps(omega_m) close to -3.
        const Drude s{2.0 * p.omega_m, 1e-3 * p.omega_m};
        const SurfaceResonance r = surface_resonance_potential(p, s, g);
        const double u = u_m_excited0(p, s, g, quad);
        c.checks.push_back({fmt("off resonance eps=%.4f%+.4fi: U/Re-form = %.6f (5%%)", r.eps_m.real(), r.eps_m.imag(), u / r.re_form),
                            std::abs(u / r.re_form - 1.0) < 0.05});
    });
    guarded(c, "resonance", [&] {
        const Drude s = tuned(p, 1e4, -1e2);
        const SurfaceResonance r = surface_resonance_potential(p, s, g);
        const double u = u_m_excited0(p, s, g, quad);
        const double rate = delta_gamma_m(p, s, g, quad, 0.0);
        c.checks.push_back({fmt("Q=%.4g delta=%.4g: U/(Q/delta form) = %.5f (tol 1/|delta| = 1%%); U/Re-form = %.5f", r.q_factor,
                                r.detuning, u / *r.q_delta_form, u / r.re_form),
                            std::abs(u / *r.q_delta_form - 1.0) < 1.0 / std::abs(r.detuning)});
        c.checks.push_back({fmt("Q=%.4g delta=%.4g: rate/(Q/delta^2 form) = %.5f (10%%)", r.q_factor, r.detuning, rate / *r.rate_q_delta),
                            std::abs(rate / *r.rate_q_delta - 1.0) < 0.1});
    });
    return c;
}

Criterion c8() {
    Criterion c{8, "property suites"};
    guarded(c, "scaling", [&] {
        const ParticleSpec a = particle(2.0, -2.0);
        const ParticleSpec b = particle(4.0, -4.0);
        bool ok = true;
        for (const SurfaceModel& s : {pc, gold, gold_plasma}) {
            const Geometry g = Geometry::from_z_tilde(0.3, a);
            ok = ok && u_m_ground_broadband(b, s, g, quad) / u_m_ground_broadband(a, s, g, quad) == 2.0;
            if (!std::holds_alternative<Drude>(s)) ok = ok && u_m_static(b, s, g, quad) / u_m_static(a, s, g, quad) == 4.0;
        }
        const Geometry g = Geometry::from_z_tilde(1e4, a);
        const double r = u_m_excited0(particle(3.0, 0.0), gold, g, quad) / u_m_excited0(particle(1.0, 0.0), gold, g, quad);
        ok = ok && std::abs(r - 6.0) < 1e-12;
        c.checks.push_back({fmt("S, S^2 exact for all models; S(S+1) ratio %.15g", r), ok});
    });
    guarded(c, "signs", [&] {
        const ParticleSpec p = particle(2.0, -2.0);
        bool ok = true;
        int n = 0;
        for (int i = 0; i <= 24; ++i) {
            const double z = std::pow(10.0, -3.0 + 0.25 * i);
            const PotentialBreakdown b = potential_breakdown(p, pc, Geometry::from_z_tilde(z, p), quad, LevelMode::ground);
            ok = ok && b.u_e_minus < 0.0 && b.u_m_minus > 0.0 && b.u_m_z > 0.0 && b.all_converged();
            ++n;
        }
        c.checks.push_back({fmt("pc U_e < 0 < U_m, U_z on %d points in [1e-3, 1e3]", n), ok});
    });
    guarded(c, "fresnel chain", [&] {
        const double xi = 1e15;
        double worst = 0.0;
        for (double f : {1.0, 2.0, 30.0}) {
            const double kappa = f * xi / constants::c;
            const ReflectionPair d = reflection_imag_axis(Drude{1.36e16, 1.36e8}, kappa, xi);
            const ReflectionPair pl = reflection_imag_axis(gold_plasma, kappa, xi);
            const ReflectionPair big = reflection_imag_axis(Plasma{1e6 * xi}, kappa, xi);
            worst = std::max({worst, rel(d.r_s, pl.r_s), rel(d.r_p, pl.r_p), rel(big.r_s, -1.0), rel(big.r_p, 1.0)});
        }
        c.checks.push_back({fmt("Fresnel chain gamma=1e-8 wp, wp=1e6 xi: max rel.dev %.2e (1e-4)", worst), worst < 1e-4});
    });
    guarded(c, "potential chain", [&] {
        RawParticle raw = reference_particle(1.0, -1.0);
        raw.omega_m = 0.5 * raw.omega_e;
        const ParticleSpec p = build_particle(raw);
        const double wp = 1e3 * p.omega_e;
        const SurfaceModel d = Drude{wp, 1e-6 * wp};
        const SurfaceModel pl = Plasma{wp};
        double dp = 0.0;
        double pp = 0.0;
        for (double z : {0.5, 5.0}) {
            const Geometry g = Geometry::from_z_tilde(z, p);
            const double ed = u_e_ground(p, d, g, quad), ep = u_e_ground(p, pl, g, quad), ec = u_e_ground(p, pc, g, quad);
            const double md = u_m_ground_broadband(p, d, g, quad), mp = u_m_ground_broadband(p, pl, g, quad),
                         mc = u_m_ground_broadband(p, pc, g, quad);
            dp = std::max({dp, rel(ed, ep), rel(md, mp)});
            pp = std::max({pp, rel(ep, ec), rel(mp, mc)});
        }
        c.checks.push_back({fmt("potential chain (w=0.5, wp=1e3, gamma=1e-6 wp): drude-plasma %.2e, plasma-pc %.2e (1%%)", dp, pp),
                            dp < 0.01 && pp < 0.01});
    });
    guarded(c, "forces", [&] {
        const ParticleSpec p = particle(3.0, -3.0);
        ForceOptions opt;
        opt.pc_closed_forms = false;
        double worst = 0.0;
        for (const SurfaceModel& s : {pc, gold, gold_plasma}) {
            for (double z : {0.1, 1.0, 10.0}) {
                const Geometry g = Geometry::from_z_tilde(z, p);
                const ForceBreakdown a = force_breakdown(p, s, g, quad, opt);
                const ForceBreakdown f = force_breakdown_fd(p, s, g, quad, opt);
                worst = std::max({worst, rel(a.f_e, f.f_e), rel(a.f_m_minus, f.f_m_minus)});
                if (f.f_m_z != 0.0) worst = std::max(worst, rel(a.f_m_z, f.f_m_z));
            }
        }
        c.checks.push_back({fmt("analytic vs finite-difference forces, 3 models x z in {0.1,1,10}: max %.2e (1e-4)", worst), worst < 1e-4});
    });
    guarded(c, "bit-stable", [&] {
        cli::JobConfig cfg = cli::default_config();
        cfg.particle = reference_particle(100.0, -100.0);
        cfg.surface = gold;
        cfg.grid = cli::parse_grid("log:1e-2:1e2:9");
        std::string first, second;
        for (int threads : {1, 0}) {
            cfg.threads = threads;
            std::ostringstream s;
            cli::write_csv(s, cli::cmd_force(cfg), cfg.output.precision);
            (threads == 1 ? first : second) = s.str();
        }
        c.checks.push_back({fmt("force CSV, 1 thread vs all cores: %zu bytes, identical: %s", first.size(), first == second ? "yes" : "no"),
                            !first.empty() && first == second});
    });
    return c;
}

Criterion c9() {
    Criterion c{9, "non-retarded perfect-conductor spin-flip rate"};
    const ParticleSpec p = particle(100.0, 0.0);
    guarded(c, "rate", [&] {
        const double law = spin_flip_nr_pc(p);
        const double a = delta_gamma_m(p, pc, Geometry::from_z_tilde(1e-3 / p.omega_tilde, p), quad, 0.0);
        const double b = delta_gamma_m(p, pc, Geometry::from_z_tilde(1e-2 / p.omega_tilde, p), quad, 0.0);
        c.checks.push_back({fmt("w*z=1e-3: rate / (eta S(S+1) w^3 / 3) = %.5f (5%%)", a / law), std::abs(a / law - 1.0) < 0.05});
        c.checks.push_back({fmt("w*z=1e-2 vs 1e-3: %.2e relative change (5%%)", rel(b, a)), rel(b, a) < 0.05});
        const double per_s = a * p.gamma_0;
        const double hz = per_s / (2.0 * pi);
        c.checks.push_back({fmt("S=100: %.3g 1/s = %.3g Hz, %.2f decades from 1e-9 Hz (2)", per_s, hz, std::abs(std::log10(hz / 1e-9))),
                            std::abs(std::log10(hz / 1e-9)) <= 2.0});
    });
    return c;
}

}  // namespace

int main() {
    const std::vector<std::function<Criterion()>> all = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
    int failed = 0;
    for (const auto& run : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Criterion c = run();
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("C%d %s  %s  (%.2fs)\n", c.id, c.passed() ? "PASS" : "FAIL", c.title.c_str(), c.seconds);
        for (const auto& k : c.checks) std::printf("      [%s] %s\n", k.ok ? "ok" : "xx", k.text.c_str());
        std::fflush(stdout);
        if (!c.passed()) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
