#include "magcp/mechanics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "magcp/errors.hpp"

namespace magcp {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

// Value of a component; a quadrature failure keeps the partial value and clears `ok`.
double component(const std::function<double()>& fn, bool& ok) {
    try {
        return fn();
    } catch (const QuadratureFailure& e) {
        ok = false;
        return e.value.real();
    }
}

void assemble(ForceBreakdown& f, const ForceOptions& opt) {
    if (opt.mode == LevelMode::excited0) {
        f.f_total = f.f_e + f.f_m_excited0 + f.f_gravity;
        f.f_total_cp = f.f_total;
        return;
    }
    if (!opt.include_static) f.f_m_z = 0.0;
    f.f_total_cp = f.f_e + f.f_m_minus + f.f_gravity;
    f.f_total = f.f_total_cp + f.f_m_z;
}

// Observable-generic evaluation shared by the analytic-derivative path (force) and the potentials
// used by the finite-difference path (shift).
ForceBreakdown evaluate(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                        const QuadratureConfig& quad, const ForceOptions& opt, Observable what, bool& ok) {
    const bool closed = opt.pc_closed_forms && is_perfect_conductor(s);
    const ParticleSpec ground = p.with_spin(p.spin, -p.spin);
    ForceBreakdown f;
    f.f_e = component([&] { return closed ? electric_pc_closed(ground, g, quad, what)
                                           : electric_ground(ground, s, g, quad, what); }, ok);
    f.f_m_excited0 = nan;
    if (opt.mode == LevelMode::excited0) {
        const ParticleSpec excited = p.with_spin(p.spin, 0.0);
        f.f_m_excited0 = component([&] { return closed ? magnetic_excited0_pc_closed(excited, g, what)
                                                        : magnetic_excited0(excited, s, g, quad, what); }, ok);
    } else {
        f.f_m_minus = component([&] { return closed ? magnetic_pc_closed(ground, g, quad, what)
                                                     : magnetic_broadband(ground, s, g, quad, what); }, ok);
        if (opt.include_static) f.f_m_z = component([&] { return magnetic_static(ground, s, g, quad, what); }, ok);
    }
    return f;
}

}  // namespace

std::string_view to_string(EquilibriumMethod m) {
    return m == EquilibriumMethod::analytic_approx ? "analytic-approx" : "numeric-root";
}

ForceBreakdown force_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                               const QuadratureConfig& quad, const ForceOptions& opt) {
    bool ok = true;
    ForceBreakdown f = evaluate(p, s, g, quad, opt, Observable::force, ok);
    f.f_gravity = gravity_force(p, opt.env);
    f.converged = ok;
    assemble(f, opt);
    return f;
}

ForceBreakdown force_breakdown_fd(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                                  const QuadratureConfig& quad, const ForceOptions& opt, double rel_step) {
    if (!(rel_step > 0.0 && rel_step < 0.5)) throw NonPositiveInput("finite-difference step must be in (0, 0.5)");
    const double h = rel_step * g.z_tilde;
    bool ok = true;
    const ForceBreakdown lo = evaluate(p, s, Geometry::from_z_tilde(g.z_tilde - h, p), quad, opt, Observable::shift, ok);
    const ForceBreakdown hi = evaluate(p, s, Geometry::from_z_tilde(g.z_tilde + h, p), quad, opt, Observable::shift, ok);
    if (!ok) throw QuadratureFailure("finite-difference force: a potential did not converge", nan, inf, 0,
                                     QuadratureLevel::outer);
    const auto d = [h](double a, double b) { return (a - b) / (2.0 * h); };
    ForceBreakdown f;
    f.f_e = d(lo.f_e, hi.f_e);
    f.f_m_minus = d(lo.f_m_minus, hi.f_m_minus);
    f.f_m_z = d(lo.f_m_z, hi.f_m_z);
    f.f_m_excited0 = opt.mode == LevelMode::excited0 ? d(lo.f_m_excited0, hi.f_m_excited0) : nan;
    f.f_gravity = gravity_force(p, opt.env);
    assemble(f, opt);
    return f;
}

std::optional<double> analytic_equilibrium(const ParticleSpec& p, const ForceOptions& opt) {
    if (!(opt.env.g > 0.0)) return std::nullopt;
    // hbar Gamma0 k_e / (m_u g)
    const double ratio = p.force_unit() / (p.mass_per_spin * opt.env.g);
    double base = 0.0;
    if (opt.mode == LevelMode::excited0)
        base = 9.0 * p.eta * p.spin / 64.0;
    else if (opt.include_static)
        base = 9.0 * p.eta * p.spin / 32.0;
    else
        base = 9.0 * p.eta / 64.0;
    return std::pow(base * ratio, 0.25);
}

Equilibrium find_equilibrium(const ParticleSpec& p, const SurfaceModel& s, const QuadratureConfig& quad,
                             const ForceOptions& opt, Bracket bracket) {
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo) || !std::isfinite(bracket.hi))
        throw BracketError("bracket must satisfy 0 < lo < hi < inf");

    Equilibrium eq;
    const auto total = [&](double z) {
        ++eq.force_evaluations;
        const ForceBreakdown f = force_breakdown(p, s, Geometry::from_z_tilde(z, p), quad, opt);
        return f.f_total;
    };

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = total(a);
    double fb = total(b);
    if (std::signbit(fa) == std::signbit(fb) && fa != 0.0 && fb != 0.0) {
        constexpr int n = 64;
        const double step = std::log(b / a) / n;
        bool found = false;
        double prev = a;
        double fprev = fa;
        for (int i = 1; i <= n && !found; ++i) {
            const double z = i == n ? b : a * std::exp(step * i);
            const double fz = i == n ? fb : total(z);
            if (std::signbit(fz) != std::signbit(fprev) || fz == 0.0) {
                a = prev;
                fa = fprev;
                b = z;
                fb = fz;
                found = true;
            }
            prev = z;
            fprev = fz;
        }
        if (!found) throw NoEquilibrium("total force does not change sign in the bracket");
    }

    // Illinois false position with bisection whenever the step stalls.
    double root = fa == 0.0 ? a : b;
    if (fa != 0.0 && fb != 0.0) {
        int side = 0;
        double width = b - a;
        for (int it = 0; it < 200; ++it) {
            double c = (a * fb - b * fa) / (fb - fa);
            // Every fourth step must have at least halved the bracket, otherwise bisect.
            if (it % 4 == 3) {
                if (b - a > 0.5 * width) c = 0.5 * (a + b);
                width = b - a;
            }
            if (!(c > a && c < b)) c = 0.5 * (a + b);
            const double fc = total(c);
            root = c;
            if (fc == 0.0 || (b - a) <= 1e-6 * c) break;
            if (std::signbit(fc) == std::signbit(fb)) {
                b = c;
                fb = fc;
                if (side == -1) fa *= 0.5;
                side = -1;
            } else {
                a = c;
                fa = fc;
                if (side == 1) fb *= 0.5;
                side = 1;
            }
            if ((b - a) <= 1e-6 * root) {
                root = std::abs(fa) < std::abs(fb) ? a : b;
                break;
            }
        }
    }

    eq.z_tilde_eq = root;
    eq.residual_force = total(root);
    const double h = 1e-4 * root;
    eq.slope = (total(root + h) - total(root - h)) / (2.0 * h);
    eq.stable = eq.slope < 0.0;
    eq.method = EquilibriumMethod::numeric_root;
    eq.analytic = analytic_equilibrium(p, opt);
    return eq;
}

SpinThreshold spin_threshold(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                             const QuadratureConfig& quad, ThresholdMode mode, const EnvironmentSpec& env) {
    ForceOptions opt;
    opt.include_static = mode == ThresholdMode::with_static;
    opt.env = EnvironmentSpec::no_gravity();

    const ForceBreakdown f1 = force_breakdown(p.with_spin(1.0, -1.0), s, g, quad, opt);
    const ForceBreakdown f2 = force_breakdown(p.with_spin(2.0, -2.0), s, g, quad, opt);
    if (!f1.converged || !f2.converged)
        throw QuadratureFailure("spin threshold: force evaluation did not converge", f1.f_total, inf, 0,
                                QuadratureLevel::outer);

    SpinThreshold t;
    const double m1 = f1.f_total - f1.f_e;
    const double m2 = f2.f_total - f2.f_e;
    t.b = 0.5 * (m2 - 2.0 * m1);
    t.a = m1 - t.b;
    t.c = f1.f_e;
    if (p.mass_override) {
        t.c += gravity_force(p, env);
    } else {
        t.g = gravity_force(p.with_spin(1.0, -1.0), env);
    }

    const double lin = t.a + t.g;
    double root = inf;
    if (t.b == 0.0) {
        if (lin != 0.0 && -t.c / lin > 0.0) root = -t.c / lin;
    } else {
        const double disc = lin * lin - 4.0 * t.b * t.c;
        if (disc >= 0.0) {
            const double q = -0.5 * (lin + std::copysign(std::sqrt(disc), lin));
            const double r1 = q / t.b;
            const double r2 = q != 0.0 ? t.c / q : -inf;
            const double lo = std::min(r1, r2);
            const double hi = std::max(r1, r2);
            root = lo > 0.0 ? lo : (hi > 0.0 ? hi : inf);
        }
    }
    t.spin = root;
    if (std::isinf(root))
        t.diagnostic = "no positive spin makes the total force vanish at this distance";
    return t;
}

double approx_total_force_excited(const ParticleSpec& p, const Geometry& g, const EnvironmentSpec& env) {
    if (p.m_s != 0.0) throw SublevelOutOfRange("closed form is for m_S = 0");
    const double z = g.z_tilde;
    if (!(z > 0.0)) throw NonPositiveInput("z_tilde must be positive");
    if (!(p.omega_tilde * z < 0.1)) throw RegimeViolation("closed form needs omega_m z0 / c << 1");
    return 9.0 * p.eta * p.spin * (p.spin + 1.0) / (64.0 * z * z * z * z) + gravity_force(p, env);
}

}  // namespace magcp
