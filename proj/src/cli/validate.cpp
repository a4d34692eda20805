#include "magcp/cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "magcp/asymptotics.hpp"
#include "magcp/mechanics.hpp"
#include "magcp/potentials.hpp"

namespace magcp::cli {

namespace {

double rel_dev(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// A check whose evaluation throws (quadrature failure included) is reported as failed.
ValidationCheck run(const std::string& name, const std::function<ValidationCheck()>& body) {
    try {
        ValidationCheck c = body();
        c.name = name;
        return c;
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

}  // namespace

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport cmd_validate(const QuadratureConfig& quad) {
    ValidationReport rep;
    const ParticleSpec p = build_particle(reference_particle(1.0, -1.0));
    const ParticleSpec p0 = p.with_spin(1.0, 0.0);
    const SurfaceModel pc = PerfectConductor{};
    const SurfaceModel gold = Drude{1.36e16, 1e14};

    rep.checks.push_back(run("pc closed form vs double integral", [&] {
        double worst = 0.0;
        for (double z : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const Geometry g = Geometry::from_z_tilde(z, p);
            const double de = rel_dev(u_e_ground(p, pc, g, quad), u_e_pc_closed(p, g, quad));
            const double dm = rel_dev(u_m_ground_broadband(p, pc, g, quad), u_m_pc_closed(p, g, quad));
            rep.pc_table.push_back({z, de, dm});
            worst = std::max({worst, de, dm});
        }
        return ValidationCheck{"", worst < 1e-6, fmt("max rel. deviation %.2e (limit 1e-6)", worst)};
    }));

    rep.checks.push_back(run("pc excited m_S=0 closed form", [&] {
        double worst = 0.0;
        for (double wz : {1e-3, 0.5, 5.0}) {
            const Geometry g = Geometry::from_z_tilde(wz / p.omega_tilde, p);
            const double num = u_m_excited0(p0, pc, g, quad);
            const double closed = u_m0_pc_closed(p0, g);
            // Relative to the envelope of the oscillating bracket.
            const double envelope = 3.0 * p.eta * 2.0 / (64.0 * std::pow(g.z_tilde, 3)) * (1.0 + 2.0 * wz + 4.0 * wz * wz);
            worst = std::max(worst, std::abs(num - closed) / envelope);
        }
        return ValidationCheck{"", worst < 1e-6, fmt("max deviation / envelope %.2e (limit 1e-6)", worst)};
    }));

    rep.checks.push_back(run("pc region I electric law", [&] {
        const Geometry g = Geometry::from_z_tilde(1e-3, p);
        const double d = rel_dev(u_e_ground(p, pc, g, quad), table1_potential(p, pc, g, Region::I, ShiftKind::electric));
        return ValidationCheck{"", d < 0.02, fmt("rel. deviation %.2e at z=1e-3 (limit 2e-2)", d)};
    }));

    rep.checks.push_back(run("pc region III electric law", [&] {
        const Geometry g = Geometry::from_z_tilde(1e7, p);
        const double d = rel_dev(u_e_ground(p, pc, g, quad), table1_potential(p, pc, g, Region::III, ShiftKind::electric));
        return ValidationCheck{"", d < 0.02, fmt("rel. deviation %.2e at z=1e7 (limit 2e-2)", d)};
    }));

    rep.checks.push_back(run("drude region I electric coefficient", [&] {
        const Geometry g = Geometry::from_z_tilde(1e-4, p);
        const double d =
            rel_dev(u_e_ground(p, gold, g, quad), table1_potential(p, gold, g, Region::I, ShiftKind::electric));
        return ValidationCheck{"", d < 0.02, fmt("rel. deviation %.2e at z=1e-4 (limit 2e-2)", d)};
    }));

    rep.checks.push_back(run("drude magnetostatic term vanishes", [&] {
        const double v = u_m_static(p, gold, Geometry::from_z_tilde(1.0, p), quad);
        return ValidationCheck{"", v == 0.0, fmt("value %.3g", v)};
    }));

    rep.checks.push_back(run("analytic vs finite-difference force", [&] {
        ForceOptions opt;
        opt.pc_closed_forms = false;
        double worst = 0.0;
        for (double z : {0.1, 1.0, 10.0}) {
            const Geometry g = Geometry::from_z_tilde(z, p);
            const ForceBreakdown a = force_breakdown(p, gold, g, quad, opt);
            const ForceBreakdown f = force_breakdown_fd(p, gold, g, quad, opt);
            worst = std::max({worst, rel_dev(a.f_e, f.f_e), rel_dev(a.f_m_minus, f.f_m_minus)});
        }
        return ValidationCheck{"", worst < 1e-4, fmt("max rel. deviation %.2e (limit 1e-4)", worst)};
    }));

    return rep;
}

void print_report(std::ostream& out, const ValidationReport& r) {
    out << "z_tilde      dU_e/U_e     dU_m/U_m\n";
    for (const auto& row : r.pc_table) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-12.4g %-12.3e %-12.3e\n", row[0], row[1], row[2]);
        out << buf;
    }
    for (const auto& c : r.checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    out << (r.passed() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace magcp::cli
