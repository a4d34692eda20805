#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "magcp/core_params.hpp"
#include "magcp/materials.hpp"
#include "magcp/potentials.hpp"
#include "magcp/quadrature.hpp"

namespace magcp {

// Forces in units of hbar Gamma0 k_e, positive away from the surface.
struct ForceBreakdown {
    double f_e = 0.0;
    double f_m_minus = 0.0;
    double f_m_z = 0.0;          // 0 when the static term is excluded
    double f_m_excited0 = 0.0;   // NaN unless mode == excited0
    double f_gravity = 0.0;
    double f_total = 0.0;        // ground: f_e + f_m_minus + f_m_z + f_gravity; excited0: f_e + f_m_excited0 + f_gravity
    double f_total_cp = 0.0;     // ground: f_e + f_m_minus + f_gravity; excited0: same as f_total
    bool converged = true;
};

struct ForceOptions {
    LevelMode mode = LevelMode::ground;
    bool include_static = true;
    EnvironmentSpec env;
    // Perfect conductor: single-integral closed forms instead of the double integrals.
    bool pc_closed_forms = true;
};

// Differentiates under the integral sign. Components that miss their tolerance keep the partial
// value and clear `converged`.
ForceBreakdown force_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                               const QuadratureConfig& quad, const ForceOptions& opt = {});

// Central differences of the potentials with step rel_step * z_tilde. Propagates QuadratureFailure.
ForceBreakdown force_breakdown_fd(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                                  const QuadratureConfig& quad, const ForceOptions& opt = {},
                                  double rel_step = 1e-4);

enum class EquilibriumMethod { analytic_approx, numeric_root };

std::string_view to_string(EquilibriumMethod m);

struct Equilibrium {
    double z_tilde_eq = 0.0;
    bool stable = false;
    double residual_force = 0.0;
    double slope = 0.0;  // d f_total / d z_tilde at the root
    EquilibriumMethod method = EquilibriumMethod::numeric_root;
    std::optional<double> analytic;  // quarter-power estimate for the same mode
    int force_evaluations = 0;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

// Quarter-power estimates, all with the mass per spin:
//   ground, no static:  (9 eta hbar Gamma0 k_e / (64 m_u g))^(1/4)
//   ground, static:     (9 eta S hbar Gamma0 k_e / (32 m_u g))^(1/4)
//   excited0:           (9 eta S hbar Gamma0 k_e / (64 m_u g))^(1/4)
// Empty when g = 0.
std::optional<double> analytic_equilibrium(const ParticleSpec& p, const ForceOptions& opt);

// Root of f_total (f_total_cp without the static term) in the bracket, 1e-6 relative in z_tilde.
// A bracket without a sign change at its ends is scanned on a logarithmic grid first.
// Throws BracketError for a malformed bracket and NoEquilibrium when no sign change is found.
Equilibrium find_equilibrium(const ParticleSpec& p, const SurfaceModel& s, const QuadratureConfig& quad,
                             const ForceOptions& opt, Bracket bracket);

enum class ThresholdMode { with_static, without_static };

// Total force at fixed z written as B S^2 + (A + G) S + C: A from the broadband magnetic force,
// B from the static term, C the electric force (plus gravity when the mass is fixed), G the gravity
// per spin.
struct SpinThreshold {
    double spin = 0.0;  // +inf when no positive root exists
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double g = 0.0;
    std::string diagnostic;
};

SpinThreshold spin_threshold(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                             const QuadratureConfig& quad, ThresholdMode mode,
                             const EnvironmentSpec& env = {});

// 9 eta S(S+1) / (64 z^4) - M g / (hbar Gamma0 k_e) for |S, 0> above a perfect conductor.
// Throws RegimeViolation unless omega_tilde z_tilde < 0.1 and SublevelOutOfRange unless m_S = 0.
double approx_total_force_excited(const ParticleSpec& p, const Geometry& g, const EnvironmentSpec& env = {});

}  // namespace magcp
