#pragma once

#include <complex>

#include "magcp/core_params.hpp"
#include "magcp/materials.hpp"
#include "magcp/quadrature.hpp"

namespace magcp {

// Level shifts are in units of hbar Gamma0, forces in hbar Gamma0 k_e, rates in Gamma0.
// Every numerical routine throws QuadratureFailure (carrying the partial value) when the
// integral misses its tolerance.
//
// quad.split_points, when given, are extra breakpoints of the frequency / k_par integrals in
// units of omega_e (resp. k_e). The natural scales omega_m, omega_e, gamma, omega_p and 1/(2 z)
// are always added.

enum class Observable { shift, force };  // force = -d/dz of the shift

double electric_ground(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                       const QuadratureConfig& quad, Observable what);
double magnetic_broadband(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                          const QuadratureConfig& quad, Observable what);
double magnetic_static(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                       const QuadratureConfig& quad, Observable what);
double magnetic_excited0(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                         const QuadratureConfig& quad, Observable what);

double electric_pc_closed(const ParticleSpec& p, const Geometry& g, const QuadratureConfig& quad,
                          Observable what);
double magnetic_pc_closed(const ParticleSpec& p, const Geometry& g, const QuadratureConfig& quad,
                          Observable what);
double magnetic_excited0_pc_closed(const ParticleSpec& p, const Geometry& g, Observable what);

inline double u_e_ground(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                         const QuadratureConfig& quad) {
    return electric_ground(p, s, g, quad, Observable::shift);
}
inline double u_e_pc_closed(const ParticleSpec& p, const Geometry& g, const QuadratureConfig& quad) {
    return electric_pc_closed(p, g, quad, Observable::shift);
}
inline double u_m_ground_broadband(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                                   const QuadratureConfig& quad) {
    return magnetic_broadband(p, s, g, quad, Observable::shift);
}
inline double u_m_pc_closed(const ParticleSpec& p, const Geometry& g, const QuadratureConfig& quad) {
    return magnetic_pc_closed(p, g, quad, Observable::shift);
}
inline double u_m_static(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                         const QuadratureConfig& quad) {
    return magnetic_static(p, s, g, quad, Observable::shift);
}
// Requires p.m_s == 0.
inline double u_m_excited0(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                           const QuadratureConfig& quad) {
    return magnetic_excited0(p, s, g, quad, Observable::shift);
}
inline double u_m0_pc_closed(const ParticleSpec& p, const Geometry& g) {
    return magnetic_excited0_pc_closed(p, g, Observable::shift);
}

// Integral I = int dk_par/k_m (k_par/kappa) exp(-2 kappa z) [r_p + r_s kappa^2/k_m^2] at omega_m.
// The m_S = 0 shift is -(3/16) eta S(S+1) w^3 Re I and the spin-flip rate (3/8) eta w^3 M Im I.
std::complex<double> magnetic_resonant_integral(const ParticleSpec& p, const SurfaceModel& s,
                                                const Geometry& g, const QuadratureConfig& quad,
                                                Observable what = Observable::shift);

double delta_gamma_e(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                     const QuadratureConfig& quad);
// Rate of |S, m_s> -> |S, m_s - 1>, carrying <S,m_s|S+ S-|S,m_s> = S(S+1) - m_s(m_s - 1).
double delta_gamma_m(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                     const QuadratureConfig& quad, double m_s);

enum class LevelMode { ground, excited0 };

struct PotentialBreakdown {
    double u_e_minus = 0.0;
    double u_m_minus = 0.0;
    double u_m_z = 0.0;
    double u_m_excited0 = 0.0;  // NaN unless mode == excited0
    double total_ground = 0.0;  // u_e_minus + u_m_minus + u_m_z
    double total_excited0 = 0.0;  // u_e_minus + u_m_excited0, NaN unless mode == excited0
    bool converged_e = true;
    bool converged_m_minus = true;
    bool converged_m_z = true;
    bool converged_m_excited0 = true;

    bool all_converged() const {
        return converged_e && converged_m_minus && converged_m_z && converged_m_excited0;
    }
};

// The ground components are always evaluated (with the particle's spin at m_S = -S); the
// excited component only in excited0 mode.
PotentialBreakdown potential_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                                       const QuadratureConfig& quad, LevelMode mode);

struct DecayBreakdown {
    double delta_gamma_e = 0.0;
    double delta_gamma_m = 0.0;
    bool converged_e = true;
    bool converged_m = true;
};

DecayBreakdown decay_breakdown(const ParticleSpec& p, const SurfaceModel& s, const Geometry& g,
                               const QuadratureConfig& quad, double m_s);

// Shift of |S, m_s> split by origin: off-resonant terms from the raising and lowering parts of the
// spin coupling (imaginary-axis integrals weighted by <S-S+>/2 and -<S+S->/2) plus the resonant
// real-frequency term of the downward transition. For m_s = 0 the two off-resonant terms cancel.
struct ExcitedDecomposition {
    double off_resonant_raising = 0.0;
    double off_resonant_lowering = 0.0;
    double resonant = 0.0;
    double total() const { return off_resonant_raising + off_resonant_lowering + resonant; }
};

ExcitedDecomposition excited_shift_decomposition(const ParticleSpec& p, const SurfaceModel& s,
                                                 const Geometry& g, const QuadratureConfig& quad,
                                                 double m_s);

}  // namespace magcp
