#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "magcp/errors.hpp"

namespace magcp {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;  // bisections allowed per adaptive pass
    int tail_decades = 6;
    std::vector<double> split_points;

    void validate() const;  // throws InvalidQuadratureConfig
};

template <class T>
struct IntegralResult {
    T value{};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
    QuadratureLevel failed_level = QuadratureLevel::none;
};

using RealIntegrand = std::function<double(double)>;
// Integrand of the real-frequency k_par integral; receives k_par and the matching kappa_perp.
using SplitIntegrand = std::function<std::complex<double>(double, std::complex<double>)>;

IntegralResult<double> integrate_finite(const RealIntegrand& f, double a, double b,
                                        const QuadratureConfig& config);

// Panels: [lower, split points...], then tail_decades geometric decades above the largest
// breakpoint, then x = T + T t/(1 - t) on t in [0, 1).
IntegralResult<double> integrate_semi_infinite(const RealIntegrand& f, double lower,
                                               const QuadratureConfig& config);

struct NestedIntegrand {
    std::function<double(double, double)> f;  // f(outer, inner)
    std::function<double(double)> inner_lower;
    std::vector<double> inner_offsets;  // inner breakpoints, measured from inner_lower(outer)
};

// Outer integral over [outer_lower, inf) of the inner integral over [inner_lower(x), inf).
// Inner passes run at rel_tol / 10; the reported error adds the integrated inner error bounds.
IntegralResult<double> integrate_nested(const NestedIntegrand& integrand, double outer_lower,
                                        const QuadratureConfig& config);

// Integral over k_par in [0, inf) split at k_par = split_at:
//   [0, split_at/2]           directly, kappa = -i sqrt(split^2 - k^2)
//   [split_at/2, split_at]    through u = sqrt(split^2 - k^2), kappa = -i u
//   [split_at, inf)           through v = sqrt(k^2 - split^2), kappa = v
// Both substitutions remove the 1/kappa endpoint singularity. Panels in the first two sectors are
// at most half of oscillation_period wide (ignored when <= 0). config.split_points are k_par values;
// kappa_breaks are additional evanescent breakpoints given directly as kappa (kept exact even when
// kappa << split_at).
IntegralResult<std::complex<double>> integrate_oscillatory_split(const SplitIntegrand& f, double split_at,
                                                                 const QuadratureConfig& config,
                                                                 double oscillation_period = 0.0,
                                                                 const std::vector<double>& kappa_breaks = {});

}  // namespace magcp
