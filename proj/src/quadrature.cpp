#include "magcp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

namespace magcp {

namespace {

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double tiny = std::numeric_limits<double>::min();
// Errors below this are lost in gradual underflow and count as met.
constexpr double underflow_floor = tiny / eps;

// Outer-level value of a nested integral: the inner value and the inner error bound travel together
// so that the inner bounds are integrated with the same rule.
struct Carried {
    double value = 0.0;
    double inner_error = 0.0;
};
Carried operator+(Carried a, Carried b) { return {a.value + b.value, a.inner_error + b.inner_error}; }
Carried operator-(Carried a, Carried b) { return {a.value - b.value, a.inner_error - b.inner_error}; }
Carried operator*(Carried a, double s) { return {a.value * s, a.inner_error * s}; }

double magnitude(double v) { return std::abs(v); }
double magnitude(std::complex<double> v) { return std::abs(v); }
double magnitude(Carried v) { return std::abs(v.value); }

bool finite(double v) { return std::isfinite(v); }
bool finite(std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
bool finite(Carried v) { return std::isfinite(v.value) && std::isfinite(v.inner_error); }

struct Tail {
    bool enabled = false;
    double start = 0.0;
    double scale = 1.0;
};

template <class V>
struct Segment {
    double a = 0.0;
    double b = 0.0;
    bool tail = false;
    V value{};
    double error = 0.0;
};

template <class V, class F>
Segment<V> kronrod15(const F& f, double a, double b, bool is_tail, const Tail& tail, long& evals) {
    const auto eval = [&](double t) -> V {
        double x = t;
        double jac = 1.0;
        if (is_tail) {
            const double d = 1.0 - t;
            x = tail.start + tail.scale * t / d;
            jac = tail.scale / (d * d);
        }
        const V y = f(x);
        if (!finite(y)) throw NonFiniteIntegrand(x);
        return y * jac;
    };

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<V, 15> fv;
    fv[7] = eval(c);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        fv[j] = eval(c - dx);
        fv[14 - j] = eval(c + dx);
    }
    evals += 15;

    V resk = fv[7] * wgk[7];
    V resg = fv[7] * wg[3];
    double resabs = wgk[7] * magnitude(fv[7]);
    for (int j = 0; j < 7; ++j) {
        const V pair = fv[j] + fv[14 - j];
        resk = resk + pair * wgk[j];
        resabs += wgk[j] * (magnitude(fv[j]) + magnitude(fv[14 - j]));
        if (j % 2 == 1) resg = resg + pair * wg[j / 2];
    }
    const V mean = resk * 0.5;
    double resasc = wgk[7] * magnitude(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (magnitude(fv[j] - mean) + magnitude(fv[14 - j] - mean));

    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = magnitude((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);

    return Segment<V>{a, b, is_tail, resk * h, err};
}

template <class V, class F>
IntegralResult<V> adaptive(const F& f, std::span<const double> breaks, const Tail& tail, double rel_tol,
                           double abs_tol, int max_bisections) {
    IntegralResult<V> out;
    std::vector<Segment<V>> segs;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        segs.push_back(kronrod15<V>(f, breaks[i], breaks[i + 1], false, tail, out.evaluations));
    if (tail.enabled) segs.push_back(kronrod15<V>(f, 0.0, 1.0, true, tail, out.evaluations));

    double best_err = std::numeric_limits<double>::infinity();
    V best{};
    for (int it = 0;; ++it) {
        V total{};
        double err = 0.0;
        for (const auto& s : segs) {
            total = total + s.value;
            err += s.error;
        }
        if (err < best_err) {
            best_err = err;
            best = total;
        }
        if (best_err <= std::max({rel_tol * magnitude(best), abs_tol, underflow_floor})) break;
        if (it >= max_bisections) break;

        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        const Segment<V> s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) break;  // interval exhausted at double precision
        segs[worst] = kronrod15<V>(f, s.a, mid, s.tail, tail, out.evaluations);
        segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                    kronrod15<V>(f, mid, s.b, s.tail, tail, out.evaluations));
    }
    out.value = best;
    out.error_estimate = best_err;
    out.converged = best_err <= std::max({rel_tol * magnitude(best), abs_tol, underflow_floor});
    if (!out.converged) out.failed_level = QuadratureLevel::outer;
    return out;
}

// Breakpoints for [lower, inf): lower, split points above it, a geometric ladder of decades, then the
// start of the mapped tail.
std::vector<double> semi_infinite_breaks(double lower, std::span<const double> splits, int decades,
                                         Tail& tail) {
    std::vector<double> pts{lower};
    std::vector<double> sorted(splits.begin(), splits.end());
    std::sort(sorted.begin(), sorted.end());
    for (double p : sorted) {
        if (!std::isfinite(p) || !(p > pts.back() * (1.0 + 1e-12)) || !(p > lower)) continue;
        // A panel spanning several decades with its feature at the left end can look empty to
        // the 15-point rule, so widely separated breakpoints are joined by a decade ladder.
        if (pts.back() > 0.0)
            for (double d = pts.back() * 10.0; d < p / 1.5; d *= 10.0) pts.push_back(d);
        pts.push_back(p);
    }
    if (pts.size() == 1 && lower <= 0.0) pts.push_back(1.0);
    double anchor = pts.back();
    for (int k = 0; k < decades; ++k) {
        anchor *= 10.0;
        pts.push_back(anchor);
    }
    tail = Tail{true, pts.back(), std::max(pts.back(), tiny)};
    if (pts.back() <= 0.0) tail.scale = 1.0;
    return pts;
}

std::vector<double> uniform_panels(double a, double b, double max_width) {
    int n = 1;
    if (max_width > 0.0) n = static_cast<int>(std::min(1e4, std::ceil((b - a) / max_width)));
    n = std::max(n, 1);
    std::vector<double> pts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    pts.back() = b;
    return pts;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw InvalidQuadratureConfig("rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw InvalidQuadratureConfig("abs_tol must be >= 0");
    if (max_subdivisions < 10) throw InvalidQuadratureConfig("max_subdivisions must be >= 10");
    if (tail_decades < 0) throw InvalidQuadratureConfig("tail_decades must be >= 0");
    for (double p : split_points)
        if (!std::isfinite(p)) throw InvalidQuadratureConfig("split points must be finite");
}

IntegralResult<double> integrate_finite(const RealIntegrand& f, double a, double b,
                                        const QuadratureConfig& config) {
    config.validate();
    std::vector<double> pts{a};
    std::vector<double> sorted = config.split_points;
    std::sort(sorted.begin(), sorted.end());
    for (double p : sorted)
        if (p > pts.back() && p < b) pts.push_back(p);
    pts.push_back(b);
    return adaptive<double>(f, pts, Tail{}, config.rel_tol, config.abs_tol, config.max_subdivisions);
}

IntegralResult<double> integrate_semi_infinite(const RealIntegrand& f, double lower,
                                               const QuadratureConfig& config) {
    config.validate();
    Tail tail;
    const auto pts = semi_infinite_breaks(lower, config.split_points, config.tail_decades, tail);
    return adaptive<double>(f, pts, tail, config.rel_tol, config.abs_tol, config.max_subdivisions);
}

IntegralResult<double> integrate_nested(const NestedIntegrand& integrand, double outer_lower,
                                        const QuadratureConfig& config) {
    config.validate();
    QuadratureConfig inner_cfg = config;
    inner_cfg.rel_tol = config.rel_tol / 10.0;
    inner_cfg.abs_tol = config.abs_tol / 10.0;
    inner_cfg.split_points = integrand.inner_offsets;

    Tail inner_tail;
    const auto inner_pts = semi_infinite_breaks(0.0, inner_cfg.split_points, inner_cfg.tail_decades, inner_tail);

    bool inner_failed = false;
    long inner_evals = 0;
    const auto outer = [&](double x) -> Carried {
        const double lo = integrand.inner_lower(x);
        const auto g = [&](double t) { return integrand.f(x, lo + t); };
        const auto r = adaptive<double>(g, inner_pts, inner_tail, inner_cfg.rel_tol, inner_cfg.abs_tol,
                                        inner_cfg.max_subdivisions);
        inner_evals += r.evaluations;
        if (!r.converged) inner_failed = true;
        return Carried{r.value, r.error_estimate};
    };

    Tail tail;
    const auto pts = semi_infinite_breaks(outer_lower, config.split_points, config.tail_decades, tail);
    // The outer pass aims below the target so that the integrated inner bounds (about a tenth of it)
    // still fit.
    const auto r = adaptive<Carried>(outer, pts, tail, 0.8 * config.rel_tol, 0.8 * config.abs_tol,
                                     config.max_subdivisions);

    IntegralResult<double> out;
    out.value = r.value.value;
    out.error_estimate = r.error_estimate + std::abs(r.value.inner_error);
    out.evaluations = r.evaluations + inner_evals;
    out.converged = r.converged && !inner_failed &&
                    out.error_estimate <= std::max(config.rel_tol * std::abs(out.value), config.abs_tol);
    if (inner_failed)
        out.failed_level = QuadratureLevel::inner;
    else if (!out.converged)
        out.failed_level = QuadratureLevel::outer;
    return out;
}

IntegralResult<std::complex<double>> integrate_oscillatory_split(const SplitIntegrand& f, double split_at,
                                                                 const QuadratureConfig& config,
                                                                 double oscillation_period,
                                                                 const std::vector<double>& kappa_breaks) {
    config.validate();
    if (!(split_at > 0.0) || !std::isfinite(split_at))
        throw InvalidQuadratureConfig("split point must be positive");
    using cd = std::complex<double>;
    const double s = split_at;
    const double width = oscillation_period > 0.0 ? 0.5 * oscillation_period : 0.0;

    const auto direct = [&](double q) { return f(q, cd(0.0, -std::sqrt((s - q) * (s + q)))); };
    const auto near_split = [&](double u) {
        const double q = std::sqrt((s - u) * (s + u));
        return f(q, cd(0.0, -u)) * (u / q);
    };
    const auto evanescent = [&](double v) {
        const double q = std::hypot(s, v);
        return f(q, cd(v, 0.0)) * (v / q);
    };

    std::vector<double> v_splits{s};
    for (double v : kappa_breaks)
        if (v > 0.0 && std::isfinite(v)) v_splits.push_back(v);
    for (double q : config.split_points)
        if (q > s) v_splits.push_back(std::sqrt((q - s) * (q + s)));
    Tail tail;
    const auto ev_pts = semi_infinite_breaks(0.0, v_splits, config.tail_decades, tail);
    const auto a_pts = uniform_panels(0.0, 0.5 * s, width);
    const auto b_pts = uniform_panels(0.0, 0.5 * std::sqrt(3.0) * s, width);

    double rel = config.rel_tol;
    IntegralResult<cd> out;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double abs = config.abs_tol / 3.0;
        const auto ra = adaptive<cd>(direct, a_pts, Tail{}, rel, abs, config.max_subdivisions);
        const auto rb = adaptive<cd>(near_split, b_pts, Tail{}, rel, abs, config.max_subdivisions);
        const auto rc = adaptive<cd>(evanescent, ev_pts, tail, rel, abs, config.max_subdivisions);

        out.value = ra.value + rb.value + rc.value;
        out.error_estimate = ra.error_estimate + rb.error_estimate + rc.error_estimate;
        out.evaluations += ra.evaluations + rb.evaluations + rc.evaluations;
        const bool sectors_ok = ra.converged && rb.converged && rc.converged;
        out.converged = sectors_ok && out.error_estimate <=
                                          std::max(config.rel_tol * std::abs(out.value), config.abs_tol);
        if (out.converged || !sectors_ok) break;
        // Sectors cancel: tighten them by the cancellation ratio and retry.
        const double gross = std::abs(ra.value) + std::abs(rb.value) + std::abs(rc.value);
        if (!(gross > 0.0)) break;
        rel = std::max(rel * std::abs(out.value) / gross, 1e-15);
    }
    out.failed_level = out.converged ? QuadratureLevel::none : QuadratureLevel::outer;
    return out;
}

}  // namespace magcp
