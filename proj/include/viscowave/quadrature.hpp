#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod integration on a logarithmic axis.
 *
 * Every measure integral in the library runs over r in (0, inf) with
 * structure spread across many decades, so the driver works in u = ln r,
 * splits the axis at caller-supplied scales and sweeps decade panels into
 * both tails until they stop contributing.
 */

#include <functional>
#include <vector>

namespace viscowave::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    unsigned max_depth = 22;   // bisection depth per panel
    int max_decades = 620;     // tail sweep budget (1e-310 .. 1e310)
};

/// Library defaults; the environment variable VISCOWAVE_TOL overrides rel_tol.
Options default_options();

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;

    Result& operator+=(const Result& other) {
        value += other.value;
        error += other.error;
        converged = converged && other.converged;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Adaptive G10/K21 on the finite interval [a, b].
Result integrate(const Integrand& f, double a, double b, const Options& opts = default_options());

/// Integral of f(r) dr over [lo, hi], 0 < lo < hi, evaluated in u = ln r.
Result integrate_log(const Integrand& f, double lo, double hi, const Options& opts = default_options());

/// As integrate_log but with u = ln lo + v^2, which regularizes integrable
/// (r - lo)^(-1/2) edge singularities at the lower end.
Result integrate_log_edge(const Integrand& f, double lo, double hi, const Options& opts = default_options());

/// Description of a half-line integral over [lo, inf).
struct HalfLine {
    double lo = 0.0;                    ///< lower end; 0 means sweep towards 0
    bool lower_edge_singular = false;   ///< use integrate_log_edge on the first panel
    std::vector<double> scales;         ///< interior breakpoints (positive)
    /// Interior points with an integrable edge singularity (support edges of a band).
    std::vector<double> singular_points;
    /// Optional closed-form remainder: upper_closure(R) ~ integral of f over [R, inf).
    std::function<double(double)> upper_closure;
    double closure_from = 0.0;          ///< closure is used once the sweep passes this radius
};

/// Integral of f over [lo, inf). The result is flagged non-converged when a
/// tail sweep exhausts its budget; the partial value is still returned.
Result integrate_half_line(const Integrand& f, const HalfLine& line, const Options& opts = default_options());

}  // namespace viscowave::quad
