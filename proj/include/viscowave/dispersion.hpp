#pragma once

/**
 * @file dispersion.hpp
 * @brief Complex wavenumber kappa(p) and the attenuation / dispersion curves derived from it.
 *
 *   kappa(p) = (p / c0) (1 + p K~(p) / bigK)^(-1/2) = B p + beta(p),
 *
 * with B = 1/C0. On the imaginary axis p = -i w:
 *   A(w) = Re kappa(-i w),   D(w) = -Im kappa(-i w) - w B,   1/c(w) = B + D(w)/w.
 */

#include <complex>
#include <span>
#include <vector>

#include "viscowave/kernels.hpp"
#include "viscowave/measures.hpp"

namespace viscowave::dispersion {

/// Principal-branch wavenumber; p must not lie on the closed negative real axis (p = 0 gives 0).
std::complex<double> kappa(const Medium& medium, const RelaxationKernel& kernel, std::complex<double> p);

/// One-sided limit kappa(-r + i0), r > 0. Closed-form symbols (built-in
/// families, atom-only measures) are evaluated at -r + i 1e-100 r; measures
/// with a density part use Richardson extrapolation over
/// eps in {1e-3 r, 1e-4 r, 1e-5 r}.
std::complex<double> kappa_boundary_value(const Medium& medium, const RelaxationKernel& kernel, double r);

/// C0 = c0 (1 + K0/bigK)^(1/2); +inf when K0 is infinite.
double wavefront_speed(const Medium& medium, const RelaxationKernel& kernel);

/// p / kappa(p) at real p = 1e8 / tau_char: numerical cross-check of wavefront_speed.
double wavefront_speed_numeric(const Medium& medium, const RelaxationKernel& kernel);

/// C_inf = c0 (1 + Kinf/bigK)^(1/2).
double static_speed(const Medium& medium, const RelaxationKernel& kernel);

/// B = 1/C0 (0 when C0 is infinite).
double slowness(const Medium& medium, const RelaxationKernel& kernel);

/// Kernel time scale; the Newtonian kernel uses N / bigK.
double characteristic_time(const Medium& medium, const RelaxationKernel& kernel);

struct CurvePoint {
    double A;  ///< neper/m
    double D;  ///< rad/m
    double c;  ///< m/s
    double Q;  ///< +inf when A == 0
};

CurvePoint evaluate(const Medium& medium, const RelaxationKernel& kernel, double omega);

struct DispersionCurve {
    std::vector<double> omega;
    std::vector<double> A;
    std::vector<double> D;
    std::vector<double> c;
    std::vector<double> Q;
    double C0 = 0.0;
    double Cinf = 0.0;
    double B = 0.0;
};

/// Evaluates the four curves on a strictly increasing positive grid and checks
/// A >= 0 nondecreasing, D >= 0, D/w nonincreasing, Cinf <= c <= C0 nondecreasing
/// (relative tolerance rel_tol plus the rounding floor of kappa). Throws
/// InvariantViolation naming the first failing frequency.
DispersionCurve curve(const Medium& medium, const RelaxationKernel& kernel, std::span<const double> omega_grid,
                      double rel_tol = 1e-9);

/// n log-spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// lim_{w->0} D(w)/w, obtained by evaluating at decreasing w until it settles.
double low_frequency_dispersion_limit(const Medium& medium, const RelaxationKernel& kernel);

struct ColeColeClosedForm {
    double X;
    double Y;
    double A;
};

/// X, Y of 1 + pK~(p)/bigK at p = -i w and the polar reconstruction
/// A = w sqrt(R - X) / (sqrt(2) c0 R), R = |X + iY|. Throws InvariantViolation
/// when A disagrees with Re kappa(-i w) beyond 1e-10 relative.
ColeColeClosedForm cole_cole_closed_form(const Medium& medium, const ColeColeParams& params, double omega);

/// Attenuation spectrum nu read off the cut: nu'(r) = Im[kappa - B p](-r + i0) / (pi r).
/// The returned density evaluates the boundary value on demand; r_grid fixes the
/// table kept for serialization and locates the lower edge of the support.
SpectralMeasure extract_measure(const Medium& medium, const RelaxationKernel& kernel, std::span<const double> r_grid);

/// R = -K0' (1 + K0/bigK)^(-3/2) / (2 rho0 c0^3), the high-frequency limit of A for bounded spectra.
double prony_saturation(const Medium& medium, const RelaxationKernel& kernel);

}  // namespace viscowave::dispersion
