#pragma once

/**
 * @file greens.hpp
 * @brief Green's functions of the viscoelastic pressure equation by numerical
 *        inverse Laplace transform along a shifted Bromwich line.
 *
 * For a unit impulse Q0 = delta the 1-D field is
 *
 *     P(t, x) = (1/2 pi i) int_Br exp(p t) kappa(p)/(2 p^2) exp(-kappa(p) x) S(p) dp,
 *
 * which reduces to H(t - x/c0)/(2 c0) for the elastic medium. The optional
 * source taper S(p) = exp(p^2 / (2 sigma^2)) convolves the field with a unit
 * Gaussian of standard deviation 1/sigma in time. The line Re p = eps is
 * sampled with an FFT; Hermitian symmetry is imposed so the field is real.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "viscowave/kernels.hpp"

namespace viscowave::greens {

struct GreenMetadata {
    double C0 = 0.0;                 ///< wavefront speed (+inf allowed)
    double predicted_arrival = 0.0;  ///< position * B
    double omega_max = 0.0;          ///< highest synthesized frequency (rad/s)
    double contour_shift = 0.0;      ///< eps (1/s)
    double fft_period = 0.0;         ///< s
    double fft_step = 0.0;           ///< s
    std::size_t fft_size = 0;
    double imag_residue = 0.0;       ///< max |Im P| / max |P|
    double aliasing_change = -1.0;   ///< relative change under period doubling (-1: not checked)
    double crosscheck = -1.0;        ///< 3-D: differenced vs spectral radial derivative (-1: n/a)
    int time_order = 0;              ///< m
    int space_order = 0;             ///< n
};

struct GreenField {
    int dim = 1;
    double position = 0.0;  ///< x (1-D) or r (3-D), m
    std::vector<double> t;
    std::vector<double> values;
    double sigma_s = 0.0;
    GreenMetadata meta;
};

struct SynthesisOptions {
    bool check_aliasing = true;
    double envelope_tol = 1e-15;          ///< spectral cutoff relative to the spectrum peak
    std::size_t max_fft_size = std::size_t{1} << 25;
    double radial_step = 1e-4;            ///< relative step for 3-D differencing
};

/// nt uniform samples on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t nt);

/// 1-D field for Q0 = delta. sigma_s = 0 requests the raw field, which is
/// only allowed when the attenuation is unbounded.
GreenField green_1d(const Medium& medium, const RelaxationKernel& kernel, double x, std::span<const double> t_grid,
                    double sigma_s, const SynthesisOptions& opts = {});

/// d^m/dt^m d^n/dx^n of the 1-D field: extra factor p^m (-kappa(p))^n.
/// Requires m + n <= 4 and sigma_s > 0.
GreenField green_derivatives(const Medium& medium, const RelaxationKernel& kernel, double x,
                             std::span<const double> t_grid, int m, int n, double sigma_s,
                             const SynthesisOptions& opts = {});

/// 3-D field -(1/(2 pi r)) dQ/dr with Q the 1-D field, by Richardson-refined
/// central differences at r(1 +- h), r(1 +- 2h). The spectral derivative is
/// kept as a cross-check in the metadata.
GreenField green_3d(const Medium& medium, const RelaxationKernel& kernel, double r, std::span<const double> t_grid,
                    double sigma_s, const SynthesisOptions& opts = {});

struct ArrivalReport {
    double arrival = 0.0;            ///< first t with |P| > threshold * max |P|
    double pedestal_flatness = 0.0;  ///< max |P| on [B r, arrival[ / max |P|
    double predicted_arrival = 0.0;  ///< B r
    double delay = 0.0;              ///< arrival - B r
};

ArrivalReport arrival_diagnostics(const GreenField& field, double threshold);

}  // namespace viscowave::greens
