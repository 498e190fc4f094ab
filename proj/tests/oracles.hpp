#pragma once

// Reference values computed independently of the library: closed forms and
// extended-precision series that share no code with src/.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

/// E_alpha(-x^alpha) from its power series in long double. Reliable while
/// x^alpha stays below ~4 (alternating terms cancel beyond that).
inline long double ml_series(long double alpha, long double x) {
    if (x == 0.0L) {
        return 1.0L;
    }
    const long double z = -std::pow(x, alpha);
    long double sum = 0.0L;
    for (int k = 0; k < 400; ++k) {
        const long double lg = std::lgamma(1.0L + alpha * k);
        const long double mag = std::exp(k * std::log(std::fabs(z)) - lg);
        sum += (k % 2 == 0) ? mag : -mag;
        if (k > 8 && mag < 1e-22L * std::fabs(sum)) {
            break;
        }
    }
    return sum;
}

/// E_{1/2}(-x^{1/2}) = exp(x) erfc(sqrt x).
inline double ml_half(double x) { return std::exp(x) * std::erfc(std::sqrt(x)); }

/// Standard normal CDF and density.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// Wavenumber written out directly: (p/c0) / sqrt(1 + s/bigK).
inline std::complex<double> kappa_direct(double c0, double rho0, std::complex<double> symbol, std::complex<double> p) {
    const double bigK = rho0 * c0 * c0;
    return (p / c0) / std::sqrt(1.0 + symbol / bigK);
}

/// Cole-Cole symbol M (1 + a z)/(1 + z) - M a with z = (tau p)^-alpha.
inline std::complex<double> cole_cole_symbol(double M, double a, double tau, double alpha, std::complex<double> p) {
    const std::complex<double> z = std::pow(tau * p, -alpha);
    return M * (1.0 + a * z) / (1.0 + z) - M * a;
}

/// Integral of r^q w^2/(w^2 + r^2) over (0, inf), -1 < q < 1.
inline double powerlaw_attenuation(double q, double w) {
    return std::pow(w, 1.0 + q) * std::numbers::pi / (2.0 * std::cos(std::numbers::pi * q / 2.0));
}

/// Integral of r^q w r/(w^2 + r^2) over (0, inf), -2 < q < 0.
inline double powerlaw_dispersion(double q, double w) {
    return std::pow(w, 1.0 + q) * std::numbers::pi / (2.0 * std::sin(std::numbers::pi * (q + 2.0) / 2.0));
}

}  // namespace oracle
