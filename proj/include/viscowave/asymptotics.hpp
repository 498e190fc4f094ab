#pragma once

/**
 * @file asymptotics.hpp
 * @brief Power-law fits of the attenuation, Valiron's Stieltjes-transform
 *        theorem, the Paley-Wiener integrability test and the wavefront
 *        regularity classifier.
 *
 * Attenuation asymptotes are written A(w) ~ b w^s / ln(w)^g. A purely
 * logarithmic growth A ~ b ln(w)^eta therefore appears as s = 0, g = -eta.
 */

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viscowave/kernels.hpp"
#include "viscowave/measures.hpp"

namespace viscowave::asymptotics {

struct Window {
    double lo = 0.0;  ///< rad/s
    double hi = 0.0;
};

struct AsymptoteFit {
    Window window;
    double exponent = 0.0;      ///< s
    double log_exponent = 0.0;  ///< g (0 when not fitted)
    double prefactor = 0.0;     ///< b
    double residual = 0.0;      ///< rms residual of ln A
    int samples = 0;
};

/// Least squares ln A = s ln w - g ln ln w + ln b over the samples inside the
/// window (g fixed to 0 unless fit_log). Requires >= 20 samples in the window,
/// a window of >= 2 decades and positive samples; fit_log also needs lo > e.
AsymptoteFit fit_powerlaw(std::span<const double> omega, std::span<const double> values, Window window,
                          bool fit_log = false);

/// Logarithmic growth A ~ b ln(w)^eta fitted through the local slope
/// dA/d ln w = eta b ln(w)^(eta - 1), which is insensitive to an additive
/// constant in A. Returned as exponent 0, log_exponent -eta, prefactor b.
AsymptoteFit fit_log_growth(std::span<const double> omega, std::span<const double> values, Window window);

/// Samples Re kappa(-i w) on n log-spaced points of the window and fits it.
AsymptoteFit fit_attenuation(const Medium& medium, const RelaxationKernel& kernel, Window window,
                             std::size_t n = 200, bool fit_log = false);

/// Same for an attenuation spectrum nu, through A(w) = w^2 int nu(dr)/(w^2 + r^2).
AsymptoteFit fit_spectrum(const SpectralMeasure& nu, Window window, std::size_t n = 200, bool fit_log = false);

/// Value of b w^s / ln(w)^g.
double asymptote_value(const AsymptoteFit& fit, double omega);

// ---------------------------------------------------------------------------

struct ValironReport {
    double beta = 0.0;
    double limit = 1.0;            ///< pi beta / sin(pi beta), 1 at beta = 0
    std::vector<double> x;
    std::vector<double> g;         ///< int df(y)/(x + y)
    std::vector<double> ratio;     ///< g(x) x^(1-beta) / l(x)
    double rel_error = 0.0;        ///< at the largest x
    bool pass = false;
};

/// f is the (nondecreasing, right-continuous) distribution function of a
/// measure on [0, inf[ with f(0-) = 0. g(x) = int f(y)/(x + y)^2 dy after
/// integration by parts. Jumps of f should be listed in `breakpoints`.
ValironReport verify_valiron(const std::function<double(double)>& f, double beta,
                             const std::function<double(double)>& l, std::vector<double> breakpoints = {},
                             std::vector<double> xs = {1e2, 1e3, 1e4, 1e5, 1e6}, double tolerance = 0.05);

// ---------------------------------------------------------------------------

enum class Decision { finite, divergent, indeterminate };
std::string_view to_string(Decision d);

struct PaleyWienerResult {
    Decision decision = Decision::indeterminate;
    bool analytic = false;
    double integral = 0.0;          ///< value (finite) or last partial sum
    std::string certificate;        ///< human-readable reason
    bool finite() const noexcept { return decision == Decision::finite; }
};

/// Descriptor of the asymptote A(w) ~ b w^s / ln(w)^g. The integral of
/// A/(1 + w^2) is finite iff s < 1, or s = 1 and g > 1.
struct AsymptoteDescriptor {
    double exponent = 0.0;
    double log_exponent = 0.0;
};

PaleyWienerResult paley_wiener_test(const AsymptoteDescriptor& asymptote);

/// Attenuation spectrum nu with an analytic tail descriptor h ~ r^q / ln^g r:
/// the attenuation then grows like w^(1+q) / ln^g w.
PaleyWienerResult paley_wiener_test(const SpectralMeasure& nu);

struct PaleyWienerOptions {
    double w0 = 1.0;
    int max_doublings = 1000;
    double rel_tol = 1e-8;
    double blowup_bound = 1e15;
};

/// Numeric mode: accumulates int A/(1 + w^2) over doubling cutoffs. Gives an
/// indeterminate result when neither geometric convergence nor growth of the
/// doubling increments is established within the budget.
PaleyWienerResult paley_wiener_test(const std::function<double(double)>& attenuation,
                                    const PaleyWienerOptions& opts = {});

// ---------------------------------------------------------------------------

enum class WavefrontClass { NoWavefront, SmoothWavefront, DiscontinuityAdmitting, StepwiseRegularizing, Indeterminate };
std::string_view to_string(WavefrontClass c);

struct StepwiseOnset {
    int order;          ///< derivative order N
    double onset_time;  ///< (N + 1)/(A c0), s
};

struct WavefrontReport {
    double C0 = 0.0;
    bool paley_wiener_finite = false;
    WavefrontClass cls = WavefrontClass::Indeterminate;
    std::vector<StepwiseOnset> stepwise_schedule;
    std::optional<AsymptoteFit> asymptote;
    std::string basis;  ///< "family" or "fit"
    std::string note;
};

struct ClassifyOptions {
    double residual_threshold = 1e-2;   ///< rms of ln A above this is ambiguous
    double exponent_tolerance = 0.05;
    double log_tolerance = 0.2;
    int schedule_orders = 4;
};

/// Built-in families are classified from their analytic form; custom measures
/// (or an explicitly supplied fit) go through the high-frequency fit.
WavefrontReport classify_wavefront(const Medium& medium, const RelaxationKernel& kernel,
                                   const std::optional<AsymptoteFit>& fit = std::nullopt,
                                   const ClassifyOptions& opts = {});

/// Classification from a wavefront speed and an attenuation asymptote alone.
WavefrontReport classify_asymptote(double C0, const Medium& medium, const AsymptoteFit& fit,
                                   bool bounded_attenuation, const ClassifyOptions& opts = {});

}  // namespace viscowave::asymptotics
