#pragma once

/**
 * @file measures.hpp
 * @brief Positive Radon measures on ]0, inf[ and their Stieltjes/Laplace integrals.
 *
 * A SpectralMeasure is a finite list of atoms plus an optional density. It
 * plays two roles: the Bernstein measure of a relaxation kernel
 * (K(t) = integral of exp(-r t)) and the attenuation spectrum nu of the
 * wavenumber, from which attenuation and excess dispersion follow as
 *
 *     A(w) = w^2 int nu(dr) / (w^2 + r^2),    D(w) = w int r nu(dr) / (w^2 + r^2).
 *
 * The module also hosts the sampled complete-monotonicity and Pick-property
 * checks used by every other module.
 */

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viscowave/quadrature.hpp"

namespace viscowave {

struct Atom {
    double rate;    ///< location r_k > 0 (rad/s)
    double weight;  ///< mass m_k > 0
};

/// Large-r behaviour h(r) ~ prefactor * r^exponent / ln(r)^log_exponent.
/// When `exact` is set the formula holds identically for r > support_min.
struct TailDescriptor {
    double prefactor = 1.0;
    double exponent = 0.0;
    double log_exponent = 0.0;
    bool exact = false;
};

struct Density {
    std::function<double(double)> h;    ///< density on r > support_min, >= 0
    double support_min = 0.0;
    std::optional<TailDescriptor> tail;
    bool edge_singular = false;         ///< integrable singularity at support_min
    std::vector<double> edges;          ///< interior support edges above support_min
    std::string kind = "custom";        ///< quasilinear | tabulated | extracted | custom
    std::map<std::string, double> params;
    std::vector<double> table_r;        ///< samples for tabulated/extracted densities
    std::vector<double> table_h;
};

/// Log-spaced node range where the measure has structure.
struct GridHints {
    double r_lo = 0.0;
    double r_hi = 0.0;
};

class SpectralMeasure {
public:
    SpectralMeasure() = default;
    /// Throws InvalidParameter when a rate or weight is not strictly positive.
    explicit SpectralMeasure(std::vector<Atom> atoms, std::optional<Density> density = std::nullopt,
                             GridHints hints = {});

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const Density* density() const noexcept { return density_ ? &*density_ : nullptr; }
    const GridHints& hints() const noexcept { return hints_; }
    bool is_zero() const noexcept { return atoms_.empty() && !density_; }

    /// Density value (0 below the support); 0 when there is no density part.
    double density_at(double r) const;

    /// Characteristic rates: atom locations and hint bounds.
    std::vector<double> scales() const;

private:
    std::vector<Atom> atoms_;
    std::optional<Density> density_;
    GridHints hints_;
};

/// Tabulated density, interpolated linearly in (ln r, h) and zero outside the table.
Density tabulated_density(std::vector<double> r, std::vector<double> h);

struct IntegrabilityReport {
    bool finite_over_1plus_r = true;
    bool finite_over_r = true;
    double total_mass = 0.0;  ///< +inf when infinite
    bool analytic = true;     ///< decided from tail descriptors only
};

struct IntegrabilityOptions {
    quad::Options quad = quad::default_options();
    double blowup_bound = 1e15;  ///< any partial integral above this counts as divergent
    int max_doublings = 400;
    double growth_threshold = 1e-3;
};

IntegrabilityReport integrability_report(const SpectralMeasure& measure, const IntegrabilityOptions& opts = {});

/// A(w) = w^2 int nu(dr)/(w^2 + r^2) (neper/m for an attenuation spectrum).
double attenuation_from_measure(const SpectralMeasure& measure, double omega,
                                const quad::Options& opts = quad::default_options());

/// D(w) = w int r nu(dr)/(w^2 + r^2).
double dispersion_from_measure(const SpectralMeasure& measure, double omega,
                               const quad::Options& opts = quad::default_options());

/// beta(p) = p int nu(dr)/(r + p), p off the closed negative real axis.
std::complex<double> beta_eval(const SpectralMeasure& measure, std::complex<double> p,
                               const quad::Options& opts = quad::default_options());

/// Laplace transform int exp(-r t) nu(dr), t > 0.
double bernstein_eval(const SpectralMeasure& measure, double t,
                      const quad::Options& opts = quad::default_options());

/// int r nu(dr); +inf when divergent.
double first_moment(const SpectralMeasure& measure, const quad::Options& opts = quad::default_options());

// ---------------------------------------------------------------------------
// Sampled CM / CBF checks
// ---------------------------------------------------------------------------

struct CmViolation {
    int order;
    std::size_t index;  ///< first grid node of the offending divided difference
    double value;
};

struct CmReport {
    bool pass = true;
    int max_order = 0;
    std::vector<CmViolation> violations;
};

/// Divided differences of order n over the (strictly increasing) grid must
/// carry the sign (-1)^n. Sample noise of relative size rel_noise is
/// propagated through the difference table and only sign errors beyond it
/// count as violations.
CmReport check_completely_monotone(std::span<const double> t, std::span<const double> f, int max_order,
                                   double rel_noise = 1e-10);

struct PickReport {
    bool pass = true;
    int samples = 0;
    double worst_ratio = 0.0;               ///< min over samples of Im f / |f|
    std::complex<double> worst_point{};
};

/// Samples f at `samples` pseudo-random points of the upper half-plane with
/// |p| log-uniform over [scale*1e-4, scale*1e4] and checks Im f(p) >= 0.
PickReport check_pick_property(const std::function<std::complex<double>(std::complex<double>)>& f,
                               double scale, int samples = 500, std::uint64_t seed = 20240611,
                               double tol = 1e-12);

}  // namespace viscowave
