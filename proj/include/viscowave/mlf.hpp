#pragma once

// Mittag-Leffler relaxation function E_alpha(-x^alpha), 0 < alpha <= 1, x >= 0.
//
// For x >= x_switch the value comes from the Laplace-type representation
//
//   E_alpha(-x^alpha) = sin(alpha pi)/pi * int_0^inf exp(-r x) r^(alpha-1)
//                         / (r^(2 alpha) + 2 r^alpha cos(alpha pi) + 1) dr,
//
// integrated on the log axis; below it the alternating power series is used.

#include <span>
#include <vector>

#include "viscowave/quadrature.hpp"

namespace viscowave::mlf {

inline constexpr double kDefaultSwitch = 0.1;

struct SeriesValue {
    double value;
    double remainder_bound;  ///< |truncation error| bound of the alternating tail
    int terms;
};

/// Truncated series sum_k (-x^alpha)^k / Gamma(1 + alpha k).
SeriesValue ml_series(double alpha, double x);

/// Integral representation; throws ConvergenceError with the achieved error.
double ml_integral(double alpha, double x, const quad::Options& opts = {1e-15, 1e-13, 24, 620});

/// E_alpha(-x^alpha) with the branch switch at x_switch; alpha == 1 returns exp(-x).
double ml_neg_power(double alpha, double x, double x_switch = kDefaultSwitch);

struct CmProbeReport {
    bool pass = true;
    bool monotone = true;
    bool bounded = true;     ///< all values in (0, 1]
    int max_order = 4;
    std::vector<std::size_t> offending_nodes;
    std::vector<double> values;
};

/// Sampled complete-monotonicity probe over a strictly increasing positive grid.
/// The probe stops at the first node whose value underflows to zero.
CmProbeReport ml_cm_probe(double alpha, std::span<const double> grid);

}  // namespace viscowave::mlf
