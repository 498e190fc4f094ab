#include "viscowave/mlf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "viscowave/error.hpp"
#include "viscowave/measures.hpp"

namespace viscowave::mlf {

namespace {

void check_params(double alpha, double x) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidParameter("mittag-leffler: alpha must lie in (0, 1]");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("mittag-leffler: x must be finite and >= 0");
    }
}

}  // namespace

SeriesValue ml_series(double alpha, double x) {
    check_params(alpha, x);
    if (x == 0.0) {
        return {1.0, 0.0, 1};
    }
    const double z = std::pow(x, alpha);
    const double lz = std::log(z);
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 4000; ++k) {
        const double mag = std::exp(k * lz - std::lgamma(1.0 + alpha * k));
        sum += (k % 2 == 0) ? mag : -mag;
        // Once terms decrease monotonically the alternating tail is bounded by the next term.
        if (mag < prev && mag < 1e-17 * std::abs(sum)) {
            const double next = std::exp((k + 1) * lz - std::lgamma(1.0 + alpha * (k + 1)));
            if (next <= mag) {
                return {sum, next, k + 1};
            }
        }
        prev = mag;
    }
    throw ConvergenceError("mittag-leffler series did not converge", sum, prev);
}

double ml_integral(double alpha, double x, const quad::Options& opts) {
    check_params(alpha, x);
    if (alpha == 1.0) {
        return std::exp(-x);
    }
    const double s = std::sin(alpha * std::numbers::pi);
    const double c = std::cos(alpha * std::numbers::pi);
    const auto f = [alpha, x, c](double r) {
        const double ra = std::pow(r, alpha);
        return std::exp(-r * x) * (ra / r) / (ra * ra + 2.0 * ra * c + 1.0);
    };
    quad::HalfLine hl;
    hl.scales = {1.0};
    if (x > 0.0) {
        hl.scales.push_back(1.0 / x);
    }
    const quad::Result r = quad::integrate_half_line(f, hl, opts);
    if (!r.converged) {
        std::ostringstream os;
        os << "mittag-leffler integral did not converge for alpha=" << alpha << ", x=" << x;
        throw ConvergenceError(os.str(), s / std::numbers::pi * r.value, s / std::numbers::pi * r.error);
    }
    return s / std::numbers::pi * r.value;
}

double ml_neg_power(double alpha, double x, double x_switch) {
    check_params(alpha, x);
    if (alpha == 1.0) {
        return std::exp(-x);
    }
    if (x < x_switch) {
        return ml_series(alpha, x).value;
    }
    return ml_integral(alpha, x);
}

CmProbeReport ml_cm_probe(double alpha, std::span<const double> grid) {
    CmProbeReport rep;
    rep.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw DomainError("ml_cm_probe: grid must be positive and strictly increasing");
        }
        rep.values.push_back(ml_neg_power(alpha, grid[i]));
    }
    // Nodes where the value has underflowed (e.g. exp(-1000)) carry no sign
    // information; the probe stops at the first of them.
    std::size_t n = rep.values.size();
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
        if (rep.values[i] >= 0.0 && rep.values[i] < std::numeric_limits<double>::min()) {
            n = i;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double v = rep.values[i];
        if (!(v > 0.0 && v <= 1.0)) {
            rep.bounded = false;
            rep.offending_nodes.push_back(i);
        }
        if (i > 0 && !(v < rep.values[i - 1])) {
            rep.monotone = false;
            rep.offending_nodes.push_back(i);
        }
    }
    const CmReport cm = check_completely_monotone(grid.first(n), std::span<const double>(rep.values).first(n),
                                                  rep.max_order, 1e-11);
    for (const CmViolation& v : cm.violations) {
        rep.offending_nodes.push_back(v.index);
    }
    rep.pass = rep.bounded && rep.monotone && cm.pass;
    return rep;
}

}  // namespace viscowave::mlf
