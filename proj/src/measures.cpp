#include "viscowave/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "viscowave/error.hpp"

namespace viscowave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// w(r) ~ coeff * r^power for r -> inf.
struct WeightTail {
    double coeff;
    double power;
};

// int_R^inf r^q ln(r)^(-gamma) dr for q < -1, or q == -1 with gamma > 1.
double log_power_tail(double q, double gamma, double R) {
    const double U = std::log(R);
    const double c = -(q + 1.0);
    if (c == 0.0) {
        return std::pow(U, 1.0 - gamma) / (gamma - 1.0);
    }
    boost::math::quadrature::exp_sinh<double> integrator;
    const auto g = [U, c, gamma](double x) { return std::exp(-x) * std::pow(U + x / c, -gamma); };
    return std::exp(-c * U) / c * integrator.integrate(g);
}

bool tail_integrable(double q, double gamma) {
    return q < -1.0 || (q == -1.0 && gamma > 1.0);
}

double max_scale(const std::vector<double>& scales) {
    double m = 1.0;
    for (double s : scales) {
        if (std::isfinite(s)) {
            m = std::max(m, s);
        }
    }
    return m;
}

quad::Result density_integral(const Density& d, const std::function<double(double)>& w,
                              std::optional<WeightTail> wt, std::vector<double> scales,
                              const quad::Options& opts) {
    quad::HalfLine hl;
    hl.lo = d.support_min;
    hl.lower_edge_singular = d.edge_singular;
    if (d.kind == "tabulated") {
        // Piecewise-linear interpolant: every node is a kink.
        scales.insert(scales.end(), d.table_r.begin(), d.table_r.end());
    } else if (!d.table_r.empty()) {
        scales.push_back(d.table_r.front());
        scales.push_back(d.table_r.back());
    }
    hl.scales = scales;
    hl.singular_points = d.edges;
    if (d.tail && wt && wt->coeff != 0.0) {
        const double q = d.tail->exponent + wt->power;
        const double gamma = d.tail->log_exponent;
        if (tail_integrable(q, gamma)) {
            const double b = d.tail->prefactor;
            const double coeff = wt->coeff;
            hl.closure_from = std::max(max_scale(scales), d.support_min) * (d.tail->exact ? 1e7 : 1e10);
            hl.upper_closure = [b, coeff, q, gamma](double R) { return coeff * b * log_power_tail(q, gamma, R); };
        }
    }
    const auto f = [&d, &w](double r) {
        const double h = d.h(r);
        return h == 0.0 ? 0.0 : w(r) * h;
    };
    return quad::integrate_half_line(f, hl, opts);
}

double checked(const quad::Result& r, const char* what) {
    if (!r.converged) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (partial value " << r.value << ", error estimate "
           << r.error << ")";
        throw ConvergenceError(os.str(), r.value, r.error);
    }
    return r.value;
}

void require_integrable(const SpectralMeasure& m, const char* what) {
    const Density* d = m.density();
    if (d && d->tail && !tail_integrable(d->tail->exponent - 1.0, d->tail->log_exponent)) {
        throw DomainError(std::string(what) +
                          ": measure violates int nu(dr)/(1+r) < inf (tail descriptor), integral diverges");
    }
}

// Doubling sweep deciding whether the integral of g over [start, inf) (up) or
// (0, start] (down) is finite, given the partial sum `core` already taken.
bool sweep_finite(const std::function<double(double)>& g, double start, bool upward, double core,
                  const IntegrabilityOptions& opts) {
    double s = std::abs(core);
    double r = start;
    double growth = 1.0;
    double prev_growth = 0.0;
    int rising = 0;
    for (int k = 0; k < opts.max_doublings; ++k) {
        const double a = upward ? r : r / 2.0;
        const double b = upward ? r * 2.0 : r;
        if (a < 1e-300 || b > 1e300) {
            break;
        }
        const quad::Result piece = quad::integrate_log(g, a, b, opts.quad);
        if (!std::isfinite(piece.value)) {
            return false;
        }
        const double s_new = s + std::abs(piece.value);
        if (s_new > opts.blowup_bound) {
            return false;
        }
        growth = s > 0.0 ? s_new / s : (piece.value != 0.0 ? kInf : 1.0);
        if (k >= 3 && std::abs(piece.value) <= opts.quad.rel_tol * s_new) {
            return true;
        }
        // Ratio stabilised above the threshold for three doublings.
        if (growth > 1.0 + opts.growth_threshold && growth >= prev_growth * (1.0 - 1e-9)) {
            if (++rising >= 3) {
                return false;
            }
        } else {
            rising = 0;
        }
        prev_growth = growth;
        s = s_new;
        r = upward ? b : a;
    }
    return growth <= 1.0 + opts.growth_threshold;
}

}  // namespace

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms, std::optional<Density> density, GridHints hints)
    : atoms_(std::move(atoms)), density_(std::move(density)), hints_(hints) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.rate > 0.0) || !std::isfinite(a.rate)) {
            std::ostringstream os;
            os << "measure.positive_rates: atom " << i << " has rate " << a.rate << " (must be > 0)";
            throw InvalidParameter(os.str());
        }
        if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
            std::ostringstream os;
            os << "measure.positive_weights: atom " << i << " has weight " << a.weight << " (must be > 0)";
            throw InvalidParameter(os.str());
        }
    }
    if (density_) {
        if (!density_->h) {
            throw InvalidParameter("measure.density: density callable is empty");
        }
        if (!(density_->support_min >= 0.0)) {
            throw InvalidParameter("measure.density: support_min must be >= 0");
        }
    }
}

double SpectralMeasure::density_at(double r) const {
    if (!density_ || r <= density_->support_min) {
        return 0.0;
    }
    return density_->h(r);
}

std::vector<double> SpectralMeasure::scales() const {
    std::vector<double> s;
    for (const Atom& a : atoms_) {
        s.push_back(a.rate);
    }
    if (hints_.r_lo > 0.0) {
        s.push_back(hints_.r_lo);
    }
    if (hints_.r_hi > 0.0) {
        s.push_back(hints_.r_hi);
    }
    if (density_ && density_->support_min > 0.0) {
        s.push_back(density_->support_min);
    }
    return s;
}

Density tabulated_density(std::vector<double> r, std::vector<double> h) {
    if (r.size() != h.size() || r.size() < 2) {
        throw InvalidParameter("measure.density: tabulated density needs >= 2 matching (r, h) samples");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || (i > 0 && !(r[i] > r[i - 1]))) {
            throw InvalidParameter("measure.density: tabulated r must be positive and strictly increasing");
        }
        if (!(h[i] >= 0.0)) {
            std::ostringstream os;
            os << "measure.nonnegative_density: tabulated h[" << i << "] = " << h[i];
            throw InvalidParameter(os.str());
        }
    }
    Density d;
    d.kind = "tabulated";
    d.support_min = r.front();
    d.table_r = r;
    d.table_h = h;
    std::vector<double> lr(r.size());
    std::transform(r.begin(), r.end(), lr.begin(), [](double x) { return std::log(x); });
    d.h = [lr = std::move(lr), h = std::move(h)](double x) {
        const double u = std::log(x);
        if (u < lr.front() || u > lr.back()) {
            return 0.0;
        }
        const auto it = std::upper_bound(lr.begin(), lr.end(), u);
        if (it == lr.end()) {
            return h.back();
        }
        const std::size_t j = static_cast<std::size_t>(it - lr.begin());
        const double s = (u - lr[j - 1]) / (lr[j] - lr[j - 1]);
        return h[j - 1] + s * (h[j] - h[j - 1]);
    };
    return d;
}

IntegrabilityReport integrability_report(const SpectralMeasure& measure, const IntegrabilityOptions& opts) {
    IntegrabilityReport rep;
    double atom_mass = 0.0;
    for (const Atom& a : measure.atoms()) {
        atom_mass += a.weight;
    }
    rep.total_mass = atom_mass;
    const Density* d = measure.density();
    if (!d) {
        return rep;
    }

    const auto decide = [&](double k, const std::function<double(double)>& weight, bool& finite) {
        bool upper_known = false;
        if (d->tail) {
            finite = tail_integrable(d->tail->exponent + k, d->tail->log_exponent);
            upper_known = true;
        }
        const bool lower_known = d->support_min > 0.0;
        if (upper_known && lower_known) {
            return;
        }
        rep.analytic = false;
        const auto g = [d, &weight](double r) {
            const double h = d->h(r);
            return h == 0.0 ? 0.0 : h * weight(r);
        };
        const double pivot = std::max(d->support_min * 2.0, max_scale(measure.scales()));
        double core = 0.0;
        const double lo = d->support_min > 0.0 ? d->support_min : pivot * 1e-3;
        core = (d->edge_singular && d->support_min > 0.0) ? quad::integrate_log_edge(g, lo, pivot, opts.quad).value
                                                           : quad::integrate_log(g, lo, pivot, opts.quad).value;
        bool ok = true;
        if (!upper_known) {
            ok = sweep_finite(g, pivot, true, core, opts);
        } else {
            ok = finite;
        }
        if (ok && !lower_known) {
            ok = sweep_finite(g, lo, false, core, opts);
        }
        finite = ok;
    };

    decide(-1.0, [](double r) { return 1.0 / (1.0 + r); }, rep.finite_over_1plus_r);
    decide(-1.0, [](double r) { return 1.0 / r; }, rep.finite_over_r);
    bool mass_finite = true;
    decide(0.0, [](double) { return 1.0; }, mass_finite);
    if (!mass_finite) {
        rep.total_mass = kInf;
    } else {
        const quad::Result r =
            density_integral(*d, [](double) { return 1.0; }, WeightTail{1.0, 0.0}, measure.scales(), opts.quad);
        rep.total_mass = r.converged ? atom_mass + r.value : kInf;
    }
    return rep;
}

double attenuation_from_measure(const SpectralMeasure& measure, double omega, const quad::Options& opts) {
    if (!(omega >= 0.0)) {
        throw DomainError("attenuation_from_measure: omega must be >= 0");
    }
    require_integrable(measure, "attenuation_from_measure");
    if (omega == 0.0) {
        return 0.0;
    }
    const double w2 = omega * omega;
    double sum = 0.0;
    for (const Atom& a : measure.atoms()) {
        sum += a.weight * w2 / (w2 + a.rate * a.rate);
    }
    if (const Density* d = measure.density()) {
        auto scales = measure.scales();
        scales.push_back(omega);
        const auto w = [w2](double r) { return w2 / (w2 + r * r); };
        sum += checked(density_integral(*d, w, WeightTail{w2, -2.0}, scales, opts), "attenuation_from_measure");
    }
    return sum;
}

double dispersion_from_measure(const SpectralMeasure& measure, double omega, const quad::Options& opts) {
    if (!(omega >= 0.0)) {
        throw DomainError("dispersion_from_measure: omega must be >= 0");
    }
    require_integrable(measure, "dispersion_from_measure");
    if (omega == 0.0) {
        return 0.0;
    }
    const double w2 = omega * omega;
    double sum = 0.0;
    for (const Atom& a : measure.atoms()) {
        sum += a.weight * omega * a.rate / (w2 + a.rate * a.rate);
    }
    if (const Density* d = measure.density()) {
        auto scales = measure.scales();
        scales.push_back(omega);
        const auto w = [omega, w2](double r) { return omega * r / (w2 + r * r); };
        sum += checked(density_integral(*d, w, WeightTail{omega, -1.0}, scales, opts), "dispersion_from_measure");
    }
    return sum;
}

std::complex<double> beta_eval(const SpectralMeasure& measure, std::complex<double> p, const quad::Options& opts) {
    if (p.imag() == 0.0 && p.real() < 0.0) {
        throw DomainError(
            "beta_eval: p lies on the cut (negative real axis); use dispersion::kappa_boundary_value for the "
            "one-sided limit");
    }
    require_integrable(measure, "beta_eval");
    if (p == 0.0) {
        return 0.0;
    }
    std::complex<double> sum = 0.0;
    for (const Atom& a : measure.atoms()) {
        sum += a.weight * p / (a.rate + p);
    }
    if (const Density* d = measure.density()) {
        auto scales = measure.scales();
        scales.push_back(std::abs(p));
        const auto re = [p](double r) { return (p / (r + p)).real(); };
        const auto im = [p](double r) { return (p / (r + p)).imag(); };
        const double x = checked(density_integral(*d, re, WeightTail{p.real(), -1.0}, scales, opts), "beta_eval");
        const double y = checked(density_integral(*d, im, WeightTail{p.imag(), -1.0}, scales, opts), "beta_eval");
        sum += std::complex<double>(x, y);
    }
    return sum;
}

double bernstein_eval(const SpectralMeasure& measure, double t, const quad::Options& opts) {
    if (!(t > 0.0)) {
        throw DomainError("bernstein_eval: t must be > 0 (the value at t = 0 may be infinite)");
    }
    double sum = 0.0;
    for (const Atom& a : measure.atoms()) {
        sum += a.weight * std::exp(-a.rate * t);
    }
    if (const Density* d = measure.density()) {
        auto scales = measure.scales();
        scales.push_back(1.0 / t);
        const auto w = [t](double r) { return std::exp(-r * t); };
        sum += checked(density_integral(*d, w, std::nullopt, scales, opts), "bernstein_eval");
    }
    return sum;
}

double first_moment(const SpectralMeasure& measure, const quad::Options& opts) {
    double sum = 0.0;
    for (const Atom& a : measure.atoms()) {
        sum += a.weight * a.rate;
    }
    if (const Density* d = measure.density()) {
        if (d->tail && !tail_integrable(d->tail->exponent + 1.0, d->tail->log_exponent)) {
            return kInf;
        }
        const quad::Result r =
            density_integral(*d, [](double r) { return r; }, WeightTail{1.0, 1.0}, measure.scales(), opts);
        if (!r.converged) {
            return kInf;
        }
        sum += r.value;
    }
    return sum;
}

CmReport check_completely_monotone(std::span<const double> t, std::span<const double> f, int max_order,
                                   double rel_noise) {
    if (t.size() != f.size()) {
        throw DomainError("check_completely_monotone: grid and values differ in length");
    }
    CmReport rep;
    rep.max_order = max_order;
    const std::size_t n = t.size();
    std::vector<double> dd(f.begin(), f.end());
    std::vector<double> noise(n);
    double fmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fmax = std::max(fmax, std::abs(f[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        noise[i] = rel_noise * std::abs(f[i]) + std::numeric_limits<double>::min();
        if (f[i] < -rel_noise * fmax || !std::isfinite(f[i])) {
            rep.violations.push_back({0, i, f[i]});
        }
    }
    for (int order = 1; order <= max_order && static_cast<std::size_t>(order) < n; ++order) {
        const std::size_t m = n - static_cast<std::size_t>(order);
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double h = t[i + static_cast<std::size_t>(order)] - t[i];
            dd[i] = (dd[i + 1] - dd[i]) / h;
            noise[i] = (noise[i + 1] + noise[i]) / h;
            if (sign * dd[i] < -noise[i] || !std::isfinite(dd[i])) {
                rep.violations.push_back({order, i, dd[i]});
            }
        }
    }
    rep.pass = rep.violations.empty();
    return rep;
}

PickReport check_pick_property(const std::function<std::complex<double>(std::complex<double>)>& f, double scale,
                               int samples, std::uint64_t seed, double tol) {
    PickReport rep;
    rep.samples = samples;
    rep.worst_ratio = kInf;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < samples; ++k) {
        const double theta = std::numbers::pi * (1e-9 + (1.0 - 2e-9) * unit(rng));
        const double rho = scale * std::pow(10.0, -4.0 + 8.0 * unit(rng));
        const std::complex<double> p = std::polar(rho, theta);
        const std::complex<double> v = f(p);
        const double mag = std::abs(v);
        const double ratio = mag > 0.0 ? v.imag() / mag : 0.0;
        if (ratio < rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_point = p;
        }
        if (!std::isfinite(mag) || v.imag() < -tol * mag) {
            rep.pass = false;
        }
    }
    return rep;
}

}  // namespace viscowave
