#include "viscowave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "viscowave/error.hpp"

namespace viscowave::dispersion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lagrange extrapolation to eps = 0 through three samples.
std::complex<double> richardson3(const double (&eps)[3], const std::complex<double> (&f)[3]) {
    std::complex<double> sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) {
                w *= (0.0 - eps[j]) / (eps[i] - eps[j]);
            }
        }
        sum += w * f[i];
    }
    return sum;
}

std::string at_omega(const char* what, double omega) {
    std::ostringstream os;
    os << what << " at omega = " << omega << " rad/s";
    return os.str();
}

}  // namespace

std::complex<double> kappa(const Medium& medium, const RelaxationKernel& kernel, std::complex<double> p) {
    if (p == 0.0) {
        return 0.0;
    }
    const std::complex<double> s = kernel.symbol(p);
    return (p / medium.c0()) / std::sqrt(1.0 + s / medium.bigK());
}

std::complex<double> kappa_boundary_value(const Medium& medium, const RelaxationKernel& kernel, double r) {
    if (!(r > 0.0)) {
        throw DomainError("kappa_boundary_value: r must be > 0");
    }
    const auto* custom = std::get_if<CustomMeasureParams>(&kernel.params());
    if (custom == nullptr || custom->measure.density() == nullptr) {
        // Closed-form symbols: an imaginary part far below rounding selects the
        // upper branch without perturbing the value, even next to a branch point.
        return kappa(medium, kernel, {-r, 1e-100 * r});
    }
    const double eps[3] = {1e-3 * r, 1e-4 * r, 1e-5 * r};
    std::complex<double> f[3];
    for (int i = 0; i < 3; ++i) {
        f[i] = kappa(medium, kernel, {-r, eps[i]});
    }
    return richardson3(eps, f);
}

double wavefront_speed(const Medium& medium, const RelaxationKernel& kernel) {
    const double k0 = kernel.K0();
    if (!std::isfinite(k0)) {
        return kInf;
    }
    return medium.c0() * std::sqrt(1.0 + k0 / medium.bigK());
}

double wavefront_speed_numeric(const Medium& medium, const RelaxationKernel& kernel) {
    const double p = 1e8 / characteristic_time(medium, kernel);
    return p / kappa(medium, kernel, p).real();
}

double static_speed(const Medium& medium, const RelaxationKernel& kernel) {
    return medium.c0() * std::sqrt(1.0 + kernel.Kinf() / medium.bigK());
}

double slowness(const Medium& medium, const RelaxationKernel& kernel) {
    const double c0 = wavefront_speed(medium, kernel);
    return std::isfinite(c0) ? 1.0 / c0 : 0.0;
}

double characteristic_time(const Medium& medium, const RelaxationKernel& kernel) {
    if (const auto* n = std::get_if<NewtonianParams>(&kernel.params())) {
        return n->N / medium.bigK();
    }
    return kernel.characteristic_time();
}

CurvePoint evaluate(const Medium& medium, const RelaxationKernel& kernel, double omega) {
    if (!(omega > 0.0)) {
        throw DomainError("dispersion: omega must be > 0");
    }
    const std::complex<double> k = kappa(medium, kernel, {0.0, -omega});
    const double B = slowness(medium, kernel);
    CurvePoint pt{};
    pt.A = k.real();
    pt.D = -k.imag() - omega * B;
    pt.c = omega / (-k.imag());
    pt.Q = pt.A > 0.0 ? omega / (2.0 * pt.c * pt.A) : kInf;
    return pt;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> g(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

DispersionCurve curve(const Medium& medium, const RelaxationKernel& kernel, std::span<const double> omega_grid,
                      double rel_tol) {
    DispersionCurve out;
    out.C0 = wavefront_speed(medium, kernel);
    out.Cinf = static_speed(medium, kernel);
    out.B = slowness(medium, kernel);
    const std::size_t n = omega_grid.size();
    out.omega.assign(omega_grid.begin(), omega_grid.end());
    out.A.resize(n);
    out.D.resize(n);
    out.c.resize(n);
    out.Q.resize(n);
    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = omega_grid[i];
        if (!(w > 0.0) || (i > 0 && !(w > omega_grid[i - 1]))) {
            throw DomainError(at_omega("curve: grid must be positive and strictly increasing", w));
        }
        const CurvePoint pt = evaluate(medium, kernel, w);
        out.A[i] = pt.A;
        out.D[i] = pt.D;
        out.c[i] = pt.c;
        out.Q[i] = pt.Q;
        // Absolute rounding floor of Re/Im kappa.
        floor[i] = 8.0 * kEps * std::abs(kappa(medium, kernel, {0.0, -w}));
    }

    const auto fail = [](const char* invariant, double w, double detail) {
        std::ostringstream os;
        os << "failed at omega = " << w << " rad/s (value " << detail << ")";
        throw InvariantViolation(invariant, os.str());
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double w = out.omega[i];
        if (!std::isfinite(out.A[i]) || out.A[i] < -floor[i]) {
            fail("curve.attenuation_nonnegative", w, out.A[i]);
        }
        if (!std::isfinite(out.D[i]) || out.D[i] < -floor[i] - rel_tol * w * out.B) {
            fail("curve.dispersion_nonnegative", w, out.D[i]);
        }
        const double c_tol = rel_tol * out.c[i] + out.c[i] * out.c[i] * floor[i] / w;
        if (out.c[i] < out.Cinf - c_tol || out.c[i] > out.C0 + c_tol) {
            fail("curve.phase_speed_bounds", w, out.c[i]);
        }
        if (i == 0) {
            continue;
        }
        if (out.A[i] < out.A[i - 1] - rel_tol * std::abs(out.A[i - 1]) - floor[i] - floor[i - 1]) {
            fail("curve.attenuation_nondecreasing", w, out.A[i]);
        }
        const double r_now = out.D[i] / w;
        const double r_prev = out.D[i - 1] / out.omega[i - 1];
        if (r_now > r_prev + rel_tol * std::abs(r_prev) + floor[i] / w + floor[i - 1] / out.omega[i - 1]) {
            fail("curve.dispersion_ratio_nonincreasing", w, r_now);
        }
        if (out.c[i] < out.c[i - 1] * (1.0 - rel_tol) - c_tol) {
            fail("curve.phase_speed_nondecreasing", w, out.c[i]);
        }
    }
    return out;
}

double low_frequency_dispersion_limit(const Medium& medium, const RelaxationKernel& kernel) {
    const double tau = characteristic_time(medium, kernel);
    const double B = slowness(medium, kernel);
    double prev = kInf;
    double value = 0.0;
    for (int k = 4; k <= 300; k += 4) {
        const double w = std::pow(10.0, -k) / tau;
        if (w < 1e-300) {
            break;
        }
        const std::complex<double> kap = kappa(medium, kernel, {0.0, -w});
        value = -kap.imag() / w - B;
        if (std::abs(value - prev) <= 1e-13 * std::abs(value)) {
            break;
        }
        prev = value;
    }
    return value;
}

ColeColeClosedForm cole_cole_closed_form(const Medium& medium, const ColeColeParams& params, double omega) {
    if (!(omega >= 0.0)) {
        throw DomainError("cole_cole_closed_form: omega must be >= 0");
    }
    const RelaxationKernel kernel = cole_cole_kernel(params.M, params.a, params.tau, params.alpha);
    if (omega == 0.0) {
        return {1.0, 0.0, 0.0};
    }
    const double m1 = params.M / medium.bigK();
    const double wa = std::pow(omega * params.tau, params.alpha);
    const double cs = std::cos(std::numbers::pi * params.alpha / 2.0);
    const double sn = std::sin(std::numbers::pi * params.alpha / 2.0);
    const double den = 1.0 + wa * wa + 2.0 * wa * cs;
    ColeColeClosedForm out{};
    out.X = 1.0 + m1 * (1.0 - params.a) * wa * (wa + cs) / den;
    out.Y = -m1 * (1.0 - params.a) * wa * sn / den;
    const double R = std::hypot(out.X, out.Y);
    // R - X evaluated as Y^2 / (R + X): no cancellation when |Y| << X.
    const double r_minus_x = out.X > 0.0 ? out.Y * out.Y / (R + out.X) : R - out.X;
    out.A = omega * std::sqrt(r_minus_x) / (std::numbers::sqrt2 * medium.c0() * R);

    const double direct = kappa(medium, kernel, {0.0, -omega}).real();
    if (std::abs(out.A - direct) > 1e-10 * std::abs(direct) + std::numeric_limits<double>::min()) {
        std::ostringstream os;
        os << "closed form A = " << out.A << " vs Re kappa(-i w) = " << direct << " at omega = " << omega;
        throw InvariantViolation("cole_cole.closed_form_agreement", os.str());
    }
    return out;
}

SpectralMeasure extract_measure(const Medium& medium, const RelaxationKernel& kernel, std::span<const double> r_grid) {
    if (r_grid.size() < 2) {
        throw DomainError("extract_measure: r_grid needs at least two nodes");
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
            throw DomainError("extract_measure: r_grid must be positive and strictly increasing");
        }
    }
    const double B = slowness(medium, kernel);
    constexpr double kNoise = 1e-8;

    struct Sample {
        double value;
        double scale;
    };
    // Richardson on kappa - B p; the B p term only contributes B eps, removed exactly by the extrapolation.
    const auto sample = [medium, kernel, B](double r) {
        const std::complex<double> kb = kappa_boundary_value(medium, kernel, r);
        const double scale = std::abs(kappa(medium, kernel, {-r, 1e-3 * r})) / (std::numbers::pi * r);
        return Sample{kb.imag() / (std::numbers::pi * r), scale};
    };

    std::vector<double> h(r_grid.size());
    std::size_t first_positive = r_grid.size();
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const Sample s = sample(r_grid[i]);
        if (!std::isfinite(s.value) || s.value < -kNoise * s.scale) {
            std::ostringstream os;
            os << "density " << s.value << " at r = " << r_grid[i] << " (noise floor " << kNoise * s.scale << ")";
            throw InvariantViolation("extract_measure.nonnegative_density", os.str());
        }
        h[i] = s.value > kNoise * s.scale ? s.value : 0.0;
        if (h[i] > 0.0 && first_positive == r_grid.size()) {
            first_positive = i;
        }
    }
    (void)B;
    if (first_positive == r_grid.size()) {
        return SpectralMeasure();
    }

    Density d;
    d.kind = "extracted";
    d.table_r.assign(r_grid.begin(), r_grid.end());
    d.table_h = h;
    if (first_positive > 0) {
        // Support starts between two grid nodes: bisect for the branch point.
        double lo = r_grid[first_positive - 1];
        double hi = r_grid[first_positive];
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Sample s = sample(mid);
            (s.value > kNoise * s.scale ? hi : lo) = mid;
        }
        d.support_min = lo;
        d.edge_singular = true;
    }
    // Gaps in the support (between a zero and a pole of 1 + p K/bigK) end in
    // square-root singularities; locate each edge for the quadrature.
    for (std::size_t i = first_positive + 1; i < r_grid.size(); ++i) {
        if ((h[i - 1] > 0.0) == (h[i] > 0.0)) {
            continue;
        }
        const bool rising = h[i] > 0.0;
        double lo = r_grid[i - 1];
        double hi = r_grid[i];
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Sample s = sample(mid);
            ((s.value > kNoise * s.scale) == rising ? hi : lo) = mid;
        }
        d.edges.push_back(0.5 * (lo + hi));
    }
    // Beyond the table the density is continued on demand; far out the
    // quadrature closes with the power law through the last two table nodes.
    const std::size_t n = h.size();
    if (h[n - 1] > 0.0 && h[n - 2] > 0.0) {
        const double q = std::log(h[n - 1] / h[n - 2]) / std::log(r_grid[n - 1] / r_grid[n - 2]);
        d.tail = TailDescriptor{h[n - 1] / std::pow(r_grid[n - 1], q), q, 0.0, false};
    }
    // No noise-floor cut here: a jump at the threshold would stall adaptive quadrature.
    d.h = [sample, lo = d.support_min](double r) {
        return r > lo ? std::max(sample(r).value, 0.0) : 0.0;
    };
    return SpectralMeasure({}, std::move(d), GridHints{r_grid.front(), r_grid.back()});
}

double prony_saturation(const Medium& medium, const RelaxationKernel& kernel) {
    const double k0 = kernel.K0();
    const double k0p = kernel.K0prime();
    if (!std::isfinite(k0) || !std::isfinite(k0p)) {
        throw DomainError("prony_saturation: requires finite K0 and K0' (bounded attenuation spectrum)");
    }
    const double c0 = medium.c0();
    return -k0p * std::pow(1.0 + k0 / medium.bigK(), -1.5) / (2.0 * medium.rho0() * c0 * c0 * c0);
}

}  // namespace viscowave::dispersion
