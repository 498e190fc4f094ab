#include "viscowave/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave::asymptotics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves the n x n system a x = b (n <= 3) by Gaussian elimination with partial pivoting.
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (a[piv][col] == 0.0) {
            throw DomainError("fit_powerlaw: degenerate design matrix");
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// High-frequency window used for families and custom kernels.
Window default_window(const Medium& medium, const RelaxationKernel& kernel) {
    double tau = dispersion::characteristic_time(medium, kernel);
    if (kernel.family() == KernelFamily::custom_measure) {
        const auto& m = std::get<CustomMeasureParams>(kernel.params()).measure;
        const auto scales = m.scales();
        const double top = scales.empty() ? 1.0 : *std::max_element(scales.begin(), scales.end());
        const double lo = std::max(1e6, 1e3 * top);
        return {lo, lo * 1e6};
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        tau = 1.0;
    }
    return {1e3 / tau, 1e6 / tau};
}

}  // namespace

AsymptoteFit fit_powerlaw(std::span<const double> omega, std::span<const double> values, Window window,
                          bool fit_log) {
    if (omega.size() != values.size()) {
        throw DomainError("fit_powerlaw: omega and values differ in length");
    }
    if (!(window.lo > 0.0) || !(window.hi >= 100.0 * window.lo * (1.0 - 1e-12))) {
        throw DomainError("fit_powerlaw: window must span at least two decades");
    }
    if (fit_log && !(window.lo > std::numbers::e)) {
        throw DomainError("fit_powerlaw: a log-exponent fit needs window.lo > e");
    }
    std::vector<double> X, L, Y;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        if (w < window.lo * (1.0 - 1e-12) || w > window.hi * (1.0 + 1e-12)) {
            continue;
        }
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw DomainError("fit_powerlaw: non-positive sample " + fmt(values[i]) + " at omega = " + fmt(w));
        }
        X.push_back(std::log(w));
        L.push_back(fit_log ? -std::log(std::log(w)) : 0.0);
        Y.push_back(std::log(values[i]));
    }
    const std::size_t n = X.size();
    if (n < 20) {
        throw DomainError("fit_powerlaw: need at least 20 samples inside the window, got " + std::to_string(n));
    }
    // Center the regressors for conditioning.
    double mx = 0.0, ml = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += X[i];
        ml += L[i];
        my += Y[i];
    }
    mx /= n;
    ml /= n;
    my /= n;
    double s = 0.0, g = 0.0;
    if (fit_log) {
        std::array<std::array<double, 2>, 2> a{};
        std::array<double, 2> b{};
        for (std::size_t i = 0; i < n; ++i) {
            const double x = X[i] - mx, l = L[i] - ml, y = Y[i] - my;
            a[0][0] += x * x;
            a[0][1] += x * l;
            a[1][1] += l * l;
            b[0] += x * y;
            b[1] += l * y;
        }
        a[1][0] = a[0][1];
        const auto sol = solve<2>(a, b);
        s = sol[0];
        g = sol[1];
    } else {
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (X[i] - mx) * (X[i] - mx);
            sxy += (X[i] - mx) * (Y[i] - my);
        }
        s = sxy / sxx;
    }
    const double intercept = my - s * mx - g * ml;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = Y[i] - (s * X[i] + g * L[i] + intercept);
        ss += r * r;
    }
    AsymptoteFit fit;
    fit.window = window;
    fit.exponent = s;
    fit.log_exponent = g;
    fit.prefactor = std::exp(intercept);
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    fit.samples = static_cast<int>(n);
    return fit;
}

AsymptoteFit fit_log_growth(std::span<const double> omega, std::span<const double> values, Window window) {
    if (omega.size() != values.size()) {
        throw DomainError("fit_log_growth: omega and values differ in length");
    }
    if (!(window.lo > std::numbers::e)) {
        throw DomainError("fit_log_growth: window.lo must exceed e");
    }
    // ln(dA/d ln w) = (eta - 1) ln ln w + ln(eta b), with the slope from central differences.
    std::vector<double> X, Y;
    for (std::size_t i = 1; i + 1 < omega.size(); ++i) {
        if (omega[i] < window.lo * (1.0 - 1e-12) || omega[i] > window.hi * (1.0 + 1e-12)) {
            continue;
        }
        const double d = (values[i + 1] - values[i - 1]) / std::log(omega[i + 1] / omega[i - 1]);
        if (!(d > 0.0)) {
            throw DomainError("fit_log_growth: attenuation is not increasing at omega = " + fmt(omega[i]));
        }
        X.push_back(std::log(std::log(omega[i])));
        Y.push_back(std::log(d));
    }
    const std::size_t n = X.size();
    if (n < 20) {
        throw DomainError("fit_log_growth: need at least 20 samples inside the window");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
    }
    const double k = sxy / sxx;
    const double c = my - k * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = Y[i] - (k * X[i] + c);
        ss += r * r;
    }
    const double eta = k + 1.0;
    AsymptoteFit fit;
    fit.window = window;
    fit.exponent = 0.0;
    fit.log_exponent = -eta;
    fit.prefactor = std::exp(c) / eta;
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    fit.samples = static_cast<int>(n);
    return fit;
}

AsymptoteFit fit_attenuation(const Medium& medium, const RelaxationKernel& kernel, Window window, std::size_t n,
                             bool fit_log) {
    const auto grid = dispersion::log_grid(window.lo, window.hi, n);
    std::vector<double> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = dispersion::evaluate(medium, kernel, grid[i]).A;
    }
    return fit_powerlaw(grid, a, window, fit_log);
}

AsymptoteFit fit_spectrum(const SpectralMeasure& nu, Window window, std::size_t n, bool fit_log) {
    const auto grid = dispersion::log_grid(window.lo, window.hi, n);
    std::vector<double> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = attenuation_from_measure(nu, grid[i]);
    }
    return fit_powerlaw(grid, a, window, fit_log);
}

double asymptote_value(const AsymptoteFit& fit, double omega) {
    double v = fit.prefactor * std::pow(omega, fit.exponent);
    if (fit.log_exponent != 0.0) {
        v /= std::pow(std::log(omega), fit.log_exponent);
    }
    return v;
}

ValironReport verify_valiron(const std::function<double(double)>& f, double beta,
                             const std::function<double(double)>& l, std::vector<double> breakpoints,
                             std::vector<double> xs, double tolerance) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw DomainError("verify_valiron: need 0 <= beta < 1");
    }
    if (xs.empty()) {
        throw DomainError("verify_valiron: no evaluation points");
    }
    ValironReport rep;
    rep.beta = beta;
    rep.limit = beta == 0.0 ? 1.0 : std::numbers::pi * beta / std::sin(std::numbers::pi * beta);
    const quad::Options opts{1e-14, 1e-11, 30, 620};
    for (double x : xs) {
        if (!(x > 0.0)) {
            throw DomainError("verify_valiron: evaluation points must be positive");
        }
        quad::HalfLine line;
        line.lo = 0.0;
        line.scales = breakpoints;
        line.scales.push_back(x);
        // Past max(breakpoints, x) the integrand behaves like f(y)/y^2 and the
        // distribution grows at most like y^beta, so the decade sweep terminates.
        const auto res = quad::integrate_half_line([&](double y) { return f(y) / ((x + y) * (x + y)); }, line, opts);
        if (!res.converged) {
            throw ConvergenceError("verify_valiron: quadrature did not converge at x = " + fmt(x), res.value,
                                   res.error);
        }
        rep.x.push_back(x);
        rep.g.push_back(res.value);
        rep.ratio.push_back(res.value * std::pow(x, 1.0 - beta) / l(x));
    }
    rep.rel_error = std::abs(rep.ratio.back() - rep.limit) / rep.limit;
    rep.pass = rep.rel_error <= tolerance;
    return rep;
}

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::finite:
            return "finite";
        case Decision::divergent:
            return "divergent";
        case Decision::indeterminate:
            return "indeterminate";
    }
    return "indeterminate";
}

PaleyWienerResult paley_wiener_test(const AsymptoteDescriptor& asymptote) {
    PaleyWienerResult r;
    r.analytic = true;
    const double s = asymptote.exponent;
    const double g = asymptote.log_exponent;
    const std::string desc = "A ~ w^" + fmt(s) + " / ln(w)^" + fmt(g);
    if (s < 1.0) {
        r.decision = Decision::finite;
        r.certificate = desc + ": exponent below 1, convergent by comparison with w^(s-2)";
    } else if (s == 1.0 && g > 1.0) {
        r.decision = Decision::finite;
        r.certificate = desc + ": integrand ~ 1/(w ln(w)^g) with g > 1";
    } else {
        r.decision = Decision::divergent;
        r.certificate = desc + (s == 1.0 ? ": integrand ~ 1/(w ln(w)^g) with g <= 1" : ": exponent above 1");
        r.integral = kInf;
    }
    return r;
}

PaleyWienerResult paley_wiener_test(const SpectralMeasure& nu) {
    const Density* d = nu.density();
    if (!d) {
        PaleyWienerResult r;
        r.analytic = true;
        r.decision = Decision::finite;
        r.certificate = "atomic spectrum: bounded attenuation";
        return r;
    }
    if (!d->tail) {
        throw DomainError("paley_wiener_test: the density has no asymptotic descriptor; use the numeric mode");
    }
    // A(w) ~ const * w^(1+q) / ln^g w for -2 < q <= -1 ... 0; a faster decaying density gives bounded A.
    const double q = d->tail->exponent;
    if (q < -1.0) {
        PaleyWienerResult r;
        r.analytic = true;
        r.decision = Decision::finite;
        r.certificate = "density exponent " + fmt(q) + " < -1: finite total mass, bounded attenuation";
        return r;
    }
    return paley_wiener_test(AsymptoteDescriptor{1.0 + q, d->tail->log_exponent});
}

PaleyWienerResult paley_wiener_test(const std::function<double(double)>& attenuation, const PaleyWienerOptions& opts) {
    PaleyWienerResult r;
    r.analytic = false;
    const quad::Options qo{1e-14, 1e-10, 24, 620};
    const auto integrand = [&](double w) { return attenuation(w) / (1.0 + w * w); };
    auto head = quad::integrate_log(integrand, 1e-12 * opts.w0, opts.w0, qo);
    double total = head.value;
    std::vector<double> inc;
    double w = opts.w0;
    for (int k = 0; k < opts.max_doublings; ++k) {
        const auto piece = quad::integrate_log(integrand, w, 2.0 * w, qo);
        w *= 2.0;
        total += piece.value;
        inc.push_back(piece.value);
        if (!std::isfinite(total) || total > opts.blowup_bound) {
            r.decision = Decision::divergent;
            r.integral = kInf;
            r.certificate = "partial integral exceeded " + fmt(opts.blowup_bound) + " at cutoff " + fmt(w);
            return r;
        }
        const std::size_t m = inc.size();
        if (m >= 4) {
            const double q1 = inc[m - 1] / inc[m - 2];
            const double q2 = inc[m - 2] / inc[m - 3];
            const double q3 = inc[m - 3] / inc[m - 4];
            const double qmax = std::max({q1, q2, q3});
            // Geometric decay of the doubling increments bounds the remainder.
            if (qmax < 0.95 && inc[m - 1] * qmax / (1.0 - qmax) <= opts.rel_tol * std::abs(total)) {
                r.decision = Decision::finite;
                r.integral = total;
                r.certificate = "doubling increments decay geometrically (ratio <= " + fmt(qmax) + ")";
                return r;
            }
        }
        if (m >= 12) {
            bool growing = true;
            for (std::size_t j = m - 10; j < m; ++j) {
                growing = growing && inc[j] >= inc[j - 1] && inc[j] > 0.0;
            }
            if (growing) {
                r.decision = Decision::divergent;
                r.integral = total;
                r.certificate = "doubling increments nondecreasing over 10 doublings up to cutoff " + fmt(w);
                return r;
            }
        }
    }
    r.decision = Decision::indeterminate;
    r.integral = total;
    r.certificate = "not resolved within " + std::to_string(opts.max_doublings) + " doublings";
    return r;
}

std::string_view to_string(WavefrontClass c) {
    switch (c) {
        case WavefrontClass::NoWavefront:
            return "NoWavefront";
        case WavefrontClass::SmoothWavefront:
            return "SmoothWavefront";
        case WavefrontClass::DiscontinuityAdmitting:
            return "DiscontinuityAdmitting";
        case WavefrontClass::StepwiseRegularizing:
            return "StepwiseRegularizing";
        case WavefrontClass::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

WavefrontReport classify_asymptote(double C0, const Medium& medium, const AsymptoteFit& fit,
                                   bool bounded_attenuation, const ClassifyOptions& opts) {
    (void)medium;
    WavefrontReport rep;
    rep.C0 = C0;
    rep.asymptote = fit;
    rep.basis = "fit";
    if (!std::isfinite(C0)) {
        rep.cls = WavefrontClass::NoWavefront;
        rep.paley_wiener_finite = paley_wiener_test(AsymptoteDescriptor{fit.exponent, fit.log_exponent}).finite();
        rep.note = "unbounded wavefront speed";
        return rep;
    }
    if (bounded_attenuation) {
        rep.cls = WavefrontClass::DiscontinuityAdmitting;
        rep.paley_wiener_finite = true;
        rep.note = "finite attenuation spectrum mass: bounded attenuation";
        return rep;
    }
    if (fit.residual > opts.residual_threshold) {
        rep.cls = WavefrontClass::Indeterminate;
        rep.note = "asymptote residual " + fmt(fit.residual) + " above threshold " + fmt(opts.residual_threshold);
        return rep;
    }
    const double s = fit.exponent;
    const double et = opts.exponent_tolerance;
    if (s >= 1.0 + et) {
        rep.cls = WavefrontClass::Indeterminate;
        rep.note = "superlinear attenuation exponent " + fmt(s) + " is inconsistent with a finite wavefront speed";
        return rep;
    }
    if (s > et && s < 1.0 - et) {
        rep.cls = WavefrontClass::SmoothWavefront;
        rep.paley_wiener_finite = true;
        rep.note = "power-law attenuation";
        return rep;
    }
    if (std::abs(s) <= et) {
        // Logarithmic growth A ~ b ln(w)^eta with eta = -g.
        const double eta = -fit.log_exponent;
        const double lt = opts.log_tolerance;
        rep.paley_wiener_finite = true;
        if (eta > 1.0 + lt) {
            rep.cls = WavefrontClass::SmoothWavefront;
            rep.note = "log-power attenuation, eta = " + fmt(eta);
        } else if (std::abs(eta - 1.0) <= lt) {
            rep.cls = WavefrontClass::StepwiseRegularizing;
            // Coefficient of A ~ b ln(w), read off at the geometric centre of the window.
            rep.note = "pure logarithmic attenuation";
            const double b = fit.exponent == 0.0 ? fit.prefactor
                                                 : asymptote_value(fit, std::sqrt(fit.window.lo * fit.window.hi)) /
                                                       std::log(std::sqrt(fit.window.lo * fit.window.hi));
            for (int N = 0; N < opts.schedule_orders; ++N) {
                rep.stepwise_schedule.push_back({N, (N + 1) / (b * C0)});
            }
        } else if (eta < 1.0 - lt && eta > -lt) {
            rep.cls = WavefrontClass::DiscontinuityAdmitting;
            rep.note = "sub-logarithmic attenuation growth, eta = " + fmt(eta);
        } else {
            rep.cls = WavefrontClass::Indeterminate;
            rep.paley_wiener_finite = false;
            rep.note = "log-exponent " + fmt(eta) + " too close to a class boundary";
        }
        return rep;
    }
    rep.cls = WavefrontClass::Indeterminate;
    rep.note = "exponent " + fmt(s) + " too close to a class boundary";
    return rep;
}

WavefrontReport classify_wavefront(const Medium& medium, const RelaxationKernel& kernel,
                                   const std::optional<AsymptoteFit>& fit, const ClassifyOptions& opts) {
    const double C0 = dispersion::wavefront_speed(medium, kernel);
    const KernelFamily fam = kernel.family();
    if (fam == KernelFamily::custom_measure || fit) {
        // Finite K0 and K'(0) make the attenuation bounded.
        const bool bounded = fam == KernelFamily::prony ||
                             (fam == KernelFamily::custom_measure && std::isfinite(C0) &&
                              std::isfinite(kernel.K0prime()));
        AsymptoteFit f;
        if (fit) {
            f = *fit;
        } else {
            const Window w = default_window(medium, kernel);
            const auto grid = dispersion::log_grid(w.lo, w.hi, 200);
            std::vector<double> a(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                a[i] = dispersion::evaluate(medium, kernel, grid[i]).A;
            }
            f = fit_powerlaw(grid, a, w);
            if (!bounded && std::isfinite(C0) && std::abs(f.exponent) <= opts.exponent_tolerance) {
                f = fit_log_growth(grid, a, w);
            }
        }
        return classify_asymptote(C0, medium, f, bounded, opts);
    }

    WavefrontReport rep;
    rep.C0 = C0;
    rep.basis = "family";
    const Window w = default_window(medium, kernel);
    try {
        rep.asymptote = fit_attenuation(medium, kernel, w);
    } catch (const Error&) {
        rep.asymptote.reset();  // the zero kernel has A == 0
    }
    AsymptoteDescriptor d;
    switch (fam) {
        case KernelFamily::prony:
            d = {0.0, 0.0};
            rep.cls = WavefrontClass::DiscontinuityAdmitting;
            rep.note = kernel.K0() == 0.0 ? "zero kernel: elastic jump at the wavefront"
                                          : "finite Prony sum: bounded attenuation";
            break;
        case KernelFamily::cole_cole: {
            const auto& p = std::get<ColeColeParams>(kernel.params());
            if (p.a == 1.0) {
                d = {0.0, 0.0};
                rep.cls = WavefrontClass::DiscontinuityAdmitting;
                rep.note = "a = 1 removes the relaxation: elastic jump at the wavefront";
                break;
            }
            d = {1.0 - p.alpha, 0.0};
            rep.cls = WavefrontClass::SmoothWavefront;
            rep.note = "high-frequency attenuation ~ w^(1-alpha)";
            break;
        }
        case KernelFamily::constant_q: {
            const auto& p = std::get<ConstantQParams>(kernel.params());
            d = {1.0 - p.alpha / 2.0, 0.0};
            rep.cls = WavefrontClass::NoWavefront;
            rep.note = "unbounded wavefront speed";
            break;
        }
        case KernelFamily::newtonian:
            d = {0.5, 0.0};
            rep.cls = WavefrontClass::NoWavefront;
            rep.note = "unbounded wavefront speed";
            break;
        case KernelFamily::custom_measure:
            break;
    }
    rep.paley_wiener_finite = paley_wiener_test(d).finite();
    if ((rep.cls == WavefrontClass::NoWavefront) != !std::isfinite(C0)) {
        throw InvariantViolation("classify.no_wavefront_iff_infinite_speed",
                                 "class " + std::string(to_string(rep.cls)) + " with C0 = " + fmt(C0));
    }
    return rep;
}

}  // namespace viscowave::asymptotics
