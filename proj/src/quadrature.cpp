#include "viscowave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <vector>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace viscowave::quad {

namespace {

// Convergence is judged against the L1 norm, as the Kronrod error estimate
// |K21 - G10| is itself pessimistic by a wide margin on smooth panels.
bool accepted(double error, double l1, const Options& opts) {
    return std::isfinite(error) && error <= std::max(opts.abs_tol, 10.0 * opts.rel_tol * l1);
}

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
    unsigned depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

// One G10/K21 application on [a, b], nodes taken from Boost's tables.
Panel apply_rule(const Integrand& f, double a, double b, unsigned depth) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double kronrod = f0 * wk[0];
    double gauss = 0.0;
    double l1 = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(mid + half * x[i]);
        const double fm = f(mid - half * x[i]);
        kronrod += (fp + fm) * wk[i];
        l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 1) {
            gauss += (fp + fm) * wg[i / 2];
        }
    }
    const double scale = std::abs(half);
    Panel p{a, b, kronrod * half, std::abs(kronrod - gauss) * scale, l1 * scale, depth};
    p.error = std::max(p.error, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value));
    return p;
}

// Panels the global driver may hold before giving up on a single interval.
constexpr std::size_t kMaxPanels = 4096;

}  // namespace

Options default_options() {
    Options opts;
    if (const char* env = std::getenv("VISCOWAVE_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end != env && std::isfinite(tol) && tol > 0.0) {
            opts.rel_tol = tol;
        }
    }
    return opts;
}

// Globally adaptive: the panel with the largest error estimate is bisected
// until the summed estimate meets the tolerance, every remaining panel has
// reached max_depth, or the panel budget is spent.
Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    if (a == b) {
        return {};
    }
    if (std::abs(b - a) <= 1e-13 * std::max(std::abs(a), std::abs(b))) {
        // Rounding-level interval: midpoint rule is exact to working precision.
        Result r;
        r.value = f(0.5 * (a + b)) * (b - a);
        r.converged = std::isfinite(r.value);
        return r;
    }
    std::priority_queue<Panel> open;
    std::vector<Panel> closed;
    open.push(apply_rule(f, a, b, 0));
    double value = open.top().value;
    double error = open.top().error;
    double l1 = open.top().l1;
    while (!open.empty() && std::isfinite(value) && !accepted(error, l1, opts) &&
           open.size() + closed.size() < kMaxPanels) {
        const Panel worst = open.top();
        open.pop();
        if (worst.depth >= opts.max_depth) {
            closed.push_back(worst);
            continue;
        }
        const double m = 0.5 * (worst.a + worst.b);
        const Panel left = apply_rule(f, worst.a, m, worst.depth + 1);
        const Panel right = apply_rule(f, m, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        open.push(left);
        open.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    l1 = 0.0;
    for (const Panel& p : closed) {
        value += p.value;
        error += p.error;
        l1 += p.l1;
    }
    for (; !open.empty(); open.pop()) {
        value += open.top().value;
        error += open.top().error;
        l1 += open.top().l1;
    }
    Result r;
    r.value = value;
    r.error = error;
    r.converged = std::isfinite(value) && accepted(error, l1, opts);
    return r;
}

Result integrate_log(const Integrand& f, double lo, double hi, const Options& opts) {
    const auto g = [&f](double u) {
        const double r = std::exp(u);
        return f(r) * r;
    };
    return integrate(g, std::log(lo), std::log(hi), opts);
}

Result integrate_log_edge(const Integrand& f, double lo, double hi, const Options& opts) {
    const double u0 = std::log(lo);
    const auto g = [&f, u0](double v) {
        const double r = std::exp(u0 + v * v);
        return f(r) * r * 2.0 * v;
    };
    return integrate(g, 0.0, std::sqrt(std::log(hi) - u0), opts);
}

namespace {

// Mirror of integrate_log_edge with the singularity at the upper end.
Result integrate_log_upper_edge(const Integrand& f, double lo, double hi, const Options& opts) {
    const double u1 = std::log(hi);
    const auto g = [&f, u1](double v) {
        const double r = std::exp(u1 - v * v);
        return f(r) * r * 2.0 * v;
    };
    return integrate(g, 0.0, std::sqrt(u1 - std::log(lo)), opts);
}

}  // namespace

Result integrate_half_line(const Integrand& f, const HalfLine& line, const Options& opts) {
    std::vector<double> scales;
    for (double s : line.scales) {
        if (s > 0.0 && std::isfinite(s) && s > line.lo) {
            scales.push_back(s);
        }
    }
    std::vector<double> singular;
    for (double s : line.singular_points) {
        if (s > line.lo && std::isfinite(s)) {
            singular.push_back(s);
            scales.push_back(s);
        }
    }
    std::sort(singular.begin(), singular.end());
    std::sort(scales.begin(), scales.end());
    // Breakpoints closer than a relative 1e-9 would create panels that GK
    // cannot resolve beyond rounding; keep one of each cluster.
    scales.erase(std::unique(scales.begin(), scales.end(),
                             [](double a, double b) { return b <= a * (1.0 + 1e-9); }),
                 scales.end());

    double core_lo = line.lo;
    if (core_lo <= 0.0) {
        core_lo = scales.empty() ? 1e-3 : scales.front() * 1e-3;
    }
    const double top_scale = scales.empty() ? core_lo : std::max(scales.back(), core_lo);
    const double core_hi = top_scale * 1e3;

    std::vector<double> nodes{core_lo};
    for (double s : scales) {
        if (s > core_lo * (1.0 + 1e-9) && s < core_hi) {
            nodes.push_back(s);
        }
    }
    nodes.push_back(core_hi);

    // Panels are judged against the whole integral rather than their own size:
    // a tiny panel with a poor relative error estimate is harmless.
    Result total;
    double soft_error = 0.0;
    const auto add = [&total, &soft_error](const Result& panel) {
        total.value += panel.value;
        total.error += panel.error;
        if (!panel.converged) {
            if (std::isfinite(panel.value) && std::isfinite(panel.error)) {
                soft_error += panel.error;
            } else {
                total.converged = false;
            }
        }
    };
    const auto is_singular = [&singular](double x) {
        const auto it = std::lower_bound(singular.begin(), singular.end(), x * (1.0 - 1e-9));
        return it != singular.end() && *it <= x * (1.0 + 1e-9);
    };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i];
        const double b = nodes[i + 1];
        const bool lower = (i == 0 && line.lo > 0.0 && line.lower_edge_singular) || is_singular(a);
        const bool upper = is_singular(b);
        if (lower && upper) {
            const double m = std::sqrt(a * b);
            add(integrate_log_edge(f, a, m, opts));
            add(integrate_log_upper_edge(f, m, b, opts));
        } else if (lower) {
            add(integrate_log_edge(f, a, b, opts));
        } else if (upper) {
            add(integrate_log_upper_edge(f, a, b, opts));
        } else {
            add(integrate_log(f, a, b, opts));
        }
    }

    const auto negligible = [&](double panel) {
        return std::abs(panel) <= std::max(opts.abs_tol, 0.1 * opts.rel_tol * std::abs(total.value));
    };

    // Upper tail.
    {
        double r = core_hi;
        int quiet = 0;
        int decades = 0;
        for (;;) {
            if (line.upper_closure && r >= line.closure_from) {
                total.value += line.upper_closure(r);
                break;
            }
            if (decades++ >= opts.max_decades || r > 1e300) {
                total.converged = false;
                break;
            }
            const Result panel = integrate_log(f, r, r * 10.0, opts);
            add(panel);
            if (!std::isfinite(panel.value)) {
                total.converged = false;
                break;
            }
            quiet = negligible(panel.value) ? quiet + 1 : 0;
            if (quiet >= 3) {
                break;
            }
            r *= 10.0;
        }
    }

    // Lower tail towards 0.
    if (line.lo <= 0.0) {
        double r = core_lo;
        int quiet = 0;
        int decades = 0;
        for (;;) {
            if (decades++ >= opts.max_decades || r < 1e-300) {
                total.converged = false;
                break;
            }
            const Result panel = integrate_log(f, r / 10.0, r, opts);
            add(panel);
            if (!std::isfinite(panel.value)) {
                total.converged = false;
                break;
            }
            quiet = negligible(panel.value) ? quiet + 1 : 0;
            if (quiet >= 3) {
                break;
            }
            r /= 10.0;
        }
    }
    if (soft_error > std::max(opts.abs_tol, 10.0 * opts.rel_tol * std::abs(total.value))) {
        total.converged = false;
    }
    return total;
}

}  // namespace viscowave::quad
