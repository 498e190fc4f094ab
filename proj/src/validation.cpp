#include "viscowave/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "viscowave/asymptotics.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/mlf.hpp"

namespace viscowave::validation {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

class Suite {
public:
    // Runs one check; library errors become a failed check with their message.
    void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        Check c;
        c.name = name;
        try {
            auto [ok, detail] = body();
            c.pass = ok;
            c.detail = std::move(detail);
        } catch (const InvariantViolation& e) {
            c.pass = false;
            c.detail = e.what();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("error: ") + e.what();
        }
        report.checks.push_back(std::move(c));
    }

    void skip(const std::string& name, const std::string& why) {
        report.checks.push_back({name, true, true, why});
    }

    Report report;
};

}  // namespace

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Report construction_failure(const std::string& message) {
    std::string name = "config.constructor";
    const auto colon = message.find(':');
    if (colon != std::string::npos && message.compare(0, 8, "measure.") == 0) {
        name = message.substr(0, colon);
    }
    Report r;
    r.checks.push_back({name, false, false, message});
    return r;
}

Report run_suite(const Medium& medium, const RelaxationKernel& kernel) {
    Suite s;
    const KernelFamily fam = kernel.family();
    const double tau = dispersion::characteristic_time(medium, kernel);
    const double C0 = dispersion::wavefront_speed(medium, kernel);
    const double Cinf = dispersion::static_speed(medium, kernel);

    // Kernel: sampled complete monotonicity of K(t).
    if (fam == KernelFamily::newtonian) {
        s.skip("kernel.completely_monotone", "Newtonian kernel is a distribution (symbol-only model)");
    } else {
        s.run("kernel.completely_monotone", [&] {
            const auto t = dispersion::log_grid(1e-3 * tau, 1e3 * tau, 61);
            std::vector<double> k(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                k[i] = kernel.eval_K(t[i]);
            }
            const CmReport rep = check_completely_monotone(t, k, 4, 1e-9);
            std::string d = "orders 0.." + std::to_string(rep.max_order) + " on 61 nodes";
            if (!rep.pass) {
                const auto& v = rep.violations.front();
                d = "order " + std::to_string(v.order) + " sign violation at t = " + fmt(t[v.index]);
            }
            return std::pair{rep.pass, d};
        });
    }

    s.run("kernel.symbol_pick", [&] {
        const PickReport rep = check_pick_property([&](std::complex<double> p) { return kernel.symbol(p); }, 1.0 / tau);
        return std::pair{rep.pass, std::to_string(rep.samples) + " samples, min Im f/|f| = " + fmt(rep.worst_ratio)};
    });

    if (fam == KernelFamily::prony || fam == KernelFamily::custom_measure) {
        s.run("kernel.symbol_matches_measure", [&] {
            const SpectralMeasure m = *kernel.bernstein_measure();
            double worst = 0.0;
            for (double r : dispersion::log_grid(1e-3 / tau, 1e3 / tau, 13)) {
                for (double th : {0.0, 0.7, 1.5, 2.5}) {
                    const std::complex<double> p = std::polar(r, th);
                    const auto direct = kernel.symbol(p);
                    const auto viaM = kernel.Kinf() + beta_eval(m, p);
                    worst = std::max(worst, std::abs(direct - viaM) / std::max(std::abs(direct), 1e-300));
                }
            }
            const double tol = fam == KernelFamily::prony ? 1e-12 : 1e-7;
            return std::pair{worst <= tol, "max relative difference " + fmt(worst)};
        });
    }
    if (fam == KernelFamily::constant_q) {
        s.run("kernel.constant_q_scaling", [&] {
            const double alpha = std::get<ConstantQParams>(kernel.params()).alpha;
            double worst = 0.0;
            for (double sc : {0.1, 3.0, 1e4}) {
                for (std::complex<double> p : {std::complex<double>(1.0 / tau, 0.0), std::complex<double>(0.3, 2.0) / tau}) {
                    const auto lhs = kernel.symbol(sc * p);
                    const auto rhs = std::pow(sc, alpha) * kernel.symbol(p);
                    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
                }
            }
            return std::pair{worst <= 1e-12, "max relative deviation " + fmt(worst)};
        });
    }
    if (fam == KernelFamily::cole_cole) {
        const double alpha = std::get<ColeColeParams>(kernel.params()).alpha;
        s.run("mlf.branch_overlap", [&] {
            double worst = 0.0;
            for (double x : dispersion::log_grid(0.05, 0.2, 9)) {
                worst = std::max(worst, std::abs(mlf::ml_series(alpha, x).value - mlf::ml_integral(alpha, x)));
            }
            return std::pair{worst < 1e-8, "max |series - integral| on [0.05, 0.2] = " + fmt(worst)};
        });
        s.run("mlf.completely_monotone", [&] {
            const auto rep = mlf::ml_cm_probe(alpha, dispersion::log_grid(1e-3, 1e2, 41));
            return std::pair{rep.pass, std::string(rep.monotone ? "monotone" : "not monotone") +
                                           (rep.bounded ? ", in (0, 1]" : ", out of (0, 1]")};
        });
    }
    if (kernel.Kinf() > 0.0) {
        s.run("kernel.normalize_static", [&] {
            const auto [k2, m2] = normalize_static(kernel, medium);
            double worst = 0.0;
            for (double r : dispersion::log_grid(1e-3 / tau, 1e3 / tau, 10)) {
                for (double th : {0.0, 1.0}) {
                    const std::complex<double> p = std::polar(r, th);
                    const auto a = dispersion::kappa(medium, kernel, p);
                    const auto b = dispersion::kappa(m2, k2, p);
                    worst = std::max(worst, std::abs(a - b) / std::abs(a));
                }
            }
            return std::pair{worst <= 1e-12, "kappa agreement over 20 points: " + fmt(worst)};
        });
    }

    // Wavenumber.
    s.run("kappa.pick", [&] {
        const PickReport rep =
            check_pick_property([&](std::complex<double> p) { return dispersion::kappa(medium, kernel, p); }, 1.0 / tau);
        return std::pair{rep.pass, std::to_string(rep.samples) + " samples, min Im f/|f| = " + fmt(rep.worst_ratio)};
    });
    s.run("kappa.positive_real_axis", [&] {
        for (double r : dispersion::log_grid(1e-6 / tau, 1e6 / tau, 25)) {
            const auto k = dispersion::kappa(medium, kernel, r);
            if (!(k.real() > 0.0) || std::abs(k.imag()) > 1e-14 * k.real()) {
                return std::pair{false, "kappa(" + fmt(r) + ") = " + fmt(k.real()) + " + " + fmt(k.imag()) + "i"};
            }
        }
        return std::pair{true, std::string("kappa real and positive on 25 nodes")};
    });

    // Curves.
    const auto grid = dispersion::log_grid(1e-6 / tau, 1e6 / tau, 1000);
    s.run("curve.monotone_and_bounded", [&] {
        dispersion::curve(medium, kernel, grid);
        return std::pair{true, std::string("A nondecreasing, D/w nonincreasing, c nondecreasing in [Cinf, C0] on 1000 nodes")};
    });
    s.run("curve.sublinear", [&] {
        const auto top = dispersion::log_grid(1e3 / tau, 1e9 / tau, 7);
        double prev = std::numeric_limits<double>::infinity();
        double first = 0.0;
        for (double w : top) {
            const double ratio = dispersion::evaluate(medium, kernel, w).A / w;
            if (first == 0.0) {
                first = ratio;
            }
            if (ratio > prev * (1.0 + 1e-9)) {
                return std::pair{false, "A/w increases at w = " + fmt(w)};
            }
            prev = ratio;
        }
        if (first == 0.0 && prev == 0.0) {
            return std::pair{true, std::string("attenuation vanishes identically")};
        }
        return std::pair{prev < 0.5 * first, "A/w fell by a factor " + fmt(first / prev) + " over six decades"};
    });
    s.run("curve.low_frequency_limit", [&] {
        const double lim = dispersion::low_frequency_dispersion_limit(medium, kernel);
        const double expect = 1.0 / Cinf - (std::isfinite(C0) ? 1.0 / C0 : 0.0);
        const double err = expect == 0.0 ? std::abs(lim) : std::abs(lim - expect) / std::abs(expect);
        return std::pair{expect == 0.0 ? err < 1e-12 : err < 1e-6,
                         "lim D/w = " + fmt(lim) + ", 1/Cinf - 1/C0 = " + fmt(expect)};
    });
    if (std::isfinite(C0)) {
        s.run("curve.wavefront_speed_limit", [&] {
            double prev_gap = std::numeric_limits<double>::infinity();
            double gap = 0.0;
            for (double w : dispersion::log_grid(1e3 / tau, 1e9 / tau, 7)) {
                gap = (C0 - dispersion::evaluate(medium, kernel, w).c) / C0;
                if (gap > prev_gap * (1.0 + 1e-9) + 1e-15) {
                    return std::pair{false, "c(w) moves away from C0 at w = " + fmt(w)};
                }
                prev_gap = gap;
            }
            return std::pair{gap < 1e-2, "relative gap to C0 at 1e9/tau: " + fmt(gap)};
        });
    }

    // Family closed forms.
    if (fam == KernelFamily::newtonian) {
        s.run("newtonian.quadratic_low_frequency", [&] {
            const double N = std::get<NewtonianParams>(kernel.params()).N;
            double worst = 0.0;
            for (double w : dispersion::log_grid(1e-6 / tau, 1e-3 / tau, 7)) {
                const double taylor = N * w * w / (2.0 * medium.bigK() * medium.c0());
                worst = std::max(worst, std::abs(dispersion::evaluate(medium, kernel, w).A / taylor - 1.0));
            }
            return std::pair{worst < 1e-2, "max relative deviation from N w^2/(2 bigK c0): " + fmt(worst)};
        });
    }
    if (fam == KernelFamily::prony && kernel.K0() > 0.0) {
        s.run("prony.saturation", [&] {
            double rmax = 0.0;
            for (const auto& t : std::get<PronyParams>(kernel.params()).terms) {
                rmax = std::max(rmax, t.rate);
            }
            const double R = dispersion::prony_saturation(medium, kernel);
            const double A = dispersion::evaluate(medium, kernel, 1e6 * rmax).A;
            const double err = std::abs(A / R - 1.0);
            return std::pair{err < 1e-3, "A(1e6 r_max) = " + fmt(A) + ", R = " + fmt(R)};
        });
    }
    if (fam == KernelFamily::cole_cole) {
        s.run("cole_cole.closed_form", [&] {
            const auto& p = std::get<ColeColeParams>(kernel.params());
            for (double w : dispersion::log_grid(1e-4 / tau, 1e4 / tau, 9)) {
                dispersion::cole_cole_closed_form(medium, p, w);
            }
            return std::pair{true, std::string("closed-form A equals Re kappa(-i w) to 1e-10 on 9 nodes")};
        });
    }
    if (fam == KernelFamily::custom_measure) {
        s.run("measure.integrable", [&] {
            const auto& m = std::get<CustomMeasureParams>(kernel.params()).measure;
            const auto rep = integrability_report(m);
            return std::pair{rep.finite_over_1plus_r, "total mass " + fmt(rep.total_mass)};
        });
    }

    // Classifier consistency.
    s.run("classify.consistency", [&] {
        const auto rep = asymptotics::classify_wavefront(medium, kernel);
        using asymptotics::WavefrontClass;
        const bool none = rep.cls == WavefrontClass::NoWavefront;
        bool ok = none == !std::isfinite(C0) && rep.cls != WavefrontClass::Indeterminate;
        if (rep.cls == WavefrontClass::SmoothWavefront || rep.cls == WavefrontClass::DiscontinuityAdmitting ||
            rep.cls == WavefrontClass::StepwiseRegularizing) {
            ok = ok && rep.paley_wiener_finite;
        }
        return std::pair{ok, std::string(asymptotics::to_string(rep.cls)) + ", C0 = " + fmt(C0) +
                                 ", Paley-Wiener " + (rep.paley_wiener_finite ? "finite" : "not finite")};
    });
    return s.report;
}

}  // namespace viscowave::validation
