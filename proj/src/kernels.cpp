#include "viscowave/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "viscowave/error.hpp"
#include "viscowave/mlf.hpp"

namespace viscowave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw InvalidParameter(what);
    }
}

void check_point(std::complex<double> p) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
        throw DomainError("kernel symbol: p must be finite");
    }
    if (p.imag() == 0.0 && p.real() < 0.0) {
        throw DomainError("kernel symbol: p lies on the branch cut (negative real axis)");
    }
}

}  // namespace

Medium::Medium(double c0, double rho0) : c0_(c0), rho0_(rho0) {
    require(positive_finite(c0), "medium: c0 must be > 0");
    require(positive_finite(rho0), "medium: rho0 must be > 0");
}

std::string_view to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::prony: return "prony";
        case KernelFamily::cole_cole: return "cole_cole";
        case KernelFamily::constant_q: return "constant_q";
        case KernelFamily::newtonian: return "newtonian";
        case KernelFamily::custom_measure: return "custom_measure";
    }
    return "unknown";
}

KernelFamily family_from_string(std::string_view name) {
    for (KernelFamily f : {KernelFamily::prony, KernelFamily::cole_cole, KernelFamily::constant_q,
                           KernelFamily::newtonian, KernelFamily::custom_measure}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw InvalidParameter("unknown kernel type '" + std::string(name) +
                           "' (expected prony|cole_cole|constant_q|newtonian|custom_measure)");
}

KernelFamily RelaxationKernel::family() const noexcept {
    return static_cast<KernelFamily>(params_.index());
}

double RelaxationKernel::eval_K(double t) const {
    if (!(t > 0.0)) {
        throw DomainError("eval_K: t must be > 0");
    }
    return std::visit(
        overloaded{
            [t](const PronyParams& k) {
                double s = k.static_offset;
                for (const PronyTerm& term : k.terms) {
                    s += term.lambda * std::exp(-term.rate * t);
                }
                return s;
            },
            [t](const ColeColeParams& k) {
                return k.M * (1.0 - k.a) * mlf::ml_neg_power(k.alpha, t / k.tau);
            },
            [t](const ConstantQParams& k) {
                return k.A * std::pow(t / k.tau, -k.alpha) / std::tgamma(1.0 - k.alpha);
            },
            [](const NewtonianParams&) -> double {
                throw UnsupportedOperation(
                    "eval_K: the Newtonian kernel N delta(t) is distributional; only its symbol N p exists");
            },
            [t](const CustomMeasureParams& k) { return k.static_offset + bernstein_eval(k.measure, t); },
        },
        params_);
}

std::complex<double> RelaxationKernel::symbol(std::complex<double> p) const {
    if (p == 0.0) {
        return Kinf();
    }
    check_point(p);
    return std::visit(
        overloaded{
            [p](const PronyParams& k) {
                std::complex<double> s = k.static_offset;
                for (const PronyTerm& term : k.terms) {
                    s += term.lambda * p / (p + term.rate);
                }
                return s;
            },
            [p](const ColeColeParams& k) {
                // M (1 + a u)/(1 + u) - M a with u = (tau p)^-alpha, written without cancellation.
                const std::complex<double> w = std::pow(k.tau * p, k.alpha);
                return k.M * (1.0 - k.a) * w / (1.0 + w);
            },
            [p](const ConstantQParams& k) { return k.A * std::pow(k.tau * p, k.alpha); },
            [p](const NewtonianParams& k) { return k.N * p; },
            [p](const CustomMeasureParams& k) { return k.static_offset + beta_eval(k.measure, p); },
        },
        params_);
}

double RelaxationKernel::K0() const {
    return std::visit(overloaded{
                          [](const PronyParams& k) {
                              double s = k.static_offset;
                              for (const PronyTerm& term : k.terms) {
                                  s += term.lambda;
                              }
                              return s;
                          },
                          [](const ColeColeParams& k) { return k.M * (1.0 - k.a); },
                          [](const ConstantQParams&) { return kInf; },
                          [](const NewtonianParams&) { return kInf; },
                          [](const CustomMeasureParams& k) {
                              return k.static_offset + integrability_report(k.measure).total_mass;
                          },
                      },
                      params_);
}

double RelaxationKernel::Kinf() const {
    return std::visit(overloaded{
                          [](const PronyParams& k) { return k.static_offset; },
                          [](const CustomMeasureParams& k) { return k.static_offset; },
                          [](const auto&) { return 0.0; },
                      },
                      params_);
}

double RelaxationKernel::K0prime() const {
    return std::visit(overloaded{
                          [](const PronyParams& k) {
                              double s = 0.0;
                              for (const PronyTerm& term : k.terms) {
                                  s -= term.rate * term.lambda;
                              }
                              return s;
                          },
                          [](const ColeColeParams& k) { return k.a == 1.0 ? 0.0 : -kInf; },
                          [](const ConstantQParams&) { return -kInf; },
                          [](const NewtonianParams&) { return -kInf; },
                          [](const CustomMeasureParams& k) { return -first_moment(k.measure); },
                      },
                      params_);
}

std::optional<SpectralMeasure> RelaxationKernel::bernstein_measure() const {
    return std::visit(
        overloaded{
            [](const PronyParams& k) -> std::optional<SpectralMeasure> {
                std::vector<Atom> atoms;
                for (const PronyTerm& term : k.terms) {
                    atoms.push_back({term.rate, term.lambda});
                }
                return SpectralMeasure(std::move(atoms));
            },
            [](const ColeColeParams& k) -> std::optional<SpectralMeasure> {
                if (k.a == 1.0) {
                    return SpectralMeasure();
                }
                // K(t) = M(1-a) sin(alpha pi)/pi int exp(-s t) tau g(tau s) ds,
                // g(r) = r^(alpha-1)/(r^(2 alpha) + 2 r^alpha cos(alpha pi) + 1).
                const double scale = k.M * (1.0 - k.a) * std::sin(k.alpha * std::numbers::pi) / std::numbers::pi;
                const double c = std::cos(k.alpha * std::numbers::pi);
                Density d;
                d.kind = "cole_cole_bernstein";
                d.h = [scale, c, tau = k.tau, alpha = k.alpha](double s) {
                    const double r = tau * s;
                    const double ra = std::pow(r, alpha);
                    return scale * tau * (ra / r) / (ra * ra + 2.0 * ra * c + 1.0);
                };
                d.tail = TailDescriptor{scale * std::pow(k.tau, -k.alpha), -1.0 - k.alpha, 0.0, false};
                return SpectralMeasure({}, std::move(d), GridHints{1e-3 / k.tau, 1e3 / k.tau});
            },
            [](const ConstantQParams& k) -> std::optional<SpectralMeasure> {
                // int exp(-s t) s^(alpha-1) ds = Gamma(alpha) t^-alpha.
                const double pref = k.A * std::pow(k.tau, k.alpha) / (std::tgamma(1.0 - k.alpha) * std::tgamma(k.alpha));
                Density d;
                d.kind = "constant_q_bernstein";
                d.h = [pref, alpha = k.alpha](double s) { return pref * std::pow(s, alpha - 1.0); };
                d.tail = TailDescriptor{pref, k.alpha - 1.0, 0.0, true};
                return SpectralMeasure({}, std::move(d), GridHints{1e-3 / k.tau, 1e3 / k.tau});
            },
            [](const NewtonianParams&) -> std::optional<SpectralMeasure> { return std::nullopt; },
            [](const CustomMeasureParams& k) -> std::optional<SpectralMeasure> { return k.measure; },
        },
        params_);
}

double RelaxationKernel::characteristic_time() const {
    return std::visit(overloaded{
                          [](const PronyParams& k) {
                              if (k.terms.empty()) {
                                  return 1.0;
                              }
                              double lo = kInf;
                              double hi = 0.0;
                              for (const PronyTerm& t : k.terms) {
                                  lo = std::min(lo, t.rate);
                                  hi = std::max(hi, t.rate);
                              }
                              return 1.0 / std::sqrt(lo * hi);
                          },
                          [](const ColeColeParams& k) { return k.tau; },
                          [](const ConstantQParams& k) { return k.tau; },
                          [](const NewtonianParams&) { return std::numeric_limits<double>::quiet_NaN(); },
                          [](const CustomMeasureParams& k) {
                              const auto s = k.measure.scales();
                              if (s.empty()) {
                                  return 1.0;
                              }
                              double lo = kInf;
                              double hi = 0.0;
                              for (double r : s) {
                                  lo = std::min(lo, r);
                                  hi = std::max(hi, r);
                              }
                              return 1.0 / std::sqrt(lo * hi);
                          },
                      },
                      params_);
}

RelaxationKernel prony_kernel(std::vector<PronyTerm> terms, double static_offset) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::ostringstream os;
        os << "prony: term " << i << " needs lambda > 0 and r > 0 (got lambda=" << terms[i].lambda
           << ", r=" << terms[i].rate << ")";
        require(positive_finite(terms[i].lambda) && positive_finite(terms[i].rate), os.str());
    }
    require(static_offset >= 0.0 && std::isfinite(static_offset), "prony: static offset must be >= 0");
    return RelaxationKernel(PronyParams{std::move(terms), static_offset});
}

RelaxationKernel cole_cole_kernel(double M, double a, double tau, double alpha) {
    require(positive_finite(M), "cole_cole: M must be > 0");
    require(positive_finite(tau), "cole_cole: tau must be > 0");
    require(alpha > 0.0 && alpha < 1.0, "cole_cole: alpha must lie in (0, 1)");
    require(a > 0.0 && a <= 1.0, "cole_cole: a must satisfy 0 < a <= 1");
    return RelaxationKernel(ColeColeParams{M, a, tau, alpha});
}

RelaxationKernel constant_q_kernel(double A, double tau, double alpha) {
    require(positive_finite(A), "constant_q: A must be > 0");
    require(positive_finite(tau), "constant_q: tau must be > 0");
    require(alpha > 0.0 && alpha < 1.0, "constant_q: alpha must lie in (0, 1)");
    return RelaxationKernel(ConstantQParams{A, tau, alpha});
}

RelaxationKernel newtonian_kernel(double N) {
    require(positive_finite(N), "newtonian: N must be > 0");
    return RelaxationKernel(NewtonianParams{N});
}

RelaxationKernel custom_measure_kernel(SpectralMeasure measure, double static_offset) {
    require(static_offset >= 0.0 && std::isfinite(static_offset), "custom_measure: static offset must be >= 0");
    const IntegrabilityReport rep = integrability_report(measure);
    require(rep.finite_over_1plus_r,
            "custom_measure: Bernstein measure violates int lambda(dr)/(1+r) < inf (kernel not locally integrable)");
    return RelaxationKernel(CustomMeasureParams{std::move(measure), static_offset});
}

SpectralMeasure quasilinear_measure(double b, double lambda_q, double gamma, double support_min) {
    require(positive_finite(b), "quasilinear: prefactor b must be > 0");
    require(support_min > 1.0 && std::isfinite(support_min), "quasilinear: support_min must be > 1 so that ln r > 0");
    if (!(lambda_q < 0.0 || (lambda_q == 0.0 && gamma > 1.0))) {
        std::ostringstream os;
        os << "quasilinear: integrability condition violated (lambda=" << lambda_q << ", gamma=" << gamma
           << "): need lambda < 0, or lambda = 0 and gamma > 1; otherwise int nu(dr)/(1+r) diverges";
        throw InvalidParameter(os.str());
    }
    Density d;
    d.kind = "quasilinear";
    d.support_min = support_min;
    d.params = {{"b", b}, {"lambda", lambda_q}, {"gamma", gamma}, {"support_min", support_min}};
    d.h = [b, lambda_q, gamma, support_min](double r) {
        if (r <= support_min) {
            return 0.0;
        }
        return b * std::pow(r, lambda_q) / std::pow(std::log(r), gamma);
    };
    d.tail = TailDescriptor{b, lambda_q, gamma, true};
    return SpectralMeasure({}, std::move(d), GridHints{support_min, support_min * 1e3});
}

std::pair<RelaxationKernel, Medium> normalize_static(const RelaxationKernel& kernel, const Medium& medium) {
    const double kinf = kernel.Kinf();
    if (kinf == 0.0) {
        return {kernel, medium};
    }
    const double bigK = medium.bigK() + kinf;
    Medium shifted(std::sqrt(bigK / medium.rho0()), medium.rho0());
    if (const auto* p = std::get_if<PronyParams>(&kernel.params())) {
        return {prony_kernel(p->terms, 0.0), shifted};
    }
    const auto& c = std::get<CustomMeasureParams>(kernel.params());
    return {custom_measure_kernel(c.measure, 0.0), shifted};
}

}  // namespace viscowave
