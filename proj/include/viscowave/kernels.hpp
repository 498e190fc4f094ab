#pragma once

/**
 * @file kernels.hpp
 * @brief Completely monotone relaxation kernels K(t) and their Laplace symbols p K~(p).
 *
 * Each family exposes its symbol in closed form; complex powers use the
 * principal branch (cut along the negative real axis).
 */

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "viscowave/measures.hpp"

namespace viscowave {

/// Background medium: elastic speed c0 (m/s) and reference density rho0 (kg/m^3).
class Medium {
public:
    Medium(double c0, double rho0);

    double c0() const noexcept { return c0_; }
    double rho0() const noexcept { return rho0_; }
    /// Bulk parameter rho0 * c0^2 (Pa).
    double bigK() const noexcept { return rho0_ * c0_ * c0_; }

private:
    double c0_;
    double rho0_;
};

enum class KernelFamily { prony, cole_cole, constant_q, newtonian, custom_measure };

std::string_view to_string(KernelFamily family);
KernelFamily family_from_string(std::string_view name);

struct PronyTerm {
    double lambda;  ///< modulus (Pa)
    double rate;    ///< relaxation rate (rad/s)
};

struct PronyParams {
    std::vector<PronyTerm> terms;
    double static_offset = 0.0;  ///< constant part of K (= K_inf)
};

struct ColeColeParams {
    double M;
    double a;
    double tau;
    double alpha;
};

struct ConstantQParams {
    double A;
    double tau;
    double alpha;
};

struct NewtonianParams {
    double N;  ///< Pa s
};

struct CustomMeasureParams {
    SpectralMeasure measure;     ///< Bernstein measure of K
    double static_offset = 0.0;
};

using KernelParams = std::variant<PronyParams, ColeColeParams, ConstantQParams, NewtonianParams, CustomMeasureParams>;

class RelaxationKernel {
public:
    KernelFamily family() const noexcept;
    const KernelParams& params() const noexcept { return params_; }

    /// K(t) for t > 0. Newtonian kernels are distributional and throw UnsupportedOperation.
    double eval_K(double t) const;

    /// Laplace symbol p K~(p); p must not lie on the closed negative real axis
    /// except p = 0, where the limit K_inf is returned.
    std::complex<double> symbol(std::complex<double> p) const;

    double K0() const;       ///< lim_{t->0} K(t), possibly +inf
    double Kinf() const;     ///< lim_{t->inf} K(t)
    double K0prime() const;  ///< K'(0), possibly -inf

    /// Bernstein measure of K - K_inf (absent for the Newtonian kernel).
    std::optional<SpectralMeasure> bernstein_measure() const;

    /// Relaxation time scale of the family; NaN when the family has none on its own.
    double characteristic_time() const;

    friend RelaxationKernel prony_kernel(std::vector<PronyTerm>, double);
    friend RelaxationKernel cole_cole_kernel(double, double, double, double);
    friend RelaxationKernel constant_q_kernel(double, double, double);
    friend RelaxationKernel newtonian_kernel(double);
    friend RelaxationKernel custom_measure_kernel(SpectralMeasure, double);

private:
    explicit RelaxationKernel(KernelParams params) : params_(std::move(params)) {}
    KernelParams params_;
};

/// K(t) = c + sum lambda_n exp(-r_n t). An empty term list gives the zero (elastic) kernel.
RelaxationKernel prony_kernel(std::vector<PronyTerm> terms, double static_offset = 0.0);

/// Cole-Cole kernel: p K~(p) = M (1 + a (tau p)^-alpha)/(1 + (tau p)^-alpha) - M a.
RelaxationKernel cole_cole_kernel(double M, double a, double tau, double alpha);

/// K(t) = A (t/tau)^-alpha / Gamma(1 - alpha), symbol A (tau p)^alpha.
RelaxationKernel constant_q_kernel(double A, double tau, double alpha);

/// Newtonian viscosity K = N delta(t), symbol N p (symbol-only limiting model).
RelaxationKernel newtonian_kernel(double N);

/// K(t) = c + int exp(-r t) lambda(dr) for an arbitrary Bernstein measure.
RelaxationKernel custom_measure_kernel(SpectralMeasure measure, double static_offset = 0.0);

inline RelaxationKernel zero_kernel() { return prony_kernel({}); }

/// Density h(r) = b r^lambda_q / ln(r)^gamma on r > support_min. Requires
/// lambda_q < 0, or lambda_q == 0 with gamma > 1, so that int nu(dr)/(1+r) < inf.
SpectralMeasure quasilinear_measure(double b, double lambda_q, double gamma, double support_min);

/// Moves K_inf from the kernel into the bulk parameter: K -> K - K_inf,
/// bigK -> bigK + K_inf (c0 rescaled accordingly).
std::pair<RelaxationKernel, Medium> normalize_static(const RelaxationKernel& kernel, const Medium& medium);

}  // namespace viscowave
