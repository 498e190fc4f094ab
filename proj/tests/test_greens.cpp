#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/greens.hpp"
#include "viscowave/kernels.hpp"

using namespace viscowave;
using namespace viscowave::greens;

namespace {

const Medium kUnit(1.0, 1.0);
const Medium kWater(1500.0, 1000.0);

double peak(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Largest |P| strictly before t_end.
double max_before(const GreenField& f, double t_end) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.t.size() && f.t[i] < t_end; ++i) {
        m = std::max(m, std::abs(f.values[i]));
    }
    return m;
}

}  // namespace

TEST_SUITE("greens") {

TEST_CASE("elastic 1-D field is the smoothed d'Alembert step") {
    const double c0 = 2.0;
    const double x = 3.0;
    const double sigma = 40.0;
    const Medium m(c0, 1.0);
    const auto t = uniform_grid(4.0, 2001);
    const GreenField f = green_1d(m, zero_kernel(), x, t, sigma);
    CHECK(f.dim == 1);
    CHECK(f.meta.C0 == c0);
    CHECK(f.meta.predicted_arrival == doctest::Approx(x / c0).epsilon(1e-15));
    const double scale = 1.0 / (2.0 * c0);
    double smoothed = 0.0;
    double raw = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = t[i] - x / c0;
        smoothed = std::max(smoothed, std::abs(f.values[i] - scale * oracle::normal_cdf(sigma * s)));
        if (std::abs(s) > 6.0 / sigma) {
            raw = std::max(raw, std::abs(f.values[i] - (s > 0.0 ? scale : 0.0)));
        }
    }
    CHECK(smoothed / scale < 1e-3);
    CHECK(raw / scale < 1e-3);
    CHECK(f.meta.imag_residue < 1e-10);
}

TEST_CASE("untapered synthesis requires unbounded attenuation") {
    const auto t = uniform_grid(2.0, 401);
    CHECK_THROWS_AS(green_1d(kUnit, zero_kernel(), 1.0, t, 0.0), Error);
    CHECK_THROWS_AS(green_1d(kUnit, prony_kernel({{1.0, 1.0}}), 1.0, t, 0.0), Error);
    const GreenField f = green_1d(kUnit, newtonian_kernel(0.05), 1.0, t, 0.0);
    CHECK(f.sigma_s == 0.0);
    CHECK(peak(f.values) > 0.0);
}

TEST_CASE("elastic derivatives") {
    const double c0 = 1.5;
    const double x = 1.0;
    const double sigma = 30.0;
    const Medium m(c0, 1.0);
    const auto t = uniform_grid(2.0, 2001);
    SUBCASE("time derivative is a smoothed delta of weight 1/(2 c0)") {
        const GreenField f = green_derivatives(m, zero_kernel(), x, t, 1, 0, sigma);
        const double scale = sigma / (2.0 * c0);
        double err = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            err = std::max(err, std::abs(f.values[i] - scale * oracle::normal_pdf(sigma * (t[i] - x / c0))));
        }
        CHECK(err / (scale * oracle::normal_pdf(0.0)) < 1e-3);
        CHECK(f.meta.time_order == 1);
        CHECK(f.meta.space_order == 0);
    }
    SUBCASE("space derivative is -1/c0 times the time derivative") {
        const GreenField f = green_derivatives(m, zero_kernel(), x, t, 0, 1, sigma);
        const double scale = -sigma / (2.0 * c0 * c0);
        double err = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            err = std::max(err, std::abs(f.values[i] - scale * oracle::normal_pdf(sigma * (t[i] - x / c0))));
        }
        CHECK(err / std::abs(scale * oracle::normal_pdf(0.0)) < 1e-3);
    }
    SUBCASE("request checks") {
        CHECK_THROWS_AS(green_derivatives(m, zero_kernel(), x, t, 3, 2, sigma), DomainError);
        CHECK_THROWS_AS(green_derivatives(m, zero_kernel(), x, t, -1, 0, sigma), DomainError);
        CHECK_THROWS_AS(green_derivatives(m, zero_kernel(), x, t, 1, 0, 0.0), DomainError);
    }
}

TEST_CASE("elastic 3-D field is the retarded smoothed delta") {
    const double c0 = 1.0;
    const double r = 2.0;
    const double sigma = 25.0;
    const Medium m(c0, 1.0);
    const auto t = uniform_grid(3.0, 1501);
    const GreenField f = green_3d(m, zero_kernel(), r, t, sigma);
    CHECK(f.dim == 3);
    const double scale = sigma / (4.0 * std::numbers::pi * c0 * c0 * r);
    double err = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        err = std::max(err, std::abs(f.values[i] - scale * oracle::normal_pdf(sigma * (t[i] - r / c0))));
    }
    CHECK(err / (scale * oracle::normal_pdf(0.0)) < 1e-3);
    CHECK(f.meta.crosscheck >= 0.0);
    CHECK(f.meta.crosscheck < 1e-3);
}

TEST_CASE("Cole-Cole field is causal and preceded by a pedestal") {
    const RelaxationKernel k = cole_cole_kernel(kWater.bigK(), 0.5, 1e-13, 0.5);
    const double sigma = 1e6;
    const double C0 = dispersion::wavefront_speed(kWater, k);
    for (double x : {1.0, 2.0, 4.0}) {
        CAPTURE(x);
        const auto t = uniform_grid(1.5 * x / C0, static_cast<std::size_t>(1.5 * x / C0 * sigma) + 1);
        const GreenField f = green_1d(kWater, k, x, t, sigma);
        const double mx = peak(f.values);
        CHECK(max_before(f, x / C0 - 3.0 / sigma) < 1e-4 * mx);
        const ArrivalReport a = arrival_diagnostics(f, 1e-2);
        CHECK(a.predicted_arrival == doctest::Approx(x / C0).epsilon(1e-14));
        CHECK(a.delay > 0.0);
        CHECK(a.pedestal_flatness < 1e-2);
        CHECK(f.meta.imag_residue < 1e-10);
    }
}

TEST_CASE("Prony field jumps at the wavefront") {
    const RelaxationKernel k = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    const double sigma = 50.0;
    const double C0 = dispersion::wavefront_speed(kUnit, k);
    for (double x : {1.0, 2.0, 4.0}) {
        CAPTURE(x);
        const auto t = uniform_grid(2.0 * x / C0, 2001);
        const GreenField f = green_1d(kUnit, k, x, t, sigma);
        const double dt = t[1] - t[0];
        // A Gaussian-smoothed jump keeps Phi(-3) = 1.3e-3 of its height at three widths
        // ahead of the front and drops below 1e-4 beyond four.
        CHECK(max_before(f, x / C0 - 4.0 / sigma) < 1e-4 * peak(f.values));
        const ArrivalReport a = arrival_diagnostics(f, 1e-2);
        CHECK(a.delay < dt);
        CHECK(a.delay >= -3.0 / sigma);
    }
}

TEST_CASE("elastic arrival at half height lands on the wavefront") {
    const auto t = uniform_grid(3.0, 1501);
    const GreenField f = green_1d(kUnit, zero_kernel(), 1.0, t, 50.0);
    const ArrivalReport a = arrival_diagnostics(f, 0.5);
    CHECK(std::abs(a.arrival - 1.0) <= t[1] - t[0]);
    CHECK(a.pedestal_flatness <= 0.5);
}

TEST_CASE("constant-Q field has no wavefront") {
    const double tau = 1.0;
    const RelaxationKernel k = constant_q_kernel(kUnit.bigK(), tau, 0.5);
    const double x = 1.0;
    const auto t = uniform_grid(2.0, 2001);
    const GreenField f = green_1d(kUnit, k, x, t, 200.0);
    CHECK(std::isinf(f.meta.C0));
    const std::size_t i = 500;  // t = 0.5 x/c0
    CHECK(t[i] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(f.values[i]) > 1e-3 * peak(f.values));
    CHECK_THROWS_AS(arrival_diagnostics(f, 0.1), DomainError);
}

TEST_CASE("synthesis is linear in the source spectrum") {
    // Smoothing the sigma1 field with a Gaussian of width s2 must equal the
    // field synthesized with 1/sigma12^2 = 1/sigma1^2 + s2^2.
    const RelaxationKernel k = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    const double sigma1 = 60.0;
    const double s2 = 0.03;
    const double sigma12 = 1.0 / std::sqrt(1.0 / (sigma1 * sigma1) + s2 * s2);
    const auto t = uniform_grid(2.0, 4001);
    const double dt = t[1] - t[0];
    const GreenField f1 = green_1d(kUnit, k, 1.0, t, sigma1);
    const GreenField f12 = green_1d(kUnit, k, 1.0, t, sigma12);
    const int half = static_cast<int>(std::ceil(8.0 * s2 / dt));
    double err = 0.0;
    for (std::size_t i = static_cast<std::size_t>(half); i + static_cast<std::size_t>(half) < t.size(); ++i) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            acc += f1.values[i - j] * oracle::normal_pdf(j * dt / s2) * dt / s2;
        }
        err = std::max(err, std::abs(acc - f12.values[i]));
    }
    CHECK(err < 1e-5 * peak(f12.values));
}

TEST_CASE("small kernels converge to the elastic field") {
    const double sigma = 40.0;
    const auto t = uniform_grid(3.0, 1501);
    double prev = std::numeric_limits<double>::infinity();
    for (double scale : {1e-2, 1e-3, 1e-4}) {
        CAPTURE(scale);
        const RelaxationKernel k = prony_kernel({{2.0 * scale, 1.0}, {scale, 3.0}});
        const GreenField f = green_1d(kUnit, k, 1.0, t, sigma);
        double err = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            err = std::max(err, std::abs(f.values[i] - 0.5 * oracle::normal_cdf(sigma * (t[i] - 1.0))));
        }
        // The front moves by O(scale), so the error should drop about tenfold per decade.
        CHECK(err < 0.2 * prev);
        prev = err;
    }
}

TEST_CASE("the 3-D front sharpens faster than the 1-D front") {
    // The 3-D singularity is one order higher: the 3-D/1-D peak ratio grows with sigma.
    const RelaxationKernel k = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    const auto t = uniform_grid(2.0, 4001);
    double prev = 0.0;
    for (double sigma : {20.0, 40.0, 80.0}) {
        CAPTURE(sigma);
        const double ratio = peak(green_3d(kUnit, k, 1.0, t, sigma).values) / peak(green_1d(kUnit, k, 1.0, t, sigma).values);
        CHECK(ratio > 1.5 * prev);
        prev = ratio;
    }
}

TEST_CASE("input checks") {
    const auto t = uniform_grid(1.0, 101);
    CHECK_THROWS_AS(green_1d(kUnit, zero_kernel(), 0.0, t, 10.0), DomainError);
    CHECK_THROWS_AS(green_1d(kUnit, zero_kernel(), 1.0, t, -1.0), DomainError);
    CHECK_THROWS_AS(green_3d(kUnit, zero_kernel(), -1.0, t, 10.0), DomainError);
    const std::vector<double> bad{0.0, 0.1, 0.3};
    CHECK_THROWS_AS(green_1d(kUnit, zero_kernel(), 1.0, bad, 10.0), DomainError);
    const std::vector<double> late{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(green_1d(kUnit, zero_kernel(), 1.0, late, 10.0), DomainError);
    CHECK_THROWS_AS(uniform_grid(0.0, 10), DomainError);
    GreenField zero;
    zero.t = t;
    zero.values.assign(t.size(), 0.0);
    zero.meta.predicted_arrival = 0.5;
    zero.meta.C0 = 1.0;
    CHECK_THROWS_AS(arrival_diagnostics(zero, 0.1), DomainError);
}

}  // TEST_SUITE
