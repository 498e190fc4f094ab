#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/kernels.hpp"
#include "viscowave/measures.hpp"

using namespace viscowave;
using namespace viscowave::dispersion;
using cd = std::complex<double>;

namespace {

// Water with a fast Cole-Cole relaxation: c0 = 1500 m/s, M = bigK, a = 0.5, tau = 1e-13 s.
const Medium kWater(1500.0, 1000.0);
RelaxationKernel water_cole_cole(double alpha) { return cole_cole_kernel(kWater.bigK(), 0.5, 1e-13, alpha); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("kappa of the zero kernel is p/c0") {
    const Medium m(3.0, 2.0);
    for (cd p : {cd{1.0, 0.0}, cd{0.0, -2.0}, cd{0.3, 4.0}}) {
        CHECK(std::abs(kappa(m, zero_kernel(), p) - p / 3.0) < 1e-15);
    }
    CHECK(kappa(m, zero_kernel(), 0.0) == cd{0.0, 0.0});
}

TEST_CASE("kappa for closed-form kernels matches the direct formula") {
    const Medium m(1500.0, 1000.0);
    const double N = 1e-3;
    const RelaxationKernel nk = newtonian_kernel(N);
    CHECK(std::abs(kappa(m, nk, 1.0) - oracle::kappa_direct(1500.0, 1000.0, N * 1.0, 1.0)) < 1e-18);
    const RelaxationKernel cc = water_cole_cole(0.5);
    for (double w : {1e9, 1e13, 1e16}) {
        const cd p{0.0, -w};
        const cd ref = oracle::kappa_direct(1500.0, 1000.0, oracle::cole_cole_symbol(kWater.bigK(), 0.5, 1e-13, 0.5, p), p);
        CHECK(std::abs(kappa(kWater, cc, p) - ref) <= 1e-14 * std::abs(ref));
    }
}

TEST_CASE("attenuation is nonnegative on the imaginary axis") {
    const RelaxationKernel cc = water_cole_cole(0.5);
    for (double w : log_grid(1e3, 1e19, 1000)) {
        REQUIRE(kappa(kWater, cc, {0.0, -w}).real() >= 0.0);
    }
}

TEST_CASE("wavefront and static speeds") {
    const Medium unit(1.0, 1.0);
    CHECK(wavefront_speed(unit, zero_kernel()) == 1.0);
    const RelaxationKernel pr = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    CHECK(wavefront_speed(unit, pr) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(wavefront_speed_numeric(unit, pr) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::isinf(wavefront_speed(unit, constant_q_kernel(0.5, 1.0, 0.5))));
    CHECK(slowness(unit, constant_q_kernel(0.5, 1.0, 0.5)) == 0.0);
    CHECK(static_speed(unit, pr) == 1.0);
    CHECK(static_speed(unit, prony_kernel({{1.0, 1.0}}, 3.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(static_speed(kWater, water_cole_cole(0.5)) == 1500.0);
    const RelaxationKernel cc = water_cole_cole(0.5);
    CHECK(wavefront_speed_numeric(kWater, cc) == doctest::Approx(wavefront_speed(kWater, cc)).epsilon(1e-3));
}

TEST_CASE("curve of the zero kernel is flat") {
    const Medium m(2.0, 1.0);
    const auto grid = log_grid(1e-3, 1e3, 30);
    const DispersionCurve c = curve(m, zero_kernel(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(c.A[i] == 0.0);
        CHECK(c.D[i] == 0.0);
        CHECK(c.c[i] == 2.0);
        CHECK(std::isinf(c.Q[i]));
    }
    CHECK(c.C0 == 2.0);
    CHECK(c.Cinf == 2.0);
}

TEST_CASE("curve rejects bad grids") {
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(curve(kWater, zero_kernel(), bad), DomainError);
}

TEST_CASE("Newtonian attenuation is quadratic at low frequency") {
    const double N = 1e-3;
    const RelaxationKernel k = newtonian_kernel(N);
    const double w_top = 1e-3 * kWater.bigK() / N;
    for (double w : log_grid(w_top * 1e-4, w_top, 20)) {
        const double taylor = N * w * w / (2.0 * kWater.bigK() * kWater.c0());
        CHECK(rel(evaluate(kWater, k, w).A, taylor) < 1e-2);
    }
}

TEST_CASE("Cole-Cole phase speed rises from c0 towards C0") {
    for (double alpha : {0.2, 0.5, 0.8}) {
        const RelaxationKernel k = water_cole_cole(alpha);
        const auto grid = log_grid(1e-6 / 1e-13, 1e6 / 1e-13, 400);
        const DispersionCurve c = curve(kWater, k, grid);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            CHECK(c.c[i] >= c.c[i - 1] * (1.0 - 1e-12));
            CHECK(c.A[i] >= c.A[i - 1]);
        }
        // Convergence to c0 is only algebraic, (omega tau)^alpha.
        CHECK(c.c.front() >= 1500.0);
        CHECK(rel(c.c.front(), 1500.0) < (alpha < 0.3 ? 2e-2 : 1e-3));
        CHECK(c.c.back() <= c.C0 * (1.0 + 1e-12));
        CHECK(c.C0 == doctest::Approx(1500.0 * std::sqrt(1.5)).epsilon(1e-15));
        // 1/c = B + D/w pointwise.
        for (std::size_t i = 0; i < grid.size(); i += 37) {
            CHECK(rel(1.0 / c.c[i], c.B + c.D[i] / grid[i]) < 1e-12);
        }
    }
}

TEST_CASE("Cole-Cole polar closed form") {
    SUBCASE("low-frequency limits") {
        const ColeColeClosedForm f = cole_cole_closed_form(kWater, {kWater.bigK(), 0.5, 1e-13, 0.5}, 1.0);
        CHECK(std::abs(f.X - 1.0) < 1e-6);
        CHECK(std::abs(f.Y) < 1e-6);
        CHECK(f.A < 1e-10);
    }
    SUBCASE("omega tau = 1 against direct evaluation") {
        const double w = 1e13;
        const ColeColeClosedForm f = cole_cole_closed_form(kWater, {kWater.bigK(), 0.5, 1e-13, 0.5}, w);
        const cd p{0.0, -w};
        const cd k = oracle::kappa_direct(1500.0, 1000.0, oracle::cole_cole_symbol(kWater.bigK(), 0.5, 1e-13, 0.5, p), p);
        CHECK(rel(f.A, k.real()) < 1e-10);
    }
    SUBCASE("Y is nonpositive") {
        for (double alpha : {0.2, 0.5, 0.8}) {
            for (double w : log_grid(1e3, 1e19, 200)) {
                CHECK(cole_cole_closed_form(kWater, {kWater.bigK(), 0.5, 1e-13, alpha}, w).Y <= 0.0);
            }
        }
    }
}

TEST_CASE("extracted measure of the zero kernel is zero") {
    const SpectralMeasure nu = extract_measure(Medium(1.0, 1.0), zero_kernel(), log_grid(1e-3, 1e3, 50));
    CHECK(nu.is_zero());
}

TEST_CASE("Newtonian spectrum starts at bigK/N") {
    const double N = 1e-3;
    const RelaxationKernel k = newtonian_kernel(N);
    const double b = kWater.bigK() / N;
    const auto grid = log_grid(b * 1e-4, b * 1e4, 161);
    const SpectralMeasure nu = extract_measure(kWater, k, grid);
    const Density* d = nu.density();
    REQUIRE(d != nullptr);
    CHECK(rel(d->support_min, b) < 1e-10);
    CHECK(d->edge_singular);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < b * (1.0 - 1e-9)) {
            CHECK(d->table_h[i] == 0.0);
        } else if (grid[i] > b * (1.0 + 1e-9)) {
            CHECK(d->table_h[i] > 0.0);
        }
    }
}

TEST_CASE("measure round trip reproduces A and D") {
    SUBCASE("Cole-Cole alpha = 0.5 over omega tau in [1e-4, 1e4]") {
        const RelaxationKernel k = water_cole_cole(0.5);
        const SpectralMeasure nu = extract_measure(kWater, k, log_grid(1e-8 / 1e-13, 1e8 / 1e-13, 161));
        for (double w : log_grid(1e-4 / 1e-13, 1e4 / 1e-13, 17)) {
            const CurvePoint pt = evaluate(kWater, k, w);
            CHECK(rel(attenuation_from_measure(nu, w), pt.A) < 1e-4);
            CHECK(rel(dispersion_from_measure(nu, w), pt.D) < 1e-4);
        }
    }
    SUBCASE("Newtonian over four decades") {
        const double N = 1e-3;
        const RelaxationKernel k = newtonian_kernel(N);
        const double b = kWater.bigK() / N;
        const SpectralMeasure nu = extract_measure(kWater, k, log_grid(b * 1e-4, b * 1e4, 161));
        for (double w : log_grid(b * 1e-2, b * 1e2, 17)) {
            const CurvePoint pt = evaluate(kWater, k, w);
            CHECK(rel(attenuation_from_measure(nu, w), pt.A) < 1e-4);
            CHECK(rel(dispersion_from_measure(nu, w), pt.D) < 1e-4);
        }
    }
    SUBCASE("custom atoms: closed-form symbol") {
        const RelaxationKernel k = custom_measure_kernel(SpectralMeasure({{1.0, 0.3}, {20.0, 0.2}}));
        const Medium m(1.0, 1.0);
        const SpectralMeasure nu = extract_measure(m, k, log_grid(1e-3, 1e4, 281));
        for (double w : log_grid(0.1, 100.0, 7)) {
            const CurvePoint pt = evaluate(m, k, w);
            CHECK(rel(attenuation_from_measure(nu, w), pt.A) < 1e-4);
        }
    }
    SUBCASE("custom density: extrapolated boundary values") {
        const RelaxationKernel k = custom_measure_kernel(quasilinear_measure(1.0, -0.5, 0.0, 3.0));
        const Medium m(1.0, 1.0);
        const SpectralMeasure nu = extract_measure(m, k, log_grid(1e-3, 1e8, 221));
        for (double w : log_grid(0.1, 1e3, 9)) {
            const CurvePoint pt = evaluate(m, k, w);
            CHECK(rel(attenuation_from_measure(nu, w), pt.A) < 1e-3);
        }
    }
}

TEST_CASE("extract_measure input checks") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(extract_measure(kWater, zero_kernel(), one), DomainError);
    const std::vector<double> unsorted{2.0, 1.0};
    CHECK_THROWS_AS(extract_measure(kWater, zero_kernel(), unsorted), DomainError);
}

TEST_CASE("Prony saturation constant") {
    const Medium unit(1.0, 1.0);
    const RelaxationKernel pr = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    CHECK(prony_saturation(unit, pr) == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(rel(evaluate(unit, pr, 1e4).A, 0.3125) < 1e-2);
    CHECK(prony_saturation(unit, zero_kernel()) == 0.0);
    const RelaxationKernel single = prony_kernel({{1.0, 1.0}});
    CHECK(prony_saturation(unit, single) == doctest::Approx(std::pow(2.0, -1.5) / 2.0).epsilon(1e-15));
    CHECK(rel(evaluate(unit, single, 1e4).A, 0.17678) < 1e-2);
    CHECK_THROWS_AS(prony_saturation(kWater, water_cole_cole(0.5)), DomainError);
    CHECK_THROWS_AS(prony_saturation(unit, constant_q_kernel(1.0, 1.0, 0.5)), DomainError);
}

TEST_CASE("kappa is a complete Bernstein function for every family") {
    const Medium unit(1.0, 1.0);
    const std::vector<RelaxationKernel> kernels{
        prony_kernel({{2.0, 1.0}, {1.0, 3.0}}), cole_cole_kernel(1.0, 0.5, 1.0, 0.5),
        constant_q_kernel(0.5, 1.0, 0.5), newtonian_kernel(0.1),
        custom_measure_kernel(quasilinear_measure(1.0, -0.5, 0.0, 3.0))};
    for (const RelaxationKernel& k : kernels) {
        CAPTURE(to_string(k.family()));
        CHECK(check_pick_property([&](cd p) { return kappa(unit, k, p); }, 1.0).pass);
        for (double p : {1e-3, 1.0, 1e3}) {
            CHECK(kappa(unit, k, p).real() >= 0.0);
        }
    }
}

TEST_CASE("D/w tends to 1/Cinf - 1/C0 at low frequency") {
    const Medium unit(1.0, 1.0);
    const RelaxationKernel pr = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    CHECK(rel(low_frequency_dispersion_limit(unit, pr), 1.0 - 0.5) < 1e-6);
    const RelaxationKernel cc = water_cole_cole(0.5);
    const double expected = 1.0 / 1500.0 - 1.0 / wavefront_speed(kWater, cc);
    CHECK(rel(low_frequency_dispersion_limit(kWater, cc), expected) < 1e-6);
}

TEST_CASE("attenuation is sublinear") {
    const RelaxationKernel cc = water_cole_cole(0.5);
    double prev = std::numeric_limits<double>::infinity();
    for (double w : log_grid(1e13, 1e25, 13)) {
        const double r = evaluate(kWater, cc, w).A / w;
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 1e-9);
}

TEST_CASE("constant-Q scale invariance") {
    const Medium unit(1.0, 1.0);
    for (double alpha : {0.2, 0.5, 0.8}) {
        CAPTURE(alpha);
        const RelaxationKernel k = constant_q_kernel(0.5, 1.0, alpha);
        // At large w kappa ~ p^(1 - alpha/2) / sqrt(A tau^alpha).
        const double s = 10.0;
        const double w = 1e50;
        const double ratio = evaluate(unit, k, s * w).A / evaluate(unit, k, w).A;
        CHECK(ratio == doctest::Approx(std::pow(s, 1.0 - alpha / 2.0)).epsilon(1e-3));
        const double cslope = std::log(evaluate(unit, k, s * w).c / evaluate(unit, k, w).c) / std::log(s);
        CHECK(cslope == doctest::Approx(alpha / 2.0).epsilon(1e-3));
    }
}

TEST_CASE("kappa_boundary_value approaches the cut from above") {
    const Medium unit(1.0, 1.0);
    const RelaxationKernel nk = newtonian_kernel(1.0);
    // For r > bigK/N the boundary value is purely imaginary with positive imaginary part.
    const cd k = kappa_boundary_value(unit, nk, 4.0);
    CHECK(std::abs(k.real()) < 1e-12);
    CHECK(k.imag() == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(kappa_boundary_value(unit, nk, -1.0), DomainError);
}

}  // TEST_SUITE
