#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "viscowave/error.hpp"
#include "viscowave/serialization.hpp"

using namespace viscowave;
using io::json;

TEST_SUITE("serialization") {

TEST_CASE("configurations parse into media and kernels") {
    const io::ModelConfig cfg = io::parse_config(json::parse(R"({
        "medium": {"c0": 1500.0, "rho0": 1000.0},
        "kernel": {"type": "cole_cole", "M": 2.25e9, "a": 0.5, "tau": 1e-13, "alpha": 0.5},
        "options": {"points": 64}})"));
    CHECK(cfg.medium.c0() == 1500.0);
    CHECK(cfg.kernel.family() == KernelFamily::cole_cole);
    CHECK(cfg.options.at("points") == 64);
}

TEST_CASE("kernels survive a JSON round trip") {
    const std::vector<RelaxationKernel> kernels{
        prony_kernel({{2.0, 1.0}, {1.0, 3.0}}, 0.25), cole_cole_kernel(2.0, 0.3, 0.1, 0.7),
        constant_q_kernel(0.5, 1.0, 0.6), newtonian_kernel(0.1)};
    for (const RelaxationKernel& k : kernels) {
        CAPTURE(to_string(k.family()));
        const RelaxationKernel back = io::parse_kernel(io::to_json(k));
        CHECK(back.family() == k.family());
        for (std::complex<double> p : {std::complex<double>{1.0, 0.0}, {0.3, -2.0}, {5.0, 7.0}}) {
            CHECK(back.symbol(p) == k.symbol(p));
        }
    }
}

TEST_CASE("schema problems are configuration errors") {
    CHECK_THROWS_AS(io::parse_config(json::parse(R"({"medium": {"c0": 1.0}})")), ConfigError);
    CHECK_THROWS_AS(io::parse_kernel(json::parse(R"({"terms": []})")), ConfigError);
    CHECK_THROWS_AS(io::parse_kernel(json::parse(R"({"type": "prony", "terms": [[1.0, 1.0]], "extra": 1})")),
                    ConfigError);
    CHECK_THROWS_AS(io::parse_measure(json::parse(R"({"density": {"kind": "spline"}})")), ConfigError);
    CHECK_THROWS_AS(io::load_config("/nonexistent/model.json"), ConfigError);
}

TEST_CASE("constructor preconditions surface unchanged") {
    CHECK_THROWS_AS(io::parse_kernel(json::parse(R"({"type": "prony", "terms": [[-1.0, 1.0]]})")), InvalidParameter);
    CHECK_THROWS_AS(
        io::parse_measure(json::parse(
            R"({"density": {"kind": "quasilinear", "b": 1.0, "lambda": 0.0, "gamma": 0.5, "support_min": 3.0}})")),
        InvalidParameter);
}

TEST_CASE("numbers print round-trip safe and infinities as strings") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::number(2.0) == 2.0);
}

TEST_CASE("error documents carry the error kind") {
    const json e = io::error_json(DomainError("bad x"));
    CHECK(e.at("schema_version") == io::kSchemaVersion);
    CHECK(e.at("error").at("kind") == "domain_error");
    CHECK(e.at("error").at("message") == "bad x");
    CHECK(io::error_json(std::runtime_error("plain")).at("error").at("kind") == "error");
}

TEST_CASE("wavefront report fields") {
    const json j = io::to_json(asymptotics::classify_wavefront(Medium(1.0, 1.0), constant_q_kernel(1.0, 1.0, 0.5)));
    CHECK(j.at("class") == "NoWavefront");
    CHECK(j.at("C0") == "inf");
    CHECK(j.at("paley_wiener_finite").is_boolean());
    CHECK(j.at("stepwise_schedule").is_array());
    CHECK(j.at("schema_version") == io::kSchemaVersion);
}

TEST_CASE("curve CSV has the fixed header and one row per frequency") {
    const Medium m(1.0, 1.0);
    const RelaxationKernel k = prony_kernel({{2.0, 1.0}, {1.0, 3.0}});
    const auto curve = dispersion::curve(m, k, dispersion::log_grid(1e-2, 1e2, 20));
    const std::string csv = io::curve_csv(curve);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == io::kCurveHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 20);
    CHECK(io::curve_csv(curve) == csv);
    const json meta = io::curve_metadata(curve, io::ModelConfig{m, k});
    CHECK(meta.at("kind") == "dispersion_curve");
}

TEST_CASE("Green CSV header and metadata") {
    const auto t = greens::uniform_grid(2.0, 11);
    const greens::GreenField f = greens::green_1d(Medium(1.0, 1.0), zero_kernel(), 1.0, t, 20.0);
    const std::string csv = io::green_csv(f);
    CHECK(csv.rfind(std::string(io::kGreenHeader) + "\n", 0) == 0);
    const json meta = io::green_metadata(f);
    CHECK(meta.at("kind") == "green_field");
    CHECK(meta.at("schema_version") == io::kSchemaVersion);
}

}  // TEST_SUITE
