// Runs the viscowave binary (path injected at build time) and inspects its
// output and exit status.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
    std::string out;
    int status = -1;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(VISCOWAVE_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string config(const std::string& name) { return std::string(VISCOWAVE_CONFIGS) + "/" + name; }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ml prints the relaxation function") {
    Run r = run("ml 1 1");
    CHECK(r.status == 0);
    CHECK(std::abs(std::stod(r.out) - 0.3678794) < 1e-7);
    r = run("ml 0.5 1");
    CHECK(std::abs(std::stod(r.out) - 0.4275836) < 1e-7);
    r = run("ml 0.3 0");
    CHECK(std::stod(r.out) == 1.0);
}

TEST_CASE("ml reports domain errors as JSON") {
    const Run r = run("ml 0.5 -1");
    CHECK(r.status != 0);
    const json j = json::parse(r.out);
    CHECK(j.at("error").at("kind") == "domain_error");
    CHECK(j.at("schema_version") == 1);
}

TEST_CASE("classify reports the wavefront class") {
    struct Case {
        const char* file;
        const char* cls;
    };
    for (const Case c : {Case{"constant_q.json", "NoWavefront"}, Case{"prony.json", "DiscontinuityAdmitting"},
                         Case{"cole_cole_alpha05.json", "SmoothWavefront"}, Case{"newtonian.json", "NoWavefront"},
                         Case{"custom_log_attenuation.json", "StepwiseRegularizing"}}) {
        CAPTURE(c.file);
        const Run r = run("classify --config " + config(c.file));
        CHECK(r.status == 0);
        const json j = json::parse(r.out);
        CHECK(j.at("class") == c.cls);
    }
}

TEST_CASE("validate passes good models and fails corrupted ones") {
    Run r = run("validate --config " + config("prony.json"));
    CHECK(r.status == 0);
    CHECK(json::parse(r.out).at("pass") == true);
    r = run("validate --config " + config("corrupted_negative_weight.json"));
    CHECK(r.status == 1);
    const json j = json::parse(r.out);
    CHECK(j.at("pass") == false);
    bool named = false;
    for (const json& c : j.at("checks")) {
        named = named || (c.at("name") == "measure.positive_weights" && c.at("pass") == false);
    }
    CHECK(named);
    r = run("validate --config " + config("quasilinear_condition_violated.json"));
    CHECK(r.status == 1);
}

TEST_CASE("curves writes CSV and a metadata sidecar") {
    const std::string out = "cli_curve_test.csv";
    const Run r = run("curves --config " + config("prony.json") + " --omega-min 0.01 --omega-max 100 --points 32 --out " + out);
    CHECK(r.status == 0);
    std::ifstream csv(out);
    std::stringstream ss;
    ss << csv.rdbuf();
    CHECK(first_line(ss.str()) ==
          "omega_rad_per_s,attenuation_neper_per_m,dispersion_rad_per_m,phase_speed_m_per_s,q_factor");
    std::ifstream meta(out + ".json");
    CHECK(json::parse(meta).at("schema_version") == 1);
    CHECK(run("curves --config " + config("prony.json") + " --points 4").status != 0);
}

TEST_CASE("green writes a time series") {
    const Run r = run("green --config " + config("prony.json") + " --x 1 --t-max 1 --nt 5 --sigma-s 10");
    CHECK(r.status == 0);
    CHECK(first_line(r.out) == "t_s,value");
    CHECK(run("green --config " + config("prony.json") + " --x 1 --t-max 1 --nt 5").status != 0);
    CHECK(run("green --config " + config("prony.json") + " --t-max 1 --nt 5 --sigma-s 10").status != 0);
}

TEST_CASE("output is deterministic") {
    const std::string args = "curves --config " + config("cole_cole_alpha05.json") + " --points 40";
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("configuration errors exit nonzero with an error document") {
    const Run r = run("classify --config " + config("does_not_exist.json"));
    CHECK(r.status == 1);
    CHECK(json::parse(r.out).at("error").at("kind") == "invalid_config");
}

}  // TEST_SUITE
