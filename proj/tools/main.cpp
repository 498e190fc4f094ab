// viscowave command-line front end.
//
//   viscowave curves   --config model.json [--omega-min F --omega-max F --points N --log --hz] --out curve.csv
//   viscowave classify --config model.json
//   viscowave green    --config model.json --dim {1,3} --x F --t-max F --nt N [--sigma-s F --hz] --out field.csv
//   viscowave validate --config model.json
//   viscowave ml ALPHA X
//
// Structured output is JSON, tables are CSV. Failures print
// {"schema_version": 1, "error": {...}} on stderr and exit nonzero.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "viscowave/asymptotics.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/greens.hpp"
#include "viscowave/mlf.hpp"
#include "viscowave/serialization.hpp"
#include "viscowave/validation.hpp"

namespace {

using namespace viscowave;
using io::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Args {
    std::string config;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::optional<std::size_t> points;
    bool log_grid = true;
    bool hz = false;
    int dim = 1;
    std::optional<double> x;
    std::optional<double> t_max;
    std::optional<std::size_t> nt;
    std::optional<double> sigma_s;
    std::string out;
    double alpha = 0.0;
    double ml_x = 0.0;
};

// Numeric option from the command line, else from config "options", else the fallback.
template <class T>
T pick(const std::optional<T>& flag, const json& options, const char* key, T fallback) {
    if (flag) {
        return *flag;
    }
    if (options.contains(key) && options.at(key).is_number()) {
        return options.at(key).get<T>();
    }
    return fallback;
}

void emit(const std::string& out_path, const std::string& text, const json& meta) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    io::write_text(out_path, text);
    io::write_text(out_path + ".json", meta.dump(2) + "\n");
}

int cmd_curves(const Args& a) {
    const io::ModelConfig cfg = io::load_config(a.config);
    const double tau = dispersion::characteristic_time(cfg.medium, cfg.kernel);
    const double scale = a.hz ? kTwoPi : 1.0;
    const double lo = pick(a.omega_min, cfg.options, "omega_min", 1e-6 / tau / scale) * scale;
    const double hi = pick(a.omega_max, cfg.options, "omega_max", 1e6 / tau / scale) * scale;
    const std::size_t n = pick(a.points, cfg.options, "points", std::size_t{200});
    if (n < 16) {
        throw DomainError("curves: --points must be >= 16");
    }
    const auto grid = dispersion::log_grid(lo, hi, n);
    const auto curve = dispersion::curve(cfg.medium, cfg.kernel, grid);
    emit(a.out, io::curve_csv(curve), io::curve_metadata(curve, cfg));
    return 0;
}

int cmd_classify(const Args& a) {
    const io::ModelConfig cfg = io::load_config(a.config);
    const auto rep = asymptotics::classify_wavefront(cfg.medium, cfg.kernel);
    std::cout << io::to_json(rep).dump(2) << "\n";
    return rep.cls == asymptotics::WavefrontClass::Indeterminate ? 2 : 0;
}

int cmd_green(const Args& a) {
    const io::ModelConfig cfg = io::load_config(a.config);
    if (a.dim != 1 && a.dim != 3) {
        throw DomainError("green: --dim must be 1 or 3");
    }
    if (!a.x) {
        throw DomainError("green: --x is required");
    }
    const double t_max = pick(a.t_max, cfg.options, "t_max", 0.0);
    const std::size_t nt = pick(a.nt, cfg.options, "nt", std::size_t{1001});
    if (!(t_max > 0.0)) {
        throw DomainError("green: --t-max must be > 0");
    }
    const double sigma = pick(a.sigma_s, cfg.options, "sigma_s", 0.0) * (a.hz ? kTwoPi : 1.0);
    const auto t = greens::uniform_grid(t_max, nt);
    const auto field = a.dim == 1 ? greens::green_1d(cfg.medium, cfg.kernel, *a.x, t, sigma)
                                  : greens::green_3d(cfg.medium, cfg.kernel, *a.x, t, sigma);
    emit(a.out, io::green_csv(field), io::green_metadata(field));
    return 0;
}

int cmd_validate(const Args& a) {
    validation::Report rep;
    std::optional<io::ModelConfig> cfg;
    try {
        cfg.emplace(io::load_config(a.config));
    } catch (const InvalidParameter& e) {
        rep = validation::construction_failure(e.what());
    }
    if (cfg) {
        rep = validation::run_suite(cfg->medium, cfg->kernel);
    }
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"skipped", c.skipped}, {"detail", c.detail}});
    }
    const json out = {{"schema_version", io::kSchemaVersion}, {"pass", rep.pass()}, {"checks", checks}};
    std::cout << out.dump(2) << "\n";
    return rep.pass() ? 0 : 1;
}

int cmd_ml(const Args& a) {
    const double v = mlf::ml_neg_power(a.alpha, a.ml_x);
    std::cout << io::format_double(v) << "\n";
    return 0;
}

void report_error(const std::exception& e) {
    std::cerr << io::error_json(e).dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscowave: dispersion, attenuation and Green's functions of viscoelastic pressure waves"};
    app.require_subcommand(1);
    Args a;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", a.config, "Model configuration (JSON)")->required();
    };

    auto* curves = app.add_subcommand("curves", "Attenuation, dispersion, phase speed and Q on a log grid");
    add_config(curves);
    curves->add_option("--omega-min", a.omega_min, "Lowest angular frequency (rad/s)");
    curves->add_option("--omega-max", a.omega_max, "Highest angular frequency (rad/s)");
    curves->add_option("--points", a.points, "Number of grid points (>= 16)");
    curves->add_flag("--log", a.log_grid, "Log-spaced grid (default)");
    curves->add_flag("--hz", a.hz, "Read --omega-min/--omega-max in Hz");
    curves->add_option("--out", a.out, "CSV output path (metadata goes to PATH.json)");

    auto* classify = app.add_subcommand("classify", "Wavefront regularity report (JSON)");
    add_config(classify);

    auto* green = app.add_subcommand("green", "Green's function synthesis");
    add_config(green);
    green->add_option("--dim", a.dim, "Dimension (1 or 3)")->check(CLI::IsMember({1, 3}));
    green->add_option("--x", a.x, "Position x (1-D) or radius r (3-D), m");
    green->add_option("--t-max", a.t_max, "Last time sample (s)");
    green->add_option("--nt", a.nt, "Number of time samples");
    green->add_option("--sigma-s", a.sigma_s, "Source spectral width (rad/s, 0 = raw)");
    green->add_flag("--hz", a.hz, "Read --sigma-s in Hz");
    green->add_option("--out", a.out, "CSV output path (metadata goes to PATH.json)");

    auto* validate = app.add_subcommand("validate", "Run the invariant suites (JSON report)");
    add_config(validate);

    auto* ml = app.add_subcommand("ml", "Mittag-Leffler relaxation E_alpha(-x^alpha)");
    ml->add_option("ALPHA", a.alpha, "Order, 0 < alpha <= 1")->required();
    ml->add_option("X", a.ml_x, "Argument x >= 0")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*curves) {
            return cmd_curves(a);
        }
        if (*classify) {
            return cmd_classify(a);
        }
        if (*green) {
            return cmd_green(a);
        }
        if (*validate) {
            return cmd_validate(a);
        }
        if (*ml) {
            return cmd_ml(a);
        }
    } catch (const std::exception& e) {
        report_error(e);
        return 1;
    }
    return 1;
}
