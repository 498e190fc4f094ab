#include "viscowave/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "viscowave/error.hpp"

namespace viscowave::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const json& require_object(const json& doc, const std::string& where) {
    if (!doc.is_object()) {
        throw ConfigError(where + ": expected a JSON object");
    }
    return doc;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + ": unknown field '" + it.key() + "'");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing field '" + key + "'");
    }
    const json& v = obj.at(key);
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") {
            return kInf;
        }
    }
    throw ConfigError(where + ": field '" + key + "' must be a number");
}

double get_number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
    return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

std::vector<double> get_array(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
        throw ConfigError(where + ": field '" + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number()) {
            throw ConfigError(where + ": field '" + key + "' must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

// [[a, b], ...] pairs.
std::vector<std::pair<double, double>> get_pairs(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
        throw ConfigError(where + ": field '" + key + "' must be an array of [number, number] pairs");
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError(where + ": field '" + key + "' must be an array of [number, number] pairs");
        }
        out.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

SpectralMeasure parse_measure(const json& doc) {
    const std::string where = "measure";
    require_object(doc, where);
    reject_unknown(doc, {"atoms", "density"}, where);
    std::vector<Atom> atoms;
    if (doc.contains("atoms")) {
        for (auto [r, m] : get_pairs(doc, "atoms", where)) {
            atoms.push_back({r, m});
        }
    }
    if (!doc.contains("density") || doc.at("density").is_null()) {
        return SpectralMeasure(std::move(atoms));
    }
    const json& d = require_object(doc.at("density"), "measure.density");
    if (!d.contains("kind") || !d.at("kind").is_string()) {
        throw ConfigError("measure.density: missing string field 'kind' (quasilinear | tabulated)");
    }
    const auto kind = d.at("kind").get<std::string>();
    if (kind == "quasilinear") {
        const std::string w = "measure.density(quasilinear)";
        reject_unknown(d, {"kind", "b", "lambda", "gamma", "support_min"}, w);
        const SpectralMeasure q =
            quasilinear_measure(get_number(d, "b", w), get_number(d, "lambda", w), get_number_or(d, "gamma", 0.0, w),
                                get_number_or(d, "support_min", std::exp(1.0), w));
        return SpectralMeasure(std::move(atoms), *q.density(), q.hints());
    }
    if (kind == "tabulated") {
        const std::string w = "measure.density(tabulated)";
        reject_unknown(d, {"kind", "r", "h"}, w);
        Density td = tabulated_density(get_array(d, "r", w), get_array(d, "h", w));
        const GridHints hints{td.table_r.front(), td.table_r.back()};
        return SpectralMeasure(std::move(atoms), std::move(td), hints);
    }
    throw ConfigError("measure.density: unknown kind '" + kind + "' (expected quasilinear | tabulated)");
}

json to_json(const SpectralMeasure& measure) {
    json out = json::object();
    json atoms = json::array();
    for (const Atom& a : measure.atoms()) {
        atoms.push_back({number(a.rate), number(a.weight)});
    }
    out["atoms"] = atoms;
    if (const Density* d = measure.density()) {
        json dj = json::object();
        dj["kind"] = d->kind;
        for (const auto& [k, v] : d->params) {
            dj[k] = number(v);
        }
        if (!d->table_r.empty()) {
            json r = json::array(), h = json::array();
            for (std::size_t i = 0; i < d->table_r.size(); ++i) {
                r.push_back(number(d->table_r[i]));
                h.push_back(number(d->table_h[i]));
            }
            dj["r"] = r;
            dj["h"] = h;
        }
        dj["support_min"] = number(d->support_min);
        if (d->tail) {
            dj["tail"] = {{"prefactor", number(d->tail->prefactor)},
                          {"exponent", number(d->tail->exponent)},
                          {"log_exponent", number(d->tail->log_exponent)}};
        }
        out["density"] = dj;
    } else {
        out["density"] = nullptr;
    }
    return out;
}

RelaxationKernel parse_kernel(const json& doc) {
    const std::string where = "kernel";
    require_object(doc, where);
    if (!doc.contains("type") || !doc.at("type").is_string()) {
        throw ConfigError("kernel: missing string field 'type'");
    }
    const auto type = doc.at("type").get<std::string>();
    const std::string w = "kernel(" + type + ")";
    switch (family_from_string(type)) {
        case KernelFamily::prony: {
            reject_unknown(doc, {"type", "terms", "static_offset"}, w);
            std::vector<PronyTerm> terms;
            if (doc.contains("terms")) {
                for (auto [lambda, rate] : get_pairs(doc, "terms", w)) {
                    terms.push_back({lambda, rate});
                }
            }
            return prony_kernel(std::move(terms), get_number_or(doc, "static_offset", 0.0, w));
        }
        case KernelFamily::cole_cole:
            reject_unknown(doc, {"type", "M", "a", "tau", "alpha"}, w);
            return cole_cole_kernel(get_number(doc, "M", w), get_number(doc, "a", w), get_number(doc, "tau", w),
                                    get_number(doc, "alpha", w));
        case KernelFamily::constant_q:
            reject_unknown(doc, {"type", "A", "tau", "alpha"}, w);
            return constant_q_kernel(get_number(doc, "A", w), get_number(doc, "tau", w), get_number(doc, "alpha", w));
        case KernelFamily::newtonian:
            reject_unknown(doc, {"type", "N"}, w);
            return newtonian_kernel(get_number(doc, "N", w));
        case KernelFamily::custom_measure:
            reject_unknown(doc, {"type", "measure", "static_offset"}, w);
            if (!doc.contains("measure")) {
                throw ConfigError(w + ": missing field 'measure'");
            }
            return custom_measure_kernel(parse_measure(doc.at("measure")),
                                         get_number_or(doc, "static_offset", 0.0, w));
    }
    throw ConfigError("kernel: unknown type '" + type + "'");
}

json to_json(const RelaxationKernel& kernel) {
    json out = json::object();
    out["type"] = std::string(to_string(kernel.family()));
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PronyParams>) {
                json terms = json::array();
                for (const auto& t : p.terms) {
                    terms.push_back({number(t.lambda), number(t.rate)});
                }
                out["terms"] = terms;
                out["static_offset"] = number(p.static_offset);
            } else if constexpr (std::is_same_v<T, ColeColeParams>) {
                out["M"] = number(p.M);
                out["a"] = number(p.a);
                out["tau"] = number(p.tau);
                out["alpha"] = number(p.alpha);
            } else if constexpr (std::is_same_v<T, ConstantQParams>) {
                out["A"] = number(p.A);
                out["tau"] = number(p.tau);
                out["alpha"] = number(p.alpha);
            } else if constexpr (std::is_same_v<T, NewtonianParams>) {
                out["N"] = number(p.N);
            } else {
                out["measure"] = to_json(p.measure);
                out["static_offset"] = number(p.static_offset);
            }
        },
        kernel.params());
    return out;
}

ModelConfig parse_config(const json& doc) {
    require_object(doc, "config");
    reject_unknown(doc, {"medium", "kernel", "options", "schema_version"}, "config");
    if (!doc.contains("medium")) {
        throw ConfigError("config: missing field 'medium'");
    }
    if (!doc.contains("kernel")) {
        throw ConfigError("config: missing field 'kernel'");
    }
    const json& m = require_object(doc.at("medium"), "medium");
    reject_unknown(m, {"c0", "rho0"}, "medium");
    Medium medium(get_number(m, "c0", "medium"), get_number(m, "rho0", "medium"));
    json options = json::object();
    if (doc.contains("options")) {
        options = require_object(doc.at("options"), "options");
    }
    return ModelConfig{medium, parse_kernel(doc.at("kernel")), options};
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: '" + path.string() + "' is not valid JSON (" + e.what() + ")");
    }
    return parse_config(doc);
}

json to_json(const asymptotics::AsymptoteFit& fit) {
    return {{"window", {number(fit.window.lo), number(fit.window.hi)}},
            {"exponent", number(fit.exponent)},
            {"log_exponent", number(fit.log_exponent)},
            {"prefactor", number(fit.prefactor)},
            {"residual", number(fit.residual)},
            {"samples", fit.samples}};
}

json to_json(const asymptotics::WavefrontReport& report) {
    json out = json::object();
    out["schema_version"] = kSchemaVersion;
    out["C0"] = number(report.C0);
    out["paley_wiener_finite"] = report.paley_wiener_finite;
    out["class"] = std::string(asymptotics::to_string(report.cls));
    json sched = json::array();
    for (const auto& s : report.stepwise_schedule) {
        sched.push_back({{"order", s.order}, {"onset_time", number(s.onset_time)}});
    }
    out["stepwise_schedule"] = sched;
    out["asymptote"] = report.asymptote ? to_json(*report.asymptote) : json(nullptr);
    out["basis"] = report.basis;
    out["note"] = report.note;
    return out;
}

json to_json(const asymptotics::PaleyWienerResult& result) {
    return {{"decision", std::string(asymptotics::to_string(result.decision))},
            {"finite", result.finite()},
            {"analytic", result.analytic},
            {"integral", number(result.integral)},
            {"certificate", result.certificate}};
}

json error_json(const std::exception& e) {
    std::string kind = "error";
    if (const auto* ve = dynamic_cast<const Error*>(&e)) {
        kind = ve->kind();
    }
    json err = {{"kind", kind}, {"message", e.what()}};
    if (const auto* iv = dynamic_cast<const InvariantViolation*>(&e)) {
        err["invariant"] = iv->invariant();
    }
    return {{"schema_version", kSchemaVersion}, {"error", err}};
}

std::string curve_csv(const dispersion::DispersionCurve& curve) {
    std::string out = kCurveHeader;
    out += '\n';
    for (std::size_t i = 0; i < curve.omega.size(); ++i) {
        out += format_double(curve.omega[i]) + ',' + format_double(curve.A[i]) + ',' + format_double(curve.D[i]) +
               ',' + format_double(curve.c[i]) + ',' + format_double(curve.Q[i]) + '\n';
    }
    return out;
}

json curve_metadata(const dispersion::DispersionCurve& curve, const ModelConfig& config) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "dispersion_curve"},
            {"medium", {{"c0", number(config.medium.c0())}, {"rho0", number(config.medium.rho0())}}},
            {"kernel", to_json(config.kernel)},
            {"points", curve.omega.size()},
            {"omega_min", curve.omega.empty() ? json(nullptr) : number(curve.omega.front())},
            {"omega_max", curve.omega.empty() ? json(nullptr) : number(curve.omega.back())},
            {"C0", number(curve.C0)},
            {"Cinf", number(curve.Cinf)},
            {"B", number(curve.B)},
            {"units",
             {{"omega", "rad/s"},
              {"attenuation", "neper/m"},
              {"dispersion", "rad/m"},
              {"phase_speed", "m/s"},
              {"q_factor", "1"}}}};
}

std::string green_csv(const greens::GreenField& field) {
    std::string out = kGreenHeader;
    out += '\n';
    for (std::size_t i = 0; i < field.t.size(); ++i) {
        out += format_double(field.t[i]) + ',' + format_double(field.values[i]) + '\n';
    }
    return out;
}

json green_metadata(const greens::GreenField& field) {
    const auto& m = field.meta;
    return {{"schema_version", kSchemaVersion},
            {"kind", "green_field"},
            {"dim", field.dim},
            {field.dim == 1 ? "x" : "r", number(field.position)},
            {"sigma_s", number(field.sigma_s)},
            {"nt", field.t.size()},
            {"t_max", field.t.empty() ? json(nullptr) : number(field.t.back())},
            {"C0", number(m.C0)},
            {"predicted_arrival", number(m.predicted_arrival)},
            {"omega_max", number(m.omega_max)},
            {"contour_shift", number(m.contour_shift)},
            {"fft_period", number(m.fft_period)},
            {"fft_step", number(m.fft_step)},
            {"fft_size", m.fft_size},
            {"imag_residue", number(m.imag_residue)},
            {"aliasing_change", number(m.aliasing_change)},
            {"crosscheck", number(m.crosscheck)},
            {"time_order", m.time_order},
            {"space_order", m.space_order}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

}  // namespace viscowave::io
