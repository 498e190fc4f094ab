#pragma once

// JSON model configuration, JSON reports and CSV tables. Every JSON document
// written by the library carries "schema_version": 1. Numbers are printed
// with 17 significant digits so identical inputs give identical bytes.

#include <exception>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "viscowave/asymptotics.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/greens.hpp"
#include "viscowave/kernels.hpp"

namespace viscowave::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ModelConfig {
    Medium medium;
    RelaxationKernel kernel;
    json options = json::object();
};

/// Parses {"medium": {...}, "kernel": {...}, "options": {...}}. Schema problems
/// throw ConfigError; constructor preconditions surface unchanged.
ModelConfig parse_config(const json& doc);
ModelConfig load_config(const std::filesystem::path& path);

RelaxationKernel parse_kernel(const json& doc);

/// {"atoms": [[r, m], ...], "density": {...}}; densities are "quasilinear" or "tabulated".
SpectralMeasure parse_measure(const json& doc);
json to_json(const SpectralMeasure& measure);
json to_json(const RelaxationKernel& kernel);

/// Infinite values are written as the strings "inf" / "-inf".
json number(double v);

json to_json(const asymptotics::AsymptoteFit& fit);
json to_json(const asymptotics::WavefrontReport& report);
json to_json(const asymptotics::PaleyWienerResult& result);

/// {"schema_version": 1, "error": {"kind", "message"}}.
json error_json(const std::exception& e);

/// Shortest round-trip-safe representation ("%.17g"); "inf", "-inf", "nan" otherwise.
std::string format_double(double v);

inline constexpr const char* kCurveHeader =
    "omega_rad_per_s,attenuation_neper_per_m,dispersion_rad_per_m,phase_speed_m_per_s,q_factor";
inline constexpr const char* kGreenHeader = "t_s,value";

std::string curve_csv(const dispersion::DispersionCurve& curve);
json curve_metadata(const dispersion::DispersionCurve& curve, const ModelConfig& config);

std::string green_csv(const greens::GreenField& field);
json green_metadata(const greens::GreenField& field);

/// Writes text to a file, throwing Error when the file cannot be opened.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace viscowave::io
