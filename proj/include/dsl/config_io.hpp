#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsl/params.hpp"
#include "dsl/spectra.hpp"

namespace dsl {

using Json = nlohmann::ordered_json;

/// Strict parse of the {model, numerics, output} document; unknown keys are
/// hard errors. Missing output.grid defaults to [-3g, 3g] with 2001 points.
ModelConfig config_from_json(const Json& j);

/// Canonical echo (stable key order); the run id hashes this.
Json config_to_json(const ModelConfig& cfg);

std::vector<std::string> preset_names();
ModelConfig preset_config(const std::string& name);

/// Loads `arg` as a config file when it exists on disk, otherwise as a preset
/// name. On success *preset_out holds the preset name (empty for files).
ModelConfig load_config(const std::string& arg, std::string* preset_out);

/// 12-significant-digit decimal formatting used by every CSV payload.
std::string format_double(double v);

/// FNV-1a 64-bit hex digest; pairs emitted files with their manifest.
std::string content_hash(const std::string& bytes);

/// CSV payload `nu,value` with LF endings; throws NumericalError on any
/// non-finite value.
std::string spectrum_csv(const Spectrum& s);

/// Temp-and-rename write.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Reads a `nu,value` CSV back (for the peaks command).
Spectrum read_spectrum_csv(const std::filesystem::path& path);

}  // namespace dsl
