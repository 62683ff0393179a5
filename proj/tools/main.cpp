#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "dsl/pipeline.hpp"

namespace {

using dsl::Json;

void print_run_summary(const dsl::RunResult& r, const std::string& out_dir,
                       const std::vector<std::string>& files) {
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "phi = " << r.frame.phi << ", g1 = " << r.frame.g1
            << ", gamma+ = " << r.frame.gamma_plus
            << ", gamma- = " << r.frame.gamma_minus
            << ", gamma0 = " << r.frame.gamma0 << "\n";
  std::cout << "n_max = " << r.n_max << " (tail " << r.tail << "), <n> = "
            << r.stats.mean_n << ", Q = " << r.stats.mandel_q << "\n";
  if (r.oracle) {
    std::cout << "oracle max relative deviation: cavity "
              << r.oracle->max_rel_dev_cavity << ", fluor_lower "
              << r.oracle->max_rel_dev_fluor_lower << ", |<a>| = "
              << r.oracle->mean_a << "\n";
  }
  std::cout << "wrote " << out_dir << "/{";
  for (std::size_t i = 0; i < files.size(); ++i)
    std::cout << files[i] << (i + 1 < files.size() ? "," : "");
  std::cout << "}\n";
}

int cmd_run(const std::string& config_arg, const std::string& out_dir,
            bool with_oracle) {
  std::string preset;
  dsl::ModelConfig cfg = dsl::load_config(config_arg, &preset);
  dsl::RunOptions opts;
  opts.with_oracle = with_oracle;
  opts.preset = preset;
  dsl::RunResult r = dsl::run_simulation(cfg, opts);
  const auto files = dsl::write_run_outputs(r, out_dir, preset);
  print_run_summary(r, out_dir, files);
  return 0;
}

dsl::ModelConfig apply_axis(dsl::ModelConfig cfg, const std::string& axis,
                            double value) {
  if (axis == "delta_a") {
    cfg.delta_a = value;
    cfg.phi_override.reset();  // the detuning defines the angle again
  } else if (axis == "phi") {
    cfg.phi_override = value;
  } else if (axis == "gamma_plus_scale") {
    cfg.gamma_plus_scale = value;
  } else if (axis == "kappa") {
    cfg.kappa = value;
  } else if (axis == "g") {
    cfg.g = value;
  } else {
    throw dsl::ConfigError("axis", "axis must be one of delta_a, phi, "
                                   "gamma_plus_scale, kappa, g; got '" +
                                       axis + "'");
  }
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw dsl::ConfigError("values", "not a number: '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v))
      throw dsl::ConfigError("values", "values must be finite numbers, got '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw dsl::ConfigError("values", "empty values list");
  return values;
}

int cmd_sweep(const std::string& config_arg, const std::string& axis,
              const std::string& values_arg, const std::string& out_dir) {
  std::string preset;
  const dsl::ModelConfig base = dsl::load_config(config_arg, &preset);
  const std::vector<double> values = parse_values(values_arg);
  apply_axis(base, axis, values.front());  // validate the axis name up front

  Json summary;
  summary["axis"] = axis;
  summary["version"] = dsl::kVersion;
  Json rows = Json::array();
  int failures = 0;

  for (std::size_t i = 0; i < values.size(); ++i) {
    char sub[32];
    std::snprintf(sub, sizeof(sub), "val-%03zu", i);
    const std::filesystem::path dir = std::filesystem::path(out_dir) / sub;
    Json row;
    row["value"] = values[i];
    row["dir"] = sub;
    try {
      dsl::ModelConfig cfg = apply_axis(base, axis, values[i]);
      dsl::RunOptions opts;
      opts.preset = preset;
      dsl::RunResult r = dsl::run_simulation(cfg, opts);
      dsl::write_run_outputs(r, dir, preset);
      const auto peaks = dsl::find_peaks(r.cavity);
      row["status"] = "ok";
      row["mean_n"] = r.stats.mean_n;
      row["mandel_q"] = r.stats.mandel_q;
      row["cavity_peak_count"] = peaks.size();
      row["fluor_peak_count"] = dsl::find_peaks(r.fluor_lower).size();
      if (!peaks.empty()) {
        const auto dominant =
            *std::max_element(peaks.begin(), peaks.end(),
                              [](const dsl::Peak& a, const dsl::Peak& b) {
                                return a.value < b.value;
                              });
        row["dominant_peak_nu"] = dominant.nu;
        const auto width = dsl::peak_fwhm(r.cavity, dominant);
        row["dominant_peak_fwhm"] = width ? Json(*width) : Json(nullptr);
      }
    } catch (const std::exception& e) {
      ++failures;
      row["status"] = std::string("failed: ") + e.what();
    }
    rows.push_back(std::move(row));
    std::cout << axis << " = " << values[i] << ": "
              << rows.back()["status"].get<std::string>() << "\n";
  }

  summary["partial_failure"] = failures > 0;
  summary["runs"] = std::move(rows);
  std::filesystem::create_directories(out_dir);
  dsl::write_file_atomic(std::filesystem::path(out_dir) / "summary.json",
                         summary.dump(2) + "\n");
  std::cout << "wrote " << out_dir << "/summary.json\n";

  if (failures == static_cast<int>(values.size())) {
    std::cerr << "all sweep points failed\n";
    return 3;
  }
  return 0;
}

int cmd_peaks(const std::string& spectrum_path, const std::string& ladder_path) {
  namespace fs = std::filesystem;

  dsl::Spectrum spec = dsl::read_spectrum_csv(spectrum_path);

  std::ifstream lf(ladder_path);
  if (!lf) throw dsl::ConfigError("ladder", "cannot read " + ladder_path);
  Json ladder;
  try {
    lf >> ladder;
  } catch (const nlohmann::json::exception& e) {
    throw dsl::ConfigError("ladder", "ladder.json is not valid JSON: " +
                                         std::string(e.what()));
  }

  // Both inputs must come from the same manifest: the manifest sits next to
  // the spectrum, records the CSV's content hash, and shares the run id with
  // ladder.json.
  const fs::path manifest_path = fs::path(spectrum_path).parent_path() / "manifest.json";
  std::ifstream mf(manifest_path);
  if (!mf)
    throw dsl::ConfigError("manifest", "no manifest.json next to " + spectrum_path);
  Json manifest;
  mf >> manifest;

  std::ifstream raw(spectrum_path, std::ios::binary);
  std::stringstream bytes;
  bytes << raw.rdbuf();
  const std::string name = fs::path(spectrum_path).filename().string();
  if (!manifest.contains("files") || !manifest["files"].contains(name) ||
      manifest["files"][name] != dsl::content_hash(bytes.str()))
    throw dsl::ConfigError("manifest",
                           name + " does not match the manifest in its directory");
  if (!ladder.contains("run_id") || ladder["run_id"] != manifest["run_id"])
    throw dsl::ConfigError("manifest",
                           "ladder.json comes from a different run than " + name);

  struct Pred {
    double nu;
    std::string label;
  };
  std::vector<Pred> preds;
  for (const auto& p : ladder["peaks"]) {
    std::ostringstream label;
    label << "nu_" << p["n"].get<int>() << (p["kind"] == "inner" ? "^(-)" : "^(+)");
    preds.push_back({p["nu"].get<double>(), label.str()});
  }

  const double step = spec.nu[1] - spec.nu[0];
  const auto detected = dsl::find_peaks(spec);
  int matched = 0, unmatched = 0;
  std::cout << "grid step " << step << ", detected " << detected.size()
            << " peaks above 1% of maximum\n";
  for (const auto& d : detected) {
    const Pred* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& p : preds) {
      const double dist = std::abs(d.nu - p.nu);
      if (dist < best_dist) {
        best_dist = dist;
        best = &p;
      }
    }
    const bool near_zero = std::abs(d.nu) <= step;
    if (best && best_dist <= step) {
      ++matched;
      std::cout << "peak nu = " << d.nu << " (value " << d.value << "): matched "
                << best->label << " at " << best->nu << ", offset "
                << best_dist / step << " grid steps";
      if (near_zero && best->label.find("^(-)") != std::string::npos &&
          best->nu != 0.0)
        std::cout << " [lasing line: merged inner sidebands]";
      std::cout << "\n";
    } else if (near_zero) {
      ++matched;
      std::cout << "peak nu = " << d.nu << " (value " << d.value
                << "): lasing line (merged inner sidebands)\n";
    } else {
      ++unmatched;
      std::cout << "peak nu = " << d.nu << " (value " << d.value
                << "): unmatched (nearest " << (best ? best->label : "none")
                << ", offset " << best_dist / step << " grid steps)\n";
    }
  }
  std::cout << matched << " matched, " << unmatched << " unmatched\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-atom dressed-state laser simulator (band-gap reservoir)"};
  app.require_subcommand(1);

  std::string config_arg, out_dir = "out", axis, values_arg;
  std::string spectrum_path, ladder_path;
  bool with_oracle = false;

  auto* run = app.add_subcommand("run", "compute spectra and statistics for a config");
  run->add_option("config", config_arg, "config JSON path or preset name")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_flag("--oracle", with_oracle,
                "also run the dense-Liouvillian oracle and emit a comparison");

  auto* sweep = app.add_subcommand("sweep", "repeat a run along one parameter axis");
  sweep->add_option("config", config_arg, "config JSON path or preset name")->required();
  sweep->add_option("--axis", axis, "delta_a | phi | gamma_plus_scale | kappa | g")
      ->required();
  sweep->add_option("--values", values_arg, "comma-separated list")->required();
  sweep->add_option("--out", out_dir, "output directory (default: out)");

  auto* peaks = app.add_subcommand("peaks", "match spectrum peaks against ladder predictions");
  peaks->add_option("spectrum", spectrum_path, "spectrum CSV from a run")->required();
  peaks->add_option("ladder", ladder_path, "ladder.json from the same run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_arg, out_dir, with_oracle);
    if (sweep->parsed()) return cmd_sweep(config_arg, axis, values_arg, out_dir);
    if (peaks->parsed()) return cmd_peaks(spectrum_path, ladder_path);
  } catch (const dsl::ConfigError& e) {
    std::cerr << "config error [" << e.field << "]: " << e.what() << "\n";
    return 2;
  } catch (const dsl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
