#include "dsl/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dsl {

namespace {

constexpr int kOracleNMaxCap = 30;

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& sink)
      : sink_(sink) {}
  template <typename F>
  auto time(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    const auto t1 = std::chrono::steady_clock::now();
    sink_.emplace_back(name, std::chrono::duration<double, std::milli>(t1 - t0).count());
    return result;
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
};

int ladder_peak_count(const FrequencyGrid& grid, double g1) {
  // Enough rungs that the outer sidebands cover the grid.
  const double span = std::max(std::abs(grid.nu_min), std::abs(grid.nu_max));
  const double r = span / (2.0 * g1);
  const int n = static_cast<int>(std::ceil(r * r)) + 2;
  return std::clamp(n, 2, 64);
}

Json frame_to_json(const DressedFrame& f) {
  return Json{{"phi", f.phi},
              {"big_omega", f.big_omega},
              {"g1", f.g1},
              {"gamma0", f.gamma0},
              {"gamma_plus", f.gamma_plus},
              {"gamma_minus", f.gamma_minus},
              {"gamma_c", f.gamma_c}};
}

}  // namespace

double max_relative_deviation(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double bmax = 0.0;
  for (double v : b) bmax = std::max(bmax, std::abs(v));
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    dev = std::max(dev, bmax > 0.0 ? diff / (std::abs(b[i]) + 1e-12 * bmax) : diff);
  }
  return dev;
}

RunResult run_simulation(const ModelConfig& cfg, const RunOptions& opts) {
  RunResult r;
  r.config = cfg;
  r.frame = derive_dressed(cfg);
  r.warnings = validate_regime(cfg, r.frame);
  r.run_id = content_hash(config_to_json(cfg).dump() + "|" + kVersion);

  StageTimer timer(r.timings_ms);

  if (cfg.truncation.policy == TruncationPolicy::Adaptive) {
    auto outcome = timer.time("steady", [&] {
      return auto_truncate(r.frame, cfg.kappa, cfg.truncation, cfg.solver_tol);
    });
    r.n_max = outcome.n_max;
    r.tail = outcome.tail;
    r.steady = std::move(outcome.steady);
  } else {
    r.n_max = cfg.truncation.n_max;
    r.steady = timer.time("steady", [&] {
      auto gen0 = build_generator(r.frame, cfg.kappa, 0, r.n_max);
      return steady_state(gen0, cfg.solver_tol);
    });
    r.tail = std::abs(r.steady[r.n_max][0]);
  }

  r.stats = photon_statistics(r.steady);

  const auto gen1 = build_generator(r.frame, cfg.kappa, 1, r.n_max);
  r.cavity = timer.time("cavity_spectrum", [&] {
    return cavity_spectrum(r.steady, gen1, cfg.grid, cfg.solver_tol);
  });
  r.fluor_lower = timer.time("fluor_lower_spectrum", [&] {
    return fluor_lower_spectrum(r.steady, gen1, r.frame, cfg.grid, cfg.solver_tol);
  });

  r.ladder = timer.time("ladder", [&] {
    auto pred = peak_table(r.frame, cfg.kappa, ladder_peak_count(cfg.grid, r.frame.g1));
    try {
      pred.populations = ladder_populations(r.frame, cfg.kappa, r.n_max + 1);
    } catch (const NumericalError&) {
      pred.populations.clear();  // non-normalizable analytic ladder
    }
    return pred;
  });
  r.ladder_numeric = ladder_populations_numeric(r.steady);

  if (opts.with_oracle) {
    if (r.n_max > kOracleNMaxCap)
      throw ConfigError("oracle",
                        "oracle path is limited to n_max <= " +
                            std::to_string(kOracleNMaxCap) + ", resolved n_max = " +
                            std::to_string(r.n_max) +
                            "; use a fixed truncation or a smaller regime");
    r.oracle = timer.time("oracle", [&] {
      OracleResults o;
      const auto L = build_liouvillian(r.frame, cfg.kappa, r.n_max);
      const auto rho = oracle_steady_state(L);
      o.cavity = oracle_spectrum(L, rho, SpectrumKind::Cavity, cfg.grid);
      o.fluor_lower = oracle_spectrum(L, rho, SpectrumKind::FluorLower, cfg.grid);
      o.fluor_central = oracle_spectrum(L, rho, SpectrumKind::FluorCentral, cfg.grid);
      o.fluor_upper = oracle_spectrum(L, rho, SpectrumKind::FluorUpper, cfg.grid);
      o.mean_a = oracle_mean_a(L, rho);
      o.max_rel_dev_cavity = max_relative_deviation(r.cavity.values, o.cavity.values);
      o.max_rel_dev_fluor_lower =
          max_relative_deviation(r.fluor_lower.values, o.fluor_lower.values);
      return o;
    });
  }

  return r;
}

std::vector<std::string> write_run_outputs(const RunResult& r,
                                           const std::filesystem::path& out_dir,
                                           const std::string& preset) {
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<std::string, std::string>> files;  // name, bytes
  files.emplace_back("cavity.csv", spectrum_csv(r.cavity));
  files.emplace_back("fluor_lower.csv", spectrum_csv(r.fluor_lower));

  Json stats;
  stats["run_id"] = r.run_id;
  stats["mean_n"] = r.stats.mean_n;
  stats["mandel_q"] = r.stats.mandel_q;
  stats["mean_a"] = r.stats.mean_a;
  stats["p_n"] = r.stats.p_n;
  files.emplace_back("stats.json", stats.dump(2) + "\n");

  Json ladder;
  ladder["run_id"] = r.run_id;
  ladder["g1"] = r.frame.g1;
  Json peaks = Json::array();
  for (const auto& p : r.ladder.peaks) {
    peaks.push_back(Json{{"nu", p.nu},
                         {"kind", p.inner ? "inner" : "outer"},
                         {"n", p.n},
                         {"rate_gamma_plus", p.rate_gamma_plus},
                         {"rate_gamma_minus", p.rate_gamma_minus},
                         {"rate_kappa", p.rate_kappa}});
  }
  ladder["peaks"] = std::move(peaks);
  ladder["populations_analytic"] = r.ladder.populations;
  ladder["populations_numeric"] = Json{{"pi0", r.ladder_numeric.pi0},
                                       {"plus", r.ladder_numeric.plus},
                                       {"minus", r.ladder_numeric.minus}};
  files.emplace_back("ladder.json", ladder.dump(2) + "\n");

  if (r.oracle) {
    files.emplace_back("oracle_cavity.csv", spectrum_csv(r.oracle->cavity));
    files.emplace_back("oracle_fluor_lower.csv", spectrum_csv(r.oracle->fluor_lower));
    files.emplace_back("oracle_fluor_central.csv",
                       spectrum_csv(r.oracle->fluor_central));
    files.emplace_back("oracle_fluor_upper.csv", spectrum_csv(r.oracle->fluor_upper));
    Json cmp;
    cmp["run_id"] = r.run_id;
    cmp["max_rel_dev"] = Json{{"cavity", r.oracle->max_rel_dev_cavity},
                              {"fluor_lower", r.oracle->max_rel_dev_fluor_lower}};
    cmp["oracle_mean_a"] = r.oracle->mean_a;
    files.emplace_back("comparison.json", cmp.dump(2) + "\n");
  }

  Json manifest;
  manifest["run_id"] = r.run_id;
  manifest["version"] = kVersion;
  if (!preset.empty()) {
    manifest["preset"] = preset;
    manifest["preset_note"] =
        "preset pins the mixing angle phi; omega0 = 20*gamma and delta_a are "
        "the drive parameters reproducing that angle";
  }
  manifest["config"] = config_to_json(r.config);
  manifest["frame"] = frame_to_json(r.frame);
  manifest["warnings"] = r.warnings;
  manifest["n_max"] = r.n_max;
  manifest["tail_mass"] = r.tail;
  Json timings;
  for (const auto& [name, ms] : r.timings_ms) timings[name] = ms;
  manifest["timings_ms"] = std::move(timings);
  Json hashes;
  for (const auto& [name, bytes] : files) hashes[name] = content_hash(bytes);
  manifest["files"] = std::move(hashes);

  std::vector<std::string> written;
  for (const auto& [name, bytes] : files) {
    write_file_atomic(out_dir / name, bytes);
    written.push_back(name);
  }
  write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  written.push_back("manifest.json");
  return written;
}

}  // namespace dsl
