#include "dsl/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dsl {

namespace {

void reject_unknown(const Json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError(where + "." + item.key(),
                        "unknown key '" + item.key() + "' in " + where);
  }
}

double get_num(const Json& j, const std::string& where, const std::string& key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(where + "." + key, key + " must be a number");
  return j.at(key).get<double>();
}

bool get_bool(const Json& j, const std::string& where, const std::string& key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ConfigError(where + "." + key, key + " must be a boolean");
  return j.at(key).get<bool>();
}

ModelConfig figure_preset(double cos2_phi, BandFlags flags, int grid_points) {
  // Presets pin the mixing angle directly; omega0 = 20*gamma keeps the drive
  // deep in the secular regime, and delta_a is the detuning that reproduces
  // cos^2(phi) at that drive strength. Grid densities are chosen so one grid
  // step exceeds the line pulling of overlapping resonances at that pump
  // level.
  ModelConfig cfg;
  cfg.gamma = 1.0;
  cfg.kappa = 0.05;
  cfg.g = 5.0;
  cfg.omega0 = 20.0;
  const double d = 2.0 * cos2_phi - 1.0;
  cfg.delta_a = 2.0 * cfg.omega0 * d / std::sqrt(1.0 - d * d);
  cfg.phi_override = std::acos(std::sqrt(cos2_phi));
  cfg.band_flags = flags;
  cfg.truncation = Truncation{};
  cfg.grid = FrequencyGrid{-3.0 * cfg.g, 3.0 * cfg.g, grid_points};
  return cfg;
}

}  // namespace

ModelConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config", "top-level document must be an object");
  reject_unknown(j, "config", {"model", "numerics", "output"});

  ModelConfig cfg;

  if (j.contains("model")) {
    const Json& m = j.at("model");
    if (!m.is_object()) throw ConfigError("model", "model must be an object");
    reject_unknown(m, "model",
                   {"gamma", "kappa", "g", "omega0", "delta_a", "phi", "band_flags",
                    "gamma_plus_scale"});
    cfg.gamma = get_num(m, "model", "gamma", cfg.gamma);
    cfg.kappa = get_num(m, "model", "kappa", cfg.kappa);
    cfg.g = get_num(m, "model", "g", cfg.g);
    cfg.omega0 = get_num(m, "model", "omega0", cfg.omega0);
    cfg.delta_a = get_num(m, "model", "delta_a", cfg.delta_a);
    if (m.contains("phi")) {
      if (!m.at("phi").is_number())
        throw ConfigError("model.phi", "phi must be a number");
      cfg.phi_override = m.at("phi").get<double>();
    }
    cfg.gamma_plus_scale = get_num(m, "model", "gamma_plus_scale", 1.0);
    if (m.contains("band_flags")) {
      const Json& b = m.at("band_flags");
      if (!b.is_object())
        throw ConfigError("model.band_flags", "band_flags must be an object");
      reject_unknown(b, "model.band_flags", {"u_central", "u_plus", "u_minus"});
      cfg.band_flags.u_central = get_bool(b, "model.band_flags", "u_central", true);
      cfg.band_flags.u_plus = get_bool(b, "model.band_flags", "u_plus", true);
      cfg.band_flags.u_minus = get_bool(b, "model.band_flags", "u_minus", true);
    }
  }

  if (j.contains("numerics")) {
    const Json& n = j.at("numerics");
    if (!n.is_object()) throw ConfigError("numerics", "numerics must be an object");
    reject_unknown(n, "numerics", {"truncation", "solver_tol"});
    cfg.solver_tol = get_num(n, "numerics", "solver_tol", cfg.solver_tol);
    if (n.contains("truncation")) {
      const Json& t = n.at("truncation");
      if (!t.is_object())
        throw ConfigError("numerics.truncation", "truncation must be an object");
      if (!t.contains("policy") || !t.at("policy").is_string())
        throw ConfigError("numerics.truncation.policy",
                          "policy must be 'fixed' or 'adaptive'");
      const std::string policy = t.at("policy").get<std::string>();
      if (policy == "fixed") {
        reject_unknown(t, "numerics.truncation", {"policy", "n_max"});
        cfg.truncation.policy = TruncationPolicy::Fixed;
        cfg.truncation.n_max =
            static_cast<int>(get_num(t, "numerics.truncation", "n_max", 0));
      } else if (policy == "adaptive") {
        reject_unknown(t, "numerics.truncation", {"policy", "tail_eps", "cap"});
        cfg.truncation.policy = TruncationPolicy::Adaptive;
        cfg.truncation.tail_eps =
            get_num(t, "numerics.truncation", "tail_eps", cfg.truncation.tail_eps);
        cfg.truncation.cap = static_cast<int>(
            get_num(t, "numerics.truncation", "cap", cfg.truncation.cap));
      } else {
        throw ConfigError("numerics.truncation.policy",
                          "policy must be 'fixed' or 'adaptive', got '" + policy + "'");
      }
    }
  }

  bool grid_given = false;
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "output must be an object");
    reject_unknown(o, "output", {"grid"});
    if (o.contains("grid")) {
      const Json& gr = o.at("grid");
      if (!gr.is_object()) throw ConfigError("output.grid", "grid must be an object");
      reject_unknown(gr, "output.grid", {"nu_min", "nu_max", "points"});
      cfg.grid.nu_min = get_num(gr, "output.grid", "nu_min", cfg.grid.nu_min);
      cfg.grid.nu_max = get_num(gr, "output.grid", "nu_max", cfg.grid.nu_max);
      cfg.grid.points =
          static_cast<int>(get_num(gr, "output.grid", "points", cfg.grid.points));
      grid_given = true;
    }
  }
  if (!grid_given) cfg.grid = FrequencyGrid{-3.0 * cfg.g, 3.0 * cfg.g, 2001};

  cfg.validate();
  return cfg;
}

Json config_to_json(const ModelConfig& cfg) {
  Json m;
  m["gamma"] = cfg.gamma;
  m["kappa"] = cfg.kappa;
  m["g"] = cfg.g;
  m["omega0"] = cfg.omega0;
  m["delta_a"] = cfg.delta_a;
  if (cfg.phi_override) m["phi"] = *cfg.phi_override;
  m["band_flags"] = Json{{"u_central", cfg.band_flags.u_central},
                         {"u_plus", cfg.band_flags.u_plus},
                         {"u_minus", cfg.band_flags.u_minus}};
  m["gamma_plus_scale"] = cfg.gamma_plus_scale;

  Json t;
  if (cfg.truncation.policy == TruncationPolicy::Fixed) {
    t["policy"] = "fixed";
    t["n_max"] = cfg.truncation.n_max;
  } else {
    t["policy"] = "adaptive";
    t["tail_eps"] = cfg.truncation.tail_eps;
    t["cap"] = cfg.truncation.cap;
  }

  Json j;
  j["model"] = std::move(m);
  j["numerics"] = Json{{"truncation", std::move(t)}, {"solver_tol", cfg.solver_tol}};
  j["output"] = Json{{"grid", Json{{"nu_min", cfg.grid.nu_min},
                                   {"nu_max", cfg.grid.nu_max},
                                   {"points", cfg.grid.points}}}};
  return j;
}

std::vector<std::string> preset_names() {
  return {"fig-low-pump",         "fig-moderate-pump",         "fig-high-pump",
          "fig-bandgap-low-pump", "fig-bandgap-moderate-pump", "fig-bandgap-high-pump"};
}

ModelConfig preset_config(const std::string& name) {
  const BandFlags all{true, true, true};
  const BandFlags gap{true, true, false};
  if (name == "fig-low-pump") return figure_preset(0.08, all, 1001);
  if (name == "fig-moderate-pump") return figure_preset(0.50, all, 2001);
  if (name == "fig-high-pump") return figure_preset(0.90, all, 2001);
  if (name == "fig-bandgap-low-pump") return figure_preset(0.08, gap, 1001);
  if (name == "fig-bandgap-moderate-pump") return figure_preset(0.15, gap, 1201);
  if (name == "fig-bandgap-high-pump") return figure_preset(0.90, gap, 2001);
  throw ConfigError("config", "no such preset: '" + name + "'");
}

ModelConfig load_config(const std::string& arg, std::string* preset_out) {
  if (preset_out) preset_out->clear();
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw ConfigError("config", "cannot read config file: " + arg);
    Json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", "config file is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(j);
  }
  for (const auto& p : preset_names()) {
    if (p == arg) {
      if (preset_out) *preset_out = arg;
      return preset_config(arg);
    }
  }
  throw ConfigError("config", "no such file or preset: '" + arg + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "nu,value\n";
  for (std::size_t i = 0; i < s.nu.size(); ++i) {
    if (!std::isfinite(s.nu[i]) || !std::isfinite(s.values[i]))
      throw NumericalError("spectrum_csv: non-finite value at row " +
                           std::to_string(i) + " of " + to_string(s.kind));
    out += format_double(s.nu[i]);
    out += ',';
    out += format_double(s.values[i]);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("spectrum", "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "nu,value")
    throw ConfigError("spectrum", path.string() + ": expected header 'nu,value'");
  Spectrum s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("spectrum", path.string() + ": malformed row '" + line + "'");
    s.nu.push_back(std::stod(line.substr(0, comma)));
    s.values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (s.nu.size() < 2)
    throw ConfigError("spectrum", path.string() + ": fewer than two rows");
  return s;
}

}  // namespace dsl
