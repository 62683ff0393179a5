#include "dsl/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsl {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field, "invalid config: " + field + ": " + msg);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> nu(static_cast<std::size_t>(points));
  const double h = step();
  for (int i = 0; i < points; ++i) nu[static_cast<std::size_t>(i)] = nu_min + h * i;
  nu.back() = nu_max;
  return nu;
}

void ModelConfig::validate() const {
  if (!(gamma > 0.0)) fail("gamma", "must be > 0, got " + num(gamma));
  if (!(kappa >= 0.0)) fail("kappa", "must be >= 0, got " + num(kappa));
  if (!(g > 0.0)) fail("g", "must be > 0, got " + num(g));
  if (phi_override) {
    const double phi = *phi_override;
    if (!(phi > 0.0 && phi < kHalfPi))
      fail("phi", "must lie in the open interval (0, pi/2), got " + num(phi));
  } else if (!(omega0 > 0.0)) {
    fail("omega0", "must be > 0 when phi is not set, got " + num(omega0));
  }
  if (!(gamma_plus_scale >= 0.0))
    fail("gamma_plus_scale", "must be >= 0, got " + num(gamma_plus_scale));
  if (truncation.policy == TruncationPolicy::Fixed) {
    if (truncation.n_max < 1)
      fail("truncation.n_max", "must be >= 1, got " + num(truncation.n_max));
  } else {
    if (!(truncation.tail_eps > 0.0))
      fail("truncation.tail_eps", "must be > 0, got " + num(truncation.tail_eps));
    if (truncation.cap < 8)
      fail("truncation.cap", "must be >= 8, got " + num(truncation.cap));
  }
  if (!(solver_tol > 0.0)) fail("solver_tol", "must be > 0, got " + num(solver_tol));
  if (!(grid.nu_min < grid.nu_max))
    fail("grid", "nu_min must be < nu_max, got [" + num(grid.nu_min) + ", " +
                     num(grid.nu_max) + "]");
  if (grid.points < 2) fail("grid.points", "must be >= 2, got " + num(grid.points));
}

DressedFrame derive_dressed(const ModelConfig& cfg) {
  cfg.validate();

  DressedFrame f;
  f.big_omega = 0.5 * std::hypot(2.0 * cfg.omega0, cfg.delta_a);

  double cos2;  // cos^2(phi)
  if (cfg.phi_override) {
    f.phi = *cfg.phi_override;
    const double c = std::cos(f.phi);
    cos2 = c * c;
  } else {
    // cos^2(phi) = (1 + delta_a / (2*Omega)) / 2
    cos2 = 0.5 * (1.0 + cfg.delta_a / (2.0 * f.big_omega));
    f.phi = std::acos(std::sqrt(cos2));
  }
  const double sin2 = 1.0 - cos2;

  f.g1 = cfg.g * sin2;
  f.gamma0 = cfg.band_flags.u_central ? cfg.gamma * 4.0 * sin2 * cos2 : 0.0;
  f.gamma_minus = cfg.band_flags.u_minus ? cfg.gamma * sin2 * sin2 : 0.0;
  f.gamma_plus =
      cfg.band_flags.u_plus ? cfg.gamma * cos2 * cos2 * cfg.gamma_plus_scale : 0.0;
  f.gamma_c = 0.5 * (f.gamma0 + f.gamma_plus + f.gamma_minus);
  return f;
}

std::vector<std::string> validate_regime(const ModelConfig& cfg,
                                         const DressedFrame& frame) {
  std::vector<std::string> warnings;
  const double two_omega = 2.0 * frame.big_omega;
  const double fast = std::max({cfg.g, cfg.gamma, cfg.kappa});
  if (two_omega < 10.0 * fast) {
    warnings.push_back("secular/RWA regime questionable: 2*Omega = " + num(two_omega) +
                       " < 10*max(g, gamma, kappa) = " + num(10.0 * fast));
  }
  if (cfg.g <= std::max(cfg.kappa, cfg.gamma)) {
    warnings.push_back("good-cavity regime questionable: g = " + num(cfg.g) +
                       " <= max(kappa, gamma) = " +
                       num(std::max(cfg.kappa, cfg.gamma)));
  }
  return warnings;
}

}  // namespace dsl
