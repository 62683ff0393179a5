#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsl/errors.hpp"

namespace dsl {

/// Values of the band-gap step function u(omega_i - omega_b) at the three
/// dressed transition frequencies: the central line (omega_L) and the upper
/// and lower Rabi sidebands (omega_L +/- 2*Omega). A false flag places that
/// frequency inside the gap, switching the corresponding decay channel off.
struct BandFlags {
  bool u_central = true;
  bool u_plus = true;
  bool u_minus = true;
};

enum class TruncationPolicy { Fixed, Adaptive };

struct Truncation {
  TruncationPolicy policy = TruncationPolicy::Adaptive;
  int n_max = 0;            // Fixed only: Fock-space cap
  double tail_eps = 1e-12;  // Adaptive: accepted steady-state tail population
  int cap = 4096;           // Adaptive: hard cap for the doubling search
};

/// Uniform grid of frequency offsets nu = omega - omega_- (rate units).
struct FrequencyGrid {
  double nu_min = -1.0;
  double nu_max = 1.0;
  int points = 2001;

  double step() const { return (nu_max - nu_min) / (points - 1); }
  std::vector<double> values() const;
};

/// User-facing physical and numerical parameters. All rates and frequencies
/// share one unit system; presets normalize gamma = 1.
struct ModelConfig {
  double gamma = 1.0;   // bare atomic decay rate (reference scale)
  double kappa = 0.0;   // cavity damping rate
  double g = 1.0;       // bare atom-cavity coupling
  double omega0 = 0.0;  // resonant half-Rabi frequency of the drive
  double delta_a = 0.0; // atom-laser detuning

  // Mixing angle in radians; when present it supersedes (omega0, delta_a).
  std::optional<double> phi_override;

  BandFlags band_flags;

  // Diagnostic multiplier on the derived pump rate (sweep axis).
  double gamma_plus_scale = 1.0;

  Truncation truncation;
  double solver_tol = 1e-10;
  FrequencyGrid grid{-3.0, 3.0, 2001};

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Derived dressed-picture quantities consumed by every solver.
struct DressedFrame {
  double phi = 0.0;          // mixing angle
  double big_omega = 0.0;    // Omega; 2*Omega = sqrt(4*omega0^2 + delta_a^2)
  double g1 = 0.0;           // effective coupling g*sin^2(phi)
  double gamma0 = 0.0;       // central dephasing rate
  double gamma_plus = 0.0;   // incoherent pump rate |2~> -> |1~>
  double gamma_minus = 0.0;  // lower-sideband spontaneous rate |1~> -> |2~>
  double gamma_c = 0.0;      // coherence decay rate (gamma0+gamma+ +gamma-)/2
};

DressedFrame derive_dressed(const ModelConfig& cfg);

/// Non-fatal sanity checks on the operating regime. Never alters results.
std::vector<std::string> validate_regime(const ModelConfig& cfg,
                                         const DressedFrame& frame);

}  // namespace dsl
