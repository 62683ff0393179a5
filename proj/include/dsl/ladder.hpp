#pragma once

#include <vector>

#include "dsl/block.hpp"

namespace dsl {

/// Entangled atom-cavity doublet (singlet at n = 0). Coefficients act on
/// (|2~,n>, |1~,n-1>); energies are offsets from N*omega_L.
struct LadderLevel {
  int n = 0;
  bool doublet = false;
  double coeff_plus[2] = {1.0, 0.0};
  double coeff_minus[2] = {1.0, 0.0};
  double energy_plus = 0.0;   // singlet energy when !doublet
  double energy_minus = 0.0;
};

LadderLevel eigensystem(const DressedFrame& frame, int n);

/// One predicted emission line near the lower Rabi sideband.
struct LadderPeak {
  double nu = 0.0;   // signed offset from omega_-
  bool inner = true; // inner: (sqrt(n+1)-sqrt(n)) g1, outer: (sqrt(n+1)+sqrt(n)) g1
  int n = 0;
  double rate_gamma_plus = 0.0;   // gamma_+ (1+delta_{n,0}) / 4
  double rate_gamma_minus = 0.0;  // gamma_- (1+delta_{n,0}) / 4
  double rate_kappa = 0.0;        // kappa (sqrt(n+1) +/- sqrt(n))^2 / 4
};

struct LadderPrediction {
  std::vector<LadderPeak> peaks;       // +/- pairs for n = 0..n_count-1
  std::vector<double> populations;     // Pi_n (common +/- value), when filled
  double g1 = 0.0;
};

LadderPrediction peak_table(const DressedFrame& frame, double kappa, int n_count);

/// Closed-form dressed-ladder populations Pi_0..Pi_{n_count-1}, normalized
/// with the +/- degeneracy (Pi_0 + 2 sum_{n>=1} Pi_n = 1). Requires
/// gamma_- + kappa > 0; throws NumericalError when the tail ratio reaches 1
/// (non-normalizable ladder).
std::vector<double> ladder_populations(const DressedFrame& frame, double kappa,
                                       int n_count);

struct NumericLadder {
  double pi0 = 0.0;
  std::vector<double> plus, minus;  // n = 1..n_max
};

/// Projection of the numerical steady state onto the entangled ladder states.
NumericLadder ladder_populations_numeric(const BlockVector& steady);

}  // namespace dsl
