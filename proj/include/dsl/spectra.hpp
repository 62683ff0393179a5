#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsl/block.hpp"
#include "dsl/engine.hpp"

namespace dsl {

struct PhotonStatistics {
  std::vector<double> p_n;  // photon-number distribution p_n = rho1_{n,n}
  double mean_n = 0.0;
  double mandel_q = 0.0;  // (<n^2> - <n>^2 - <n>)/<n>, 0 by convention at <n> = 0
  // |<a>| diagnostic. The sideband decomposition cannot hold an m = -1 moment,
  // so this is identically zero on the recurrence path; the full-Liouvillian
  // oracle cross-checks the underlying U(1) symmetry numerically.
  double mean_a = 0.0;
};

PhotonStatistics photon_statistics(const BlockVector& steady);

/// Total |1~> population of the steady state, <R12 R21>_s.
double lower_state_population(const BlockVector& steady);

/// Initial vector of the quantum-regression evolution for the cavity
/// correlation: the m = 1 combinations of a * rho_s.
BlockVector regression_seed_cavity(const BlockVector& steady);

/// Initial vector for the lower-sideband fluorescence correlation: the m = 1
/// combinations of R21 * rho_s.
BlockVector regression_seed_fluor(const BlockVector& steady);

enum class SpectrumKind { Cavity, FluorLower, FluorCentral, FluorUpper };

std::string to_string(SpectrumKind kind);

struct SpectrumMeta {
  int n_max = 0;
  double kappa = 0.0;
  DressedFrame frame;
  std::string source = "engine";  // "engine" or "oracle"
};

/// Real spectral density over frequency offsets nu from the sideband center.
struct Spectrum {
  SpectrumKind kind = SpectrumKind::Cavity;
  std::vector<double> nu;
  std::vector<double> values;
  SpectrumMeta meta;
};

/// Laplace transform of the cavity fluctuation correlation at shift s,
/// contracted with the output observable: sum_n sqrt(n+1) X1_n.
Complex cavity_correlation_laplace(const BlockTridiagonalGenerator& gen_m1,
                                   const BlockVector& seed, Complex s,
                                   double solver_tol = 1e-10);

/// Laplace transform of <R12(tau) R21(0)> at shift s:
/// [pop1 + g1 sum_n sqrt(n+1) X2_n] / (s + Gamma_c).
Complex fluor_correlation_laplace(const BlockTridiagonalGenerator& gen_m1,
                                  const DressedFrame& frame, double pop1,
                                  const BlockVector& seed, Complex s,
                                  double solver_tol = 1e-10);

/// Cavity output spectrum S_c(nu) = 2 Re sum_n sqrt(n+1) X1_n at s = -i nu.
Spectrum cavity_spectrum(const BlockVector& steady,
                         const BlockTridiagonalGenerator& gen_m1,
                         const FrequencyGrid& grid, double solver_tol = 1e-10);

/// Lower-sideband fluorescence spectrum, shift s = +i nu:
/// S(nu) = gamma_- { Gamma_c <R12R21>_s / (Gamma_c^2 + nu^2)
///                   + Re sum_n g1 sqrt(n+1) X2_n / (Gamma_c + i nu) }.
/// Identically zero when gamma_- = 0 (emission at omega_- is forbidden).
Spectrum fluor_lower_spectrum(const BlockVector& steady,
                              const BlockTridiagonalGenerator& gen_m1,
                              const DressedFrame& frame, const FrequencyGrid& grid,
                              double solver_tol = 1e-10);

struct Peak {
  double nu = 0.0;     // sub-grid refined position
  double value = 0.0;  // refined height
  int index = 0;       // grid index of the local maximum
};

/// Local maxima above rel_threshold * max(values), with quadratic sub-grid
/// refinement through the three samples around each maximum.
std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold = 0.01);

/// Full width at half maximum of the given peak by linear interpolation of
/// the half-maximum crossings; empty when a crossing leaves the grid.
std::optional<double> peak_fwhm(const Spectrum& s, const Peak& p);

}  // namespace dsl
