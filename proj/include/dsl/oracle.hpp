#pragma once

#include <Eigen/Dense>

#include "dsl/spectra.hpp"

namespace dsl {

/// Dense Liouvillian of the reduced master equation on the truncated
/// atom (x) Fock product space, acting on column-major vectorized density
/// operators. Basis ordering: |1~,0..n>, |2~,0..n>. Brute-force reference
/// path only; intended n_max <= ~30.
struct FullLiouvillian {
  int n_max = 0;
  int dim = 0;  // 2*(n_max+1)
  double kappa = 0.0;
  DressedFrame frame;
  Eigen::MatrixXd generator;  // dim^2 x dim^2, real
  Eigen::MatrixXd a, adag, r12, r21, r3;
};

FullLiouvillian build_liouvillian(const DressedFrame& frame, double kappa, int n_max);

/// Action of the generator on a (generally complex) operator.
Eigen::MatrixXcd apply_liouvillian(const FullLiouvillian& L,
                                   const Eigen::MatrixXcd& rho);

/// Null-space steady state, unit trace, Hermitian, eigenvalues >= -1e-10.
/// Throws DegenerateNullSpaceError when the null space is not one-dimensional
/// at tolerance.
Eigen::MatrixXd oracle_steady_state(const FullLiouvillian& L);

/// Hermitian combinations of a dense operator for sideband index m; the
/// counterpart of the engine's block coordinates (guarded at the truncation
/// edge exactly as the engine closure assumes).
BlockVector project_sector(const Eigen::MatrixXcd& rho, int m, int n_max);

/// prefactor * Re Tr[Bdag (sI - L)^-1 (B rho_s - <B> rho_s)] per grid point,
/// s = shift_sign * i * nu.
Spectrum oracle_spectrum_general(const FullLiouvillian& L,
                                 const Eigen::MatrixXd& rho_s,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Bdag, double prefactor,
                                 int shift_sign, const FrequencyGrid& grid,
                                 SpectrumKind kind);

/// Sideband wrappers: cavity (B=a, prefactor 2, s=-i nu), lower/central/upper
/// fluorescence (B=R21/R3/R12, prefactors gamma-, gamma0/4, gamma+, s=+i nu).
Spectrum oracle_spectrum(const FullLiouvillian& L, const Eigen::MatrixXd& rho_s,
                         SpectrumKind kind, const FrequencyGrid& grid);

/// |<a>|: U(1)-symmetry diagnostic of the steady state.
double oracle_mean_a(const FullLiouvillian& L, const Eigen::MatrixXd& rho_s);

}  // namespace dsl
