#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dsl/params.hpp"

namespace dsl {

using Complex = std::complex<double>;

/// Hermitian-combination 4-vectors Z(m)_n = (rho1, rho2, rho3, rho4)_{n,n+m}
/// over the Fock index n, for one sideband index m. With the Fock space
/// truncated at n_max, the m = 0 sector holds blocks n = 0..n_max and the
/// m = 1 sector blocks n = 0..n_max-1 (the combination at n = n_max would
/// reference the level n_max+1, which lies beyond the truncation).
struct BlockVector {
  int m = 0;
  std::vector<Eigen::Vector4cd> entries;

  static BlockVector zero(int m, int blocks) {
    BlockVector z;
    z.m = m;
    z.entries.assign(static_cast<std::size_t>(blocks), Eigen::Vector4cd::Zero());
    return z;
  }

  int blocks() const { return static_cast<int>(entries.size()); }
  Eigen::Vector4cd& operator[](int n) { return entries[static_cast<std::size_t>(n)]; }
  const Eigen::Vector4cd& operator[](int n) const {
    return entries[static_cast<std::size_t>(n)];
  }

  double norm() const;
  double max_abs() const;
};

/// Coefficient blocks of the sideband-m recurrence
///   d/dt Z_n = A_n Z_{n-1} + B_n Z_n + C_n Z_{n+1},
/// with alpha_{n,m} = sqrt(n(n+m)) and beta_{n,m} = n + m/2. Interior blocks
/// follow the closed forms exactly; the last block carries the closure
/// consistent with annihilation/creation operators truncated at n_max, so the
/// generator is the exact sideband-m restriction of the truncated Liouvillian.
/// C of the last block is zero (the upward coupling dropped by truncation).
struct BlockTridiagonalGenerator {
  int m = 0;
  int n_max = 0;  // Fock-space cap shared by all sectors
  double kappa = 0.0;
  DressedFrame frame;
  std::vector<Eigen::Matrix4d> A, B, C;

  int blocks() const { return n_max + 1 - m; }
};

/// Builds the generator for sideband index m (0 or 1). Requires n_max >= 1.
BlockTridiagonalGenerator build_generator(const DressedFrame& frame, double kappa,
                                          int m, int n_max);

/// Returns A_n z_{n-1} + B_n z_n + C_n z_{n+1} per block, out-of-range
/// neighbours treated as zero. Throws std::invalid_argument on mismatch.
BlockVector apply_generator(const BlockTridiagonalGenerator& gen,
                            const BlockVector& z);

}  // namespace dsl
