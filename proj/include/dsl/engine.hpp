#pragma once

#include "dsl/block.hpp"

namespace dsl {

/// Solves the m = 0 stationarity condition L z = 0 with the trace
/// normalization sum_n rho1_{n,n} = 1 imposed by replacing the first
/// component equation of the n = 0 block. The stationary system is singular
/// by construction (trace conservation); the replaced row is the redundant
/// one. Returns a real-valued steady state.
BlockVector steady_state(const BlockTridiagonalGenerator& gen,
                         double solver_tol = 1e-10);

/// Solves (shift*I - L) X = rhs by block Thomas elimination with partially
/// pivoted LU factorizations of the 4x4 diagonal blocks. X is the Laplace
/// transform of the initial-value evolution seeded by rhs. Safe to call
/// concurrently at different shifts on one generator.
BlockVector resolvent_solve(const BlockTridiagonalGenerator& gen, Complex shift,
                            const BlockVector& rhs, double solver_tol = 1e-10);

struct TruncationOutcome {
  int n_max = 0;
  double tail = 0.0;    // achieved tail population rho1_{n_max,n_max}
  BlockVector steady;   // m = 0 steady state at the accepted n_max
};

/// Adaptive Fock truncation: doubles n_max from 8 until the steady-state tail
/// drops below trunc.tail_eps, up to trunc.cap. Throws TruncationCapError
/// when the cap is hit (e.g. the divergent-ladder band-gap regime).
TruncationOutcome auto_truncate(const DressedFrame& frame, double kappa,
                                const Truncation& trunc, double solver_tol = 1e-10);

}  // namespace dsl
