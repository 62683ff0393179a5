#include "dsl/engine.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dsl {

namespace {

double generator_scale(const BlockTridiagonalGenerator& gen) {
  double s = 0.0;
  for (const auto& M : gen.B) s = std::max(s, M.cwiseAbs().maxCoeff());
  for (const auto& M : gen.C) s = std::max(s, M.cwiseAbs().maxCoeff());
  for (const auto& M : gen.A) s = std::max(s, M.cwiseAbs().maxCoeff());
  return std::max(s, 1e-300);
}

Eigen::Vector4cd mul(const Eigen::Matrix4d& M, const Eigen::Vector4cd& v) {
  Eigen::Vector4cd out;
  out.real() = M * v.real();
  out.imag() = M * v.imag();
  return out;
}

}  // namespace

BlockVector steady_state(const BlockTridiagonalGenerator& gen, double solver_tol) {
  if (gen.m != 0)
    throw std::invalid_argument("steady_state: generator must have m = 0");

  const int blocks = gen.blocks();
  const int dim = 4 * blocks;

  // Row 4n+r is the equation for component r of block n. Row 0 (the first
  // component of the n=0 block) is replaced by the normalization row.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * 12);
  auto add_block = [&](int row_block, int col_block, const Eigen::Matrix4d& M) {
    for (int r = 0; r < 4; ++r) {
      const int row = 4 * row_block + r;
      if (row == 0) continue;
      for (int c = 0; c < 4; ++c) {
        if (M(r, c) != 0.0) trip.emplace_back(row, 4 * col_block + c, M(r, c));
      }
    }
  };
  for (int n = 0; n < blocks; ++n) {
    add_block(n, n, gen.B[static_cast<std::size_t>(n)]);
    if (n > 0) add_block(n, n - 1, gen.A[static_cast<std::size_t>(n)]);
    if (n + 1 < blocks) add_block(n, n + 1, gen.C[static_cast<std::size_t>(n)]);
  }
  for (int n = 0; n < blocks; ++n) trip.emplace_back(0, 4 * n, 1.0);

  Eigen::SparseMatrix<double> M(dim, dim);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("steady_state: constrained stationary system is singular");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs[0] = 1.0;
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SingularSystemError("steady_state: sparse solve failed");

  BlockVector z = BlockVector::zero(0, blocks);
  for (int n = 0; n < blocks; ++n)
    for (int k = 0; k < 4; ++k) z[n][k] = Complex(x[4 * n + k], 0.0);

  // Residual of the stationarity equations (the replaced row excluded) and of
  // the normalization, scaled by the generator magnitude.
  const double scale = generator_scale(gen) * std::max(1.0, z.max_abs());
  BlockVector res = apply_generator(gen, z);
  double rmax = 0.0;
  for (int n = 0; n < blocks; ++n)
    for (int k = 0; k < 4; ++k)
      if (n != 0 || k != 0) rmax = std::max(rmax, std::abs(res[n][k]));
  double trace = 0.0;
  for (int n = 0; n < blocks; ++n) trace += x[4 * n];
  rmax = std::max(rmax, std::abs(trace - 1.0) * scale);
  if (rmax > 1e4 * solver_tol * scale)
    throw SingularSystemError(
        "steady_state: residual " + std::to_string(rmax / scale) +
        " exceeds tolerance; system numerically rank-deficient");

  double pmin = 0.0;
  for (int n = 0; n < blocks; ++n) pmin = std::min(pmin, x[4 * n]);
  if (pmin < -1e-8)
    throw NumericalError("steady_state: negative population " + std::to_string(pmin));

  return z;
}

BlockVector resolvent_solve(const BlockTridiagonalGenerator& gen, Complex shift,
                            const BlockVector& rhs, double solver_tol) {
  const int blocks = gen.blocks();
  if (rhs.m != gen.m || rhs.blocks() != blocks)
    throw std::invalid_argument("resolvent_solve: dimension mismatch");

  // Forward sweep on M = shift*I - L: Delta_n = (sI - B_n) - A_n Delta_{n-1}^-1 C_{n-1},
  // y_n = r_n + A_n Delta_{n-1}^-1 y_{n-1}.
  std::vector<Eigen::PartialPivLU<Eigen::Matrix4cd>> lus;
  lus.reserve(static_cast<std::size_t>(blocks));
  std::vector<Eigen::Vector4cd> y(static_cast<std::size_t>(blocks));

  Eigen::Vector4cd prev_y = Eigen::Vector4cd::Zero();
  for (int n = 0; n < blocks; ++n) {
    Eigen::Matrix4cd D =
        -gen.B[static_cast<std::size_t>(n)].cast<Complex>();
    D.diagonal().array() += shift;
    Eigen::Vector4cd rn = rhs[n];
    if (n > 0) {
      const auto& lu_prev = lus.back();
      const Eigen::Matrix4cd GC =
          lu_prev.solve(gen.C[static_cast<std::size_t>(n - 1)].cast<Complex>());
      const Eigen::Vector4cd Gy = lu_prev.solve(prev_y);
      const Eigen::Matrix4cd Acplx = gen.A[static_cast<std::size_t>(n)].cast<Complex>();
      D -= Acplx * GC;
      rn += Acplx * Gy;
    }
    lus.emplace_back(D);
    if (std::abs(lus.back().determinant()) == 0.0)
      throw SingularSystemError("resolvent_solve: singular block at shift");
    y[static_cast<std::size_t>(n)] = rn;
    prev_y = rn;
  }

  BlockVector x = BlockVector::zero(gen.m, blocks);
  x[blocks - 1] =
      lus[static_cast<std::size_t>(blocks - 1)].solve(y[static_cast<std::size_t>(blocks - 1)]);
  for (int n = blocks - 2; n >= 0; --n) {
    const Eigen::Vector4cd t =
        y[static_cast<std::size_t>(n)] +
        mul(gen.C[static_cast<std::size_t>(n)], x[n + 1]);
    x[n] = lus[static_cast<std::size_t>(n)].solve(t);
  }

  // Residual check: shift*X - L X - rhs.
  BlockVector lx = apply_generator(gen, x);
  double rmax = 0.0;
  for (int n = 0; n < blocks; ++n)
    for (int k = 0; k < 4; ++k)
      rmax = std::max(rmax, std::abs(shift * x[n][k] - lx[n][k] - rhs[n][k]));
  const double scale =
      rhs.max_abs() + (std::abs(shift) + generator_scale(gen)) * x.max_abs();
  if (rmax > 1e4 * solver_tol * std::max(scale, 1e-300))
    throw SingularSystemError("resolvent_solve: singular or ill-conditioned at shift");

  return x;
}

TruncationOutcome auto_truncate(const DressedFrame& frame, double kappa,
                                const Truncation& trunc, double solver_tol) {
  if (trunc.policy != TruncationPolicy::Adaptive)
    throw std::invalid_argument("auto_truncate: adaptive policy required");

  std::string last_failure;
  for (int n_max = 8;; n_max *= 2) {
    n_max = std::min(n_max, trunc.cap);
    try {
      auto gen = build_generator(frame, kappa, 0, n_max);
      BlockVector z = steady_state(gen, solver_tol);
      const double tail = std::abs(z[n_max][0]);
      if (tail < trunc.tail_eps) return TruncationOutcome{n_max, tail, std::move(z)};
      last_failure = "tail " + std::to_string(tail) + " at n_max " + std::to_string(n_max);
    } catch (const SingularSystemError& e) {
      last_failure = e.what();
    }
    if (n_max == trunc.cap)
      throw TruncationCapError(
          "auto_truncate: tail criterion not met at cap " + std::to_string(trunc.cap) +
          " (" + last_failure + "); ladder does not close (e.g. gamma_minus = 0 with "
          "insufficient cavity damping)");
  }
}

}  // namespace dsl
