#include "dsl/block.hpp"

#include <cmath>
#include <stdexcept>

namespace dsl {

namespace {

// Real 4x4 times complex 4-vector.
Eigen::Vector4cd mul(const Eigen::Matrix4d& M, const Eigen::Vector4cd& v) {
  Eigen::Vector4cd out;
  out.real() = M * v.real();
  out.imag() = M * v.imag();
  return out;
}

}  // namespace

double BlockVector::norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.squaredNorm();
  return std::sqrt(s);
}

double BlockVector::max_abs() const {
  double s = 0.0;
  for (const auto& e : entries)
    for (int k = 0; k < 4; ++k) s = std::max(s, std::abs(e[k]));
  return s;
}

BlockTridiagonalGenerator build_generator(const DressedFrame& frame, double kappa,
                                          int m, int n_max) {
  if (m != 0 && m != 1) throw std::invalid_argument("build_generator: m must be 0 or 1");
  if (n_max < 1) throw std::invalid_argument("build_generator: n_max must be >= 1");

  BlockTridiagonalGenerator gen;
  gen.m = m;
  gen.n_max = n_max;
  gen.kappa = kappa;
  gen.frame = frame;

  const double g1 = frame.g1;
  const double gp = frame.gamma_plus;
  const double gm = frame.gamma_minus;
  const double gc = frame.gamma_c;
  const int blocks = gen.blocks();

  gen.A.resize(static_cast<std::size_t>(blocks));
  gen.B.resize(static_cast<std::size_t>(blocks));
  gen.C.resize(static_cast<std::size_t>(blocks));

  for (int n = 0; n < blocks; ++n) {
    const double alpha = std::sqrt(double(n) * double(n + m));
    const double alpha_up = std::sqrt(double(n + 1) * double(n + 1 + m));
    const double beta = n + 0.5 * m;
    const bool last = (n == blocks - 1);

    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(2, 0) = -0.5 * alpha * g1;
    A(2, 1) = 0.5 * alpha * g1;

    // Row-4 pump/coupling weight: beta_{n+1,m} in the interior; at the top
    // block the value consistent with the truncated ladder (m=0: the
    // rho4 combination vanishes identically there; m=1: only the
    // rho21[n_max,n_max] half survives, weight n_max/2).
    double beta_row4 = (n + 1) + 0.5 * m;
    if (last) beta_row4 = (m == 0) ? 0.0 : 0.5 * n_max;

    Eigen::Matrix4d B;
    B << -kappa * beta, 0.0, -2.0 * g1, 2.0 * g1,
        -(gp - gm), -((gp + gm) + kappa * beta), -2.0 * g1, -2.0 * g1,
        0.5 * g1 * beta, 0.5 * g1 * beta, -gc - kappa * (beta - 0.5), -kappa,
        -0.5 * g1 * beta_row4, 0.5 * g1 * beta_row4, 0.0, -gc - kappa * (beta + 0.5);

    // Truncated closure of the rho3 equation at the top m=1 block: the
    // upward kappa-coupling folds back through the surviving rho4 component.
    if (last && m == 1) B(2, 3) = kappa * n_max;

    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    if (!last) {
      C(0, 0) = C(1, 1) = C(2, 2) = C(3, 3) = kappa * alpha_up;
      C(3, 0) = C(3, 1) = 0.5 * g1 * alpha_up;
    }

    gen.A[static_cast<std::size_t>(n)] = A;
    gen.B[static_cast<std::size_t>(n)] = B;
    gen.C[static_cast<std::size_t>(n)] = C;
  }
  return gen;
}

BlockVector apply_generator(const BlockTridiagonalGenerator& gen,
                            const BlockVector& z) {
  const int blocks = gen.blocks();
  if (z.m != gen.m || z.blocks() != blocks)
    throw std::invalid_argument("apply_generator: dimension mismatch");

  BlockVector out = BlockVector::zero(gen.m, blocks);
  for (int n = 0; n < blocks; ++n) {
    Eigen::Vector4cd acc = mul(gen.B[static_cast<std::size_t>(n)], z[n]);
    if (n > 0) acc += mul(gen.A[static_cast<std::size_t>(n)], z[n - 1]);
    if (n + 1 < blocks) acc += mul(gen.C[static_cast<std::size_t>(n)], z[n + 1]);
    out[n] = acc;
  }
  return out;
}

}  // namespace dsl
