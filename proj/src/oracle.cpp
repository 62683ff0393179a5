#include "dsl/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "dsl/parallel.hpp"

namespace dsl {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
  Eigen::MatrixXd out(P.rows() * Q.rows(), P.cols() * Q.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j)
      out.block(i * Q.rows(), j * Q.cols(), Q.rows(), Q.cols()) = P(i, j) * Q;
  return out;
}

// vec(A rho B) = kron(B^T, A) vec(rho), column-major vec.
Eigen::MatrixXd left_right(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return kron(B.transpose(), A);
}

// 2 c rho c^T - c^T c rho - rho c^T c for a real collapse operator c.
Eigen::MatrixXd dissipator(const Eigen::MatrixXd& c) {
  const Eigen::MatrixXd ctc = c.transpose() * c;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(c.rows(), c.cols());
  return 2.0 * kron(c, c) - left_right(ctc, id) - left_right(id, ctc);
}

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
  return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

}  // namespace

FullLiouvillian build_liouvillian(const DressedFrame& frame, double kappa,
                                  int n_max) {
  if (n_max < 1) throw std::invalid_argument("build_liouvillian: n_max must be >= 1");

  FullLiouvillian L;
  L.n_max = n_max;
  L.dim = 2 * (n_max + 1);
  L.kappa = kappa;
  L.frame = frame;

  const int nf = n_max + 1;
  Eigen::MatrixXd a_c = Eigen::MatrixXd::Zero(nf, nf);
  for (int n = 1; n <= n_max; ++n) a_c(n - 1, n) = std::sqrt(double(n));

  const Eigen::MatrixXd id_c = Eigen::MatrixXd::Identity(nf, nf);
  const Eigen::MatrixXd id_at = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd s12 = Eigen::MatrixXd::Zero(2, 2);  // |1~><2~|
  s12(0, 1) = 1.0;
  Eigen::MatrixXd s3 = Eigen::MatrixXd::Zero(2, 2);  // R22 - R11
  s3(0, 0) = -1.0;
  s3(1, 1) = 1.0;

  L.a = kron(id_at, a_c);
  L.adag = L.a.transpose();
  L.r12 = kron(s12, id_c);
  L.r21 = L.r12.transpose();
  L.r3 = kron(s3, id_c);

  // g1 [ (R12 a - adag R21), rho ] + kappa/2 Lc + gamma0/8 D[R3]
  //   + gamma-/2 D[R21] + gamma+/2 D[R12]
  const Eigen::MatrixXd h = frame.g1 * (L.r12 * L.a - L.adag * L.r21);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(L.dim, L.dim);
  L.generator = left_right(h, id) - left_right(id, h);
  L.generator += 0.5 * kappa * dissipator(L.a);
  L.generator += 0.125 * frame.gamma0 * dissipator(L.r3);
  L.generator += 0.5 * frame.gamma_minus * dissipator(L.r21);
  L.generator += 0.5 * frame.gamma_plus * dissipator(L.r12);
  return L;
}

Eigen::MatrixXcd apply_liouvillian(const FullLiouvillian& L,
                                   const Eigen::MatrixXcd& rho) {
  const int d = L.dim;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply_liouvillian: dimension mismatch");
  Eigen::VectorXd re = L.generator * vec(rho.real());
  Eigen::VectorXd im = L.generator * vec(rho.imag());
  Eigen::MatrixXcd out(d, d);
  out.real() = Eigen::Map<Eigen::MatrixXd>(re.data(), d, d);
  out.imag() = Eigen::Map<Eigen::MatrixXd>(im.data(), d, d);
  return out;
}

Eigen::MatrixXd oracle_steady_state(const FullLiouvillian& L) {
  const int d = L.dim;
  const int d2 = d * d;

  // Replace the d/dt rho(0,0) row by Tr rho = 1; that row is redundant since
  // the trace functional is an exact left null vector of the generator.
  Eigen::MatrixXd M = L.generator;
  M.row(0).setZero();
  for (int k = 0; k < d; ++k) M(0, k + d * k) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d2);
  rhs[0] = 1.0;

  // Rank-revealing solve: a null space of dimension > 1 leaves the
  // constrained system singular even after the row replacement.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  if (qr.rank() < d2)
    throw DegenerateNullSpaceError(
        "oracle_steady_state: null space dimension > 1 at tolerance (rank " +
        std::to_string(qr.rank()) + " of " + std::to_string(d2) + ")");
  Eigen::VectorXd x = qr.solve(rhs);

  const double scale =
      L.generator.cwiseAbs().maxCoeff() * std::max(1.0, x.cwiseAbs().maxCoeff());
  const double resid = (L.generator * x).cwiseAbs().maxCoeff();
  if (!x.allFinite() || resid > 1e-8 * std::max(scale, 1e-300))
    throw DegenerateNullSpaceError(
        "oracle_steady_state: constrained null-space solve failed");

  Eigen::MatrixXd rho = Eigen::Map<Eigen::MatrixXd>(x.data(), d, d);
  const double asym = (rho - rho.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8)
    throw DegenerateNullSpaceError("oracle_steady_state: steady state not Hermitian");
  rho = 0.5 * (rho + rho.transpose()).eval();
  rho /= rho.trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NumericalError("oracle_steady_state: steady state not positive, min eig " +
                         std::to_string(es.eigenvalues().minCoeff()));
  return rho;
}

BlockVector project_sector(const Eigen::MatrixXcd& rho, int m, int n_max) {
  if (m != 0 && m != 1) throw std::invalid_argument("project_sector: m must be 0 or 1");
  const int nf = n_max + 1;
  if (rho.rows() != 2 * nf || rho.cols() != 2 * nf)
    throw std::invalid_argument("project_sector: dimension mismatch");

  // atom index i in {1,2} (|1~>, |2~>), photon k
  auto el = [&](int i, int k, int j, int l) -> Complex {
    return rho((i - 1) * nf + k, (j - 1) * nf + l);
  };

  BlockVector z = BlockVector::zero(m, nf - m);
  for (int n = 0; n < z.blocks(); ++n) {
    const Complex r11 = el(1, n, 1, n + m);
    const Complex r22 = el(2, n, 2, n + m);
    z[n][0] = r22 + r11;
    z[n][1] = r22 - r11;
    Complex z3 = 0.0;
    if (n + m > 0) z3 += 0.5 * std::sqrt(double(n + m)) * el(2, n, 1, n + m - 1);
    if (n > 0) z3 += 0.5 * std::sqrt(double(n)) * el(1, n - 1, 2, n + m);
    z[n][2] = z3;
    Complex z4 = 0.0;
    if (n + 1 <= n_max) z4 += 0.5 * std::sqrt(double(n + 1)) * el(2, n + 1, 1, n + m);
    if (n + m + 1 <= n_max)
      z4 += 0.5 * std::sqrt(double(n + m + 1)) * el(1, n, 2, n + m + 1);
    z[n][3] = z4;
  }
  return z;
}

Spectrum oracle_spectrum_general(const FullLiouvillian& L,
                                 const Eigen::MatrixXd& rho_s,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Bdag, double prefactor,
                                 int shift_sign, const FrequencyGrid& grid,
                                 SpectrumKind kind) {
  const int d = L.dim;
  const Eigen::MatrixXd seed_m = B * rho_s - (B * rho_s).trace() * rho_s;
  const Eigen::VectorXcd seed = vec(seed_m).cast<Complex>();
  // Tr[Bdag unvec(x)] as a dot product with vec(Bdag^T).
  const Eigen::VectorXcd weight = vec(Eigen::MatrixXd(Bdag.transpose())).cast<Complex>();

  // The seed is traceless and the physical Laplace-domain solution stays
  // traceless, so the generator's zero mode (the steady state) can be
  // deflated away: add scale * vec(rho_s) tr(.) without changing the
  // solution. This keeps the resolvent regular through nu = 0.
  const double defl_scale = std::max(L.generator.cwiseAbs().maxCoeff(), 1.0);
  Eigen::VectorXd trace_row = Eigen::VectorXd::Zero(d * d);
  for (int k = 0; k < d; ++k) trace_row[k + d * k] = 1.0;
  const Eigen::MatrixXd deflation =
      defl_scale * vec(rho_s) * trace_row.transpose();

  Spectrum s;
  s.kind = kind;
  s.nu = grid.values();
  s.values.resize(s.nu.size());
  s.meta = SpectrumMeta{L.n_max, L.kappa, L.frame, "oracle"};

  if (prefactor == 0.0) {
    std::fill(s.values.begin(), s.values.end(), 0.0);
    return s;
  }

  const Eigen::MatrixXcd gen_c = (deflation - L.generator).cast<Complex>();
  parallel_for(static_cast<int>(s.nu.size()), [&](int i) {
    const double nu = s.nu[static_cast<std::size_t>(i)];
    Eigen::MatrixXcd M = gen_c;
    M.diagonal().array() += Complex(0.0, shift_sign * nu);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::VectorXcd x = lu.solve(seed);
    if (!x.allFinite())
      throw SingularSystemError("oracle_spectrum: singular resolvent at nu = " +
                                std::to_string(nu));
    const double resid = (M * x - seed).cwiseAbs().maxCoeff();
    const double scale = std::max(seed.cwiseAbs().maxCoeff(), 1e-300);
    if (resid > 1e-6 * std::max(scale, x.cwiseAbs().maxCoeff()))
      throw SingularSystemError("oracle_spectrum: ill-conditioned resolvent at nu = " +
                                std::to_string(nu));
    s.values[static_cast<std::size_t>(i)] = prefactor * weight.dot(x).real();
  });
  return s;
}

Spectrum oracle_spectrum(const FullLiouvillian& L, const Eigen::MatrixXd& rho_s,
                         SpectrumKind kind, const FrequencyGrid& grid) {
  switch (kind) {
    case SpectrumKind::Cavity:
      return oracle_spectrum_general(L, rho_s, L.a, L.adag, 2.0, -1, grid, kind);
    case SpectrumKind::FluorLower:
      return oracle_spectrum_general(L, rho_s, L.r21, L.r12, L.frame.gamma_minus, +1,
                                     grid, kind);
    case SpectrumKind::FluorCentral:
      return oracle_spectrum_general(L, rho_s, L.r3, L.r3, 0.25 * L.frame.gamma0, +1,
                                     grid, kind);
    case SpectrumKind::FluorUpper:
      return oracle_spectrum_general(L, rho_s, L.r12, L.r21, L.frame.gamma_plus, +1,
                                     grid, kind);
  }
  throw std::invalid_argument("oracle_spectrum: unknown kind");
}

double oracle_mean_a(const FullLiouvillian& L, const Eigen::MatrixXd& rho_s) {
  return std::abs((L.a * rho_s).trace());
}

}  // namespace dsl
