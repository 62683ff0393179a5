#include "dsl/ladder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsl {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
}

LadderLevel eigensystem(const DressedFrame& frame, int n) {
  if (n < 0) throw std::invalid_argument("eigensystem: n must be >= 0");
  LadderLevel lv;
  lv.n = n;
  if (n == 0) {
    lv.doublet = false;
    lv.coeff_plus[0] = lv.coeff_minus[0] = 1.0;
    lv.coeff_plus[1] = lv.coeff_minus[1] = 0.0;
    lv.energy_plus = lv.energy_minus = frame.big_omega;
    return lv;
  }
  lv.doublet = true;
  lv.coeff_plus[0] = kInvSqrt2;
  lv.coeff_plus[1] = kInvSqrt2;
  lv.coeff_minus[0] = kInvSqrt2;
  lv.coeff_minus[1] = -kInvSqrt2;
  const double base = -(2.0 * n - 1.0) * frame.big_omega;
  const double split = frame.g1 * std::sqrt(double(n));
  lv.energy_plus = base + split;
  lv.energy_minus = base - split;
  return lv;
}

LadderPrediction peak_table(const DressedFrame& frame, double kappa, int n_count) {
  if (n_count < 1) throw std::invalid_argument("peak_table: n_count must be >= 1");
  LadderPrediction out;
  out.g1 = frame.g1;
  out.peaks.reserve(static_cast<std::size_t>(4 * n_count));
  for (int n = 0; n < n_count; ++n) {
    const double rp = std::sqrt(double(n + 1));
    const double rm = std::sqrt(double(n));
    const double deg = (n == 0) ? 2.0 : 1.0;
    for (int inner = 1; inner >= 0; --inner) {
      const double nu = (inner ? (rp - rm) : (rp + rm)) * frame.g1;
      // Cavity damping enhances the inner lines and suppresses the outer ones.
      const double rk = 0.25 * kappa * (inner ? (rp + rm) * (rp + rm)
                                              : (rp - rm) * (rp - rm));
      for (int sign = -1; sign <= 1; sign += 2) {
        LadderPeak p;
        p.nu = sign * nu;
        p.inner = inner != 0;
        p.n = n;
        p.rate_gamma_plus = 0.25 * frame.gamma_plus * deg;
        p.rate_gamma_minus = 0.25 * frame.gamma_minus * deg;
        p.rate_kappa = rk;
        out.peaks.push_back(p);
      }
    }
  }
  return out;
}

std::vector<double> ladder_populations(const DressedFrame& frame, double kappa,
                                       int n_count) {
  if (n_count < 1)
    throw std::invalid_argument("ladder_populations: n_count must be >= 1");
  if (!(frame.gamma_minus + kappa > 0.0))
    throw NumericalError("ladder_populations: gamma_minus + kappa must be > 0");

  std::vector<double> pi(static_cast<std::size_t>(n_count));
  pi[0] = 1.0;
  for (int n = 1; n < n_count; ++n) {
    const double ratio =
        frame.gamma_plus / (frame.gamma_minus + (2.0 * n - 1.0) * kappa);
    pi[static_cast<std::size_t>(n)] = pi[static_cast<std::size_t>(n - 1)] * ratio;
  }
  const double tail_ratio =
      frame.gamma_plus / (frame.gamma_minus + (2.0 * n_count - 1.0) * kappa);
  if (tail_ratio >= 1.0 && pi.back() > 0.0)
    throw NumericalError(
        "ladder_populations: non-normalizable ladder, tail ratio " +
        std::to_string(tail_ratio) + " at n_count " + std::to_string(n_count));

  double norm = pi[0];
  for (int n = 1; n < n_count; ++n) norm += 2.0 * pi[static_cast<std::size_t>(n)];
  for (auto& v : pi) v /= norm;

  // The closed form must satisfy the detailed-balance recurrence exactly.
  for (int n = 1; n + 1 < n_count; ++n) {
    const double res =
        frame.gamma_plus * pi[static_cast<std::size_t>(n - 1)] -
        (frame.gamma_plus + frame.gamma_minus + (2.0 * n - 1.0) * kappa) *
            pi[static_cast<std::size_t>(n)] +
        (frame.gamma_minus + (2.0 * n + 1.0) * kappa) *
            pi[static_cast<std::size_t>(n + 1)];
    const double rate_scale =
        frame.gamma_plus + frame.gamma_minus + (2.0 * n + 1.0) * kappa;
    if (std::abs(res) > 1e-12 * rate_scale)
      throw NumericalError("ladder_populations: recurrence residual " +
                           std::to_string(res) + " at n = " + std::to_string(n));
  }
  return pi;
}

NumericLadder ladder_populations_numeric(const BlockVector& steady) {
  if (steady.m != 0 || steady.blocks() < 2)
    throw std::invalid_argument("ladder_populations_numeric: m = 0 steady required");
  const int n_max = steady.blocks() - 1;

  NumericLadder out;
  out.pi0 = 0.5 * (steady[0][0].real() + steady[0][1].real());
  out.plus.resize(static_cast<std::size_t>(n_max));
  out.minus.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double rho22_n = 0.5 * (steady[n][0].real() + steady[n][1].real());
    const double rho11_dn = 0.5 * (steady[n - 1][0].real() - steady[n - 1][1].real());
    // <2~,n| rho |1~,n-1> recovered from the rho4 block of the real steady state
    const double cross = steady[n - 1][3].real() / std::sqrt(double(n));
    out.plus[static_cast<std::size_t>(n - 1)] = 0.5 * (rho22_n + rho11_dn) + cross;
    out.minus[static_cast<std::size_t>(n - 1)] = 0.5 * (rho22_n + rho11_dn) - cross;
  }
  return out;
}

}  // namespace dsl
