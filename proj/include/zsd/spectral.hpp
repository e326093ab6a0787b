#pragma once
// Seed (zero-potential) fundamental analytic solutions, the scalar kernel
// c_mu(lambda), and analytic lambda-derivatives of the seed FAS.

#include <complex>
#include <optional>
#include <stdexcept>

#include "zsd/algebra.hpp"

namespace zsd {

struct SpectralPair {
  cplx lambda_plus;   // Im > 0
  cplx lambda_minus;  // Im < 0
  bool involution = false;

  void validate() const {
    if (!(lambda_plus.imag() > 0)) throw std::invalid_argument("lambda_plus must have Im > 0");
    if (!(lambda_minus.imag() < 0)) throw std::invalid_argument("lambda_minus must have Im < 0");
    if (involution && lambda_minus != std::conj(lambda_plus))
      throw std::invalid_argument("involution requires lambda_minus = conj(lambda_plus)");
  }

  static SpectralPair involutive(cplx lp) {
    SpectralPair p{lp, std::conj(lp), true};
    p.validate();
    return p;
  }

  cplx l() const { return lambda_minus - lambda_plus; }
};

enum class Flavor { NWave, NLS };

struct DispersionData {
  Flavor flavor = Flavor::NWave;
  CartanElement J;
  std::optional<CartanElement> I;  // NWave only

  void validate() const {
    if (flavor == Flavor::NWave) {
      if (!I) throw std::invalid_argument("NWave dispersion needs both J and I");
      if (I->matrix.rows() != J.matrix.rows())
        throw std::invalid_argument("J and I dimension mismatch");
    }
  }
};

// c_mu(lambda) = ((lambda - lambda_plus)/(lambda - lambda_minus))^mu with the
// principal branch for fractional mu.
inline cplx c_factor(cplx lambda, const SpectralPair& pair, double mu) {
  if (lambda == pair.lambda_minus) throw std::domain_error("c_factor: pole at lambda_minus");
  cplx ratio = (lambda - pair.lambda_plus) / (lambda - pair.lambda_minus);
  if (mu == 1.0) return ratio;
  if (mu == -1.0) return 1.0 / ratio;
  // land real-negative arguments on the Im(log) = +pi side even when the
  // division produced a signed zero
  if (ratio.imag() == 0.0) ratio = cplx(ratio.real(), +0.0);
  return std::exp(mu * std::log(ratio));
}

namespace detail {
// Phase z_k(x,t,lambda) with chi0 = diag(exp(-i lambda z_k)); for the NLS
// flavor z_k itself depends on lambda.
inline Eigen::VectorXd diag_real(const Matrix& M) { return M.diagonal().real(); }
}  // namespace detail

inline Matrix seed_fas(const AlgebraBasis& basis, const DispersionData& disp, double x, double t,
                       cplx lambda) {
  disp.validate();
  if (disp.J.matrix.rows() != basis.rep_dim)
    throw std::invalid_argument("seed_fas: dispersion/basis dimension mismatch");
  const int N = basis.rep_dim;
  const Eigen::VectorXd j = detail::diag_real(disp.J.matrix);
  Matrix chi = Matrix::Zero(N, N);
  const cplx I1(0, 1);
  for (int k = 0; k < N; ++k) {
    if (disp.flavor == Flavor::NWave) {
      const double zk = j[k] * x + detail::diag_real(disp.I->matrix)[k] * t;
      chi(k, k) = std::exp(-I1 * lambda * zk);
    } else {
      chi(k, k) = std::exp(-I1 * lambda * j[k] * (x + lambda * t));
    }
  }
  return chi;
}

inline Matrix seed_fas_lambda_derivative(const AlgebraBasis& basis, const DispersionData& disp,
                                         double x, double t, cplx lambda) {
  disp.validate();
  const int N = basis.rep_dim;
  const Eigen::VectorXd j = detail::diag_real(disp.J.matrix);
  Matrix chi = Matrix::Zero(N, N);
  const cplx I1(0, 1);
  for (int k = 0; k < N; ++k) {
    if (disp.flavor == Flavor::NWave) {
      const double zk = j[k] * x + detail::diag_real(disp.I->matrix)[k] * t;
      chi(k, k) = -I1 * zk * std::exp(-I1 * lambda * zk);
    } else {
      chi(k, k) = -I1 * j[k] * (x + 2.0 * lambda * t) * std::exp(-I1 * lambda * j[k] * (x + lambda * t));
    }
  }
  return chi;
}

}  // namespace zsd
