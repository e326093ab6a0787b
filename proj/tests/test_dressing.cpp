#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zsd/dressing.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace zsd;
using namespace std::complex_literals;

namespace {

const SpectralPair kPair = SpectralPair::involutive(0.3 + 0.5i);

DispersionData nwave_c2(const AlgebraBasis& b) {
  DispersionData d;
  d.flavor = Flavor::NWave;
  d.J = cartan_element(b, {2, 1});
  d.I = cartan_element(b, {1, -1}, false);
  return d;
}

Vector vec(std::initializer_list<cplx> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx c : v) out[i++] = c;
  return out;
}

SeedVectors ex2_seeds() { return SeedVectors::involutive({vec({1.0, 0.8, 1.2, 0.9})}); }

SeedVectors ex3_seeds(double a, double b, double c) {
  return SeedVectors{{vec({1, a, b, -a * b}), vec({1, -a, c, a * c})},
                     {vec({1, -a, c, a * c}), vec({1, a, b, -a * b})}};
}

}  // namespace

TEST_CASE("sl(2) rank-1 projector") {
  auto basis = build_algebra({Series::A, 1});
  DispersionData d;
  d.flavor = Flavor::NLS;
  d.J = cartan_element(basis, {1, -1});
  auto seeds = SeedVectors{{vec({1, 1})}, {vec({1, 1})}};
  auto [st, pot] = dress_sl_rank1(basis, d, SpectralPair{1i, -1i}, seeds);
  Matrix P0 = st.pi_plus(0, 0);
  Matrix expect(2, 2);
  expect << 0.5, 0.5, 0.5, 0.5;
  CHECK(max_abs(Matrix(P0 - expect)) < 1e-15);
  for (auto [x, t] : {std::pair{0.7, -0.2}, {-1.3, 0.9}}) {
    Matrix P = st.pi_plus(x, t);
    CHECK(max_abs(Matrix(P * P - P)) < 1e-13);
    CHECK(std::abs(P.trace() - 1.0) < 1e-13);
  }
}

TEST_CASE("C rank-1 auxiliaries at the origin") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  auto [st, pot] = dress_c_rank1(basis, d, kPair, ex2_seeds());
  CHECK(std::abs(st.A(0, 0)) < 1e-15);
  CHECK(std::abs(st.B(0, 0)) < 1e-15);
  CHECK(std::abs(st.rho(0, 0) - 3.89) < 1e-14);
  CHECK(std::abs(st.Delta(0, 0) - 3.89 * 3.89) < 1e-13);

  auto ones = SeedVectors::involutive({vec({1, 1, 1, 1})});
  auto [st1, pot1] = dress_c_rank1(basis, d, kPair, ones);
  CHECK(std::abs(st1.rho(0, 0) - 4.0) < 1e-14);
  CHECK(std::abs(st1.Delta(0, 0) - 16.0) < 1e-13);
}

TEST_CASE("C rank-1 algebraic system and membership") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  auto [st, pot] = dress_c_rank1(basis, d, kPair, ex2_seeds());
  const Matrix& S = basis.s_matrix;
  const Matrix& Si = basis.s_inverse;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int k = 0; k < 20; ++k) {
    double x = U(rng), t = U(rng);
    Matrix p1 = st.pi_plus(x, t), pm = st.pi_minus(x, t);
    Matrix sp1 = S * p1.transpose() * Si, spm = S * pm.transpose() * Si;
    CHECK(max_abs(Matrix(p1 * sp1)) < 1e-10);          // pi S pi
    CHECK(max_abs(Matrix(pm * spm)) < 1e-10);
    CHECK(max_abs(Matrix(p1 + sp1 - p1 * spm - pm * sp1)) < 1e-10);  // alg pi
    CHECK(max_abs(Matrix(pm + spm - p1 * spm - pm * sp1)) < 1e-10);  // alg pi 2
    cplx lam(U(rng), U(rng));
    if (std::abs(lam - kPair.lambda_minus) < 0.3) continue;
    Matrix u = dressing_factor_eval(st, x, t, lam);
    CHECK(group_deviation(u, S, Si) < 1e-10);
    // dressed potential lies in the algebra with zero diagonal
    Matrix q1 = pot.q1(x, t);
    CHECK(membership_deviation(q1, S, Si) < 1e-12);
    CHECK(q1.diagonal().cwiseAbs().maxCoeff() < 1e-12);
    // rank(pi_1) = 1 but pi_1^2 != pi_1 when A,B != 0
    if (std::abs(st.A(x, t)) > 1e-3)
      CHECK(max_abs(Matrix(p1 * p1 - p1)) > 1e-6);
  }
}

TEST_CASE("pi ODE residuals converge at order 2") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  Grid g{-2, 2, 7, -2, 2, 5};
  auto [st, pot] = dress_c_rank1(basis, d, kPair, ex2_seeds());
  auto worst = [&](double h) {
    auto rep = verify_pi_odes(st, pot, d.J, g, h, 1.0);
    return std::max(rep.checks[0].max_residual, rep.checks[1].max_residual);
  };
  const double r2 = worst(1e-2), r3 = worst(5e-3);
  CHECK(r2 / r3 > 3.5);
  CHECK(worst(1e-3) < 1e-4);

  auto [st3, pot3] = dress_rank_r(basis, d, kPair, ex3_seeds(2, 1, 3));
  auto worst3 = [&](double h) {
    auto rep = verify_pi_odes(st3, pot3, d.J, g, h, 1.0);
    return std::max(rep.checks[0].max_residual, rep.checks[1].max_residual);
  };
  CHECK(worst3(1e-2) / worst3(5e-3) > 3.5);
  CHECK(worst3(1e-3) < 1e-4);
}

TEST_CASE("BD rank-1 on D2 and B2") {
  auto d2 = build_algebra({Series::D, 2});
  // <n|S|n> = 2(n1 n4 - n2 n3) = 0 for the all-ones vector
  auto seeds = SeedVectors::involutive({vec({1, 1, 1, 1})});
  auto disp = nwave_c2(d2);
  auto [st, pot] = dress_bd_rank1(d2, disp, kPair, seeds);
  for (auto [x, t] : {std::pair{0.4, 0.2}, {-0.9, 0.6}}) {
    Matrix p1 = st.pi_plus(x, t), pm = st.pi_minus(x, t);
    CHECK(max_abs(Matrix(p1 * p1 - p1)) < 1e-12);
    CHECK(max_abs(Matrix(p1 * pm)) < 1e-12);
    CHECK(max_abs(Matrix(pm * p1)) < 1e-12);
    CHECK(std::abs((p1 + pm).trace() - 2.0) < 1e-12);
    CHECK(membership_deviation(pot.q1(x, t), d2.s_matrix, d2.s_inverse) < 1e-12);
    // u = exp(ln c_1 (pi_1 - pi_{-1})) matches the one-pole form
    cplx lam = 1.7 + 0.9i;
    Matrix arg = std::log(c_factor(lam, kPair, 1.0)) * (p1 - pm);
    CHECK(max_abs(Matrix(arg.exp() - dressing_factor_eval(st, x, t, lam))) < 1e-10);
    CHECK(group_deviation(dressing_factor_eval(st, x, t, lam), d2.s_matrix, d2.s_inverse) < 1e-10);
  }
  // broken seed: <n|S|n> != 0
  CHECK_THROWS_AS(
      dress_bd_rank1(d2, disp, kPair, SeedVectors::involutive({vec({1, 1, 1, 2})})),
      std::invalid_argument);

  auto b2 = build_algebra({Series::B, 2});
  DispersionData db;
  db.flavor = Flavor::NWave;
  db.J = cartan_element(b2, {2, 1});
  db.I = cartan_element(b2, {1, -1}, false);
  auto sb = SeedVectors::involutive({vec({1, 1, 0, 1, 1})});  // 2 n1 n5 - 2 n2 n4 + n3^2 = 0
  auto [stb, potb] = dress_bd_rank1(b2, db, kPair, sb);
  Matrix p1 = stb.pi_plus(0.3, -0.5);
  CHECK(max_abs(Matrix(p1 * p1 - p1)) < 1e-12);
  CHECK(group_deviation(dressing_factor_eval(stb, 0.3, -0.5, 2.0 + 1.0i), b2.s_matrix,
                        b2.s_inverse) < 1e-10);
}

TEST_CASE("rank-r projector identities") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  auto seeds = ex3_seeds(2, 1, 3);
  // pairwise skew-form constraints hold for this family
  CHECK(seeds.s_isotropy_deviation(basis.s_matrix) < 1e-12);
  auto [st, pot] = dress_rank_r(basis, d, kPair, seeds);
  CHECK(st.mu == 0.5);
  for (auto [x, t] : {std::pair{0.7, -0.3}, {-1.1, 0.8}, {0.0, 0.0}}) {
    Matrix p1 = st.pi_plus(x, t), pm = st.pi_minus(x, t);
    CHECK(max_abs(Matrix(p1 * p1 - p1)) < 1e-12);
    CHECK(max_abs(Matrix(p1 * pm)) < 1e-12);
    CHECK(max_abs(Matrix(p1 + pm - Matrix::Identity(4, 4))) < 1e-12);
    CHECK(max_abs(Matrix(pm - basis.s_matrix * p1.transpose() * basis.s_inverse)) < 1e-12);
    CHECK(std::abs(p1.trace() - 2.0) < 1e-12);
    CHECK(membership_deviation(pot.q1(x, t), basis.s_matrix, basis.s_inverse) < 1e-12);
    CHECK(pot.q1(x, t).diagonal().cwiseAbs().maxCoeff() < 1e-12);
    // group membership of the two-sided factor; the meromorphic form differs
    // from it by the scalar c_{1/2}
    cplx lam = -0.8 + 1.4i;
    Matrix u = dressing_factor_eval(st, x, t, lam);
    CHECK(group_deviation(u, basis.s_matrix, basis.s_inverse) < 1e-10);
    Matrix v = dressing_factor_eval(st, x, t, lam, true);
    CHECK(max_abs(Matrix(v - c_factor(lam, kPair, 0.5) * u)) < 1e-12);
  }
  CHECK_THROWS_AS(dress_rank_r(basis, d, kPair, ex2_seeds()), std::invalid_argument);
}

TEST_CASE("dressing factor normalization at large lambda") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  auto [st, pot] = dress_c_rank1(basis, d, kPair, ex2_seeds());
  Matrix u = dressing_factor_eval(st, 0.4, 0.1, 1e8);
  CHECK(max_abs(Matrix(u - Matrix::Identity(4, 4))) < 1e-6);
}

TEST_CASE("asymptotic scattering data") {
  auto basis = build_algebra({Series::C, 2});
  auto d = nwave_c2(basis);
  auto [st, pot] = dress_c_rank1(basis, d, kPair, ex2_seeds());
  auto as2 = asymptotic_data(st, basis, d.J, d);
  CHECK(max_abs(Matrix(as2.pi_limit_plus - unit_matrix(4, 1, 1))) == 0.0);
  CHECK(max_abs(Matrix(as2.pi_limit_minus - unit_matrix(4, 4, 4))) == 0.0);
  CHECK(as2.settle_deviation < 1e-8);
  CHECK(as2.d_plus == std::vector<int>{2, 2});
  CHECK(as2.d_minus_supported);
  CHECK(as2.d_minus == std::vector<int>{-2, -2});
  // u_plus(lambda) is diag(c_1, 1, 1, 1/c_1)
  cplx lam = 2.2 + 0.7i, c1 = c_factor(lam, kPair, 1.0);
  Matrix up = as2.u_plus(lam);
  CHECK(std::abs(up(0, 0) - c1) < 1e-12);
  CHECK(std::abs(up(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(up(3, 3) - 1.0 / c1) < 1e-12);

  auto [st3, pot3] = dress_rank_r(basis, d, kPair, ex3_seeds(2, 1, 3));
  auto as3 = asymptotic_data(st3, basis, d.J, d);
  CHECK(max_abs(Matrix(as3.pi_limit_plus - (unit_matrix(4, 1, 1) + unit_matrix(4, 2, 2)))) == 0.0);
  CHECK(as3.d_plus == std::vector<int>{2, 4});
  CHECK(as3.d_minus == std::vector<int>{-2, -4});
}

TEST_CASE("singular point reporting") {
  auto basis = build_algebra({Series::A, 1});
  DispersionData d;
  d.flavor = Flavor::NLS;
  d.J = cartan_element(basis, {1, -1});
  // without the involution, <m|n> crosses zero on the real line
  auto seeds = SeedVectors{{vec({1, 1})}, {vec({1, -1})}};
  auto [st, pot] = dress_sl_rank1(basis, d, SpectralPair{1i, -1i}, seeds);
  // <m|n> = 2 sinh(2x) at t = 0, so the origin is the singular point
  bool hit = false;
  try {
    st.pi_plus(0.0, 0.0);
  } catch (const SingularPointError& e) {
    hit = true;
    CHECK(e.x == 0.0);
    CHECK(e.t == 0.0);
  }
  CHECK(hit);
  CHECK(max_abs(st.pi_plus(0.5, 0.0)) > 0.0);  // fine away from the singular set
}
