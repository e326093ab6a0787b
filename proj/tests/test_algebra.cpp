#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zsd/algebra.hpp"

#include <random>

using namespace zsd;

static AlgebraBasis c2() { return build_algebra({Series::C, 2}); }

TEST_CASE("C2 pinned matrices") {
  auto b = c2();
  CHECK(b.rep_dim == 4);
  CHECK(b.sigma == -1);
  // E_{2e1} = sqrt(2) E_{14}, E_{e1-e2} = E_{12} + E_{34}, H_{e1} = E_{11} - E_{44}
  CHECK(max_abs(Matrix(b.root_vector({2, 0}) - std::sqrt(2.0) * unit_matrix(4, 1, 4))) == 0.0);
  CHECK(max_abs(Matrix(b.root_vector({1, -1}) - (unit_matrix(4, 1, 2) + unit_matrix(4, 3, 4)))) == 0.0);
  CHECK(max_abs(Matrix(b.cartan_generators[0] - (unit_matrix(4, 1, 1) - unit_matrix(4, 4, 4)))) == 0.0);
  // S = E_{14} - E_{41} - E_{23} + E_{32}
  Matrix S = unit_matrix(4, 1, 4) - unit_matrix(4, 4, 1) - unit_matrix(4, 2, 3) + unit_matrix(4, 3, 2);
  CHECK(max_abs(Matrix(b.s_matrix - S)) == 0.0);
}

TEST_CASE("B1 S-matrix") {
  auto b = build_algebra({Series::B, 1});
  Matrix S = unit_matrix(3, 1, 3) + unit_matrix(3, 3, 1) - unit_matrix(3, 2, 2);
  CHECK(max_abs(Matrix(b.s_matrix - S)) == 0.0);
  CHECK(b.sigma == 1);
}

TEST_CASE("identity suite across series") {
  for (auto [s, r] : {std::pair{Series::C, 2}, {Series::C, 3}, {Series::B, 1}, {Series::B, 2},
                      {Series::B, 3}, {Series::D, 2}, {Series::D, 3}, {Series::A, 1}, {Series::A, 2}}) {
    auto b = build_algebra({s, r});
    auto rep = verify_cartan_weyl(b, 1e-12);
    INFO(series_name(s), r);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("root counts") {
  CHECK(build_algebra({Series::C, 2}).roots.size() == 8);
  CHECK(build_algebra({Series::B, 3}).roots.size() == 18);
  CHECK(build_algebra({Series::D, 3}).roots.size() == 12);
}

TEST_CASE("injected defect is caught") {
  auto b = c2();
  b.root_vectors[{2, 0}] *= 2.0;  // break trace normalization
  auto rep = verify_cartan_weyl(b, 1e-12);
  CHECK(!rep.all_pass());
  CHECK(!rep.find("trace_normalization")->pass);
}

TEST_CASE("commutator oracles") {
  auto b = c2();
  // [H_{e1}, E_{2e1}] = 2 E_{2e1}
  CHECK(max_abs(Matrix(commutator(b.cartan_generators[0], b.root_vector({2, 0})) -
                       2.0 * b.root_vector({2, 0}))) == 0.0);
  CHECK(max_abs(commutator(b.s_matrix, b.s_matrix)) == 0.0);
  // [E_{e1-e2}, E_{-(e1-e2)}] = H_{e1} - H_{e2}
  CHECK(max_abs(Matrix(commutator(b.root_vector({1, -1}), b.root_vector({-1, 1})) -
                       (b.cartan_generators[0] - b.cartan_generators[1]))) == 0.0);
  CHECK_THROWS_AS(commutator(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("cartan_element regularity") {
  auto b = c2();
  auto J = cartan_element(b, {2, 1});
  CHECK(J.regular);
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 2, 1, -1, -2;
  CHECK(max_abs(Matrix(J.matrix - d)) == 0.0);
  CHECK_THROWS_AS(cartan_element(b, {1, 1}), std::domain_error);
  CHECK(!cartan_element(b, {1, 1}, false).regular);

  auto b1 = build_algebra({Series::B, 1});
  auto J1 = cartan_element(b1, {1});
  CHECK(J1.regular);
  Matrix d1 = Matrix::Zero(3, 3);
  d1.diagonal() << 1, 0, -1;
  CHECK(max_abs(Matrix(J1.matrix - d1)) == 0.0);
}

TEST_CASE("ad_j_inverse and projector_p0") {
  auto b = c2();
  auto J = cartan_element(b, {2, 1});
  // alpha = 2e1 has alpha(J) = 4
  CHECK(max_abs(Matrix(ad_j_inverse(b, J, b.root_vector({2, 0})) - b.root_vector({2, 0}) / 4.0)) <
        1e-14);
  CHECK(max_abs(ad_j_inverse(b, J, Matrix::Zero(4, 4))) == 0.0);
  CHECK_THROWS_AS(ad_j_inverse(b, J, b.cartan_generators[0]), std::domain_error);

  CHECK(max_abs(Matrix(projector_p0(b, b.cartan_generators[0] + b.root_vector({2, 0})) -
                       b.root_vector({2, 0}))) < 1e-14);
  CHECK(max_abs(projector_p0(b, Matrix(J.matrix))) < 1e-14);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  Matrix X(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) X(i, j) = cplx(U(rng), U(rng));
  Matrix P = projector_p0(b, X);
  CHECK(max_abs(Matrix(projector_p0(b, P) - P)) < 1e-12);
  // ad_J^{-1} after ad_J reproduces the off-Cartan projector
  CHECK(max_abs(Matrix(ad_j_inverse(b, J, commutator(J.matrix, P)) - P)) < 1e-12);
}

TEST_CASE("basis JSON round info") {
  auto j = basis_to_json(c2());
  CHECK(j["series"] == "C");
  CHECK(j["rep_dim"] == 4);
  CHECK(j["roots"].size() == 8);
  CHECK(j["s_matrix"][0][3][0] == 1.0);
  CHECK(j["fundamental_weights"][1] == std::vector<double>{1.0, 1.0});
}
