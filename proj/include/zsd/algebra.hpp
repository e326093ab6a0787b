#pragma once
// Explicit matrix realizations of the classical series A_r (as gl(r+1)),
// B_r, C_r, D_r in the typical representation, ordered so that the
// representation space reads |e_1>,...,|e_r>,(|0> for B),|-e_r>,...,|-e_1>
// and the conjugate index is kbar = N+1-k.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "zsd/report.hpp"

namespace zsd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Series { A, B, C, D };

inline std::string series_name(Series s) {
  switch (s) {
    case Series::A: return "A";
    case Series::B: return "B";
    case Series::C: return "C";
    case Series::D: return "D";
  }
  throw std::logic_error("bad series");
}

inline Series series_from_name(const std::string& s) {
  if (s == "A") return Series::A;
  if (s == "B") return Series::B;
  if (s == "C") return Series::C;
  if (s == "D") return Series::D;
  throw std::invalid_argument("unknown series: " + s);
}

struct AlgebraSeries {
  Series series;
  int rank;

  void validate() const {
    if (series == Series::A && rank < 1) throw std::invalid_argument("A_r needs r >= 1");
    if (series == Series::B && rank < 1) throw std::invalid_argument("B_r needs r >= 1");
    if ((series == Series::C || series == Series::D) && rank < 2)
      throw std::invalid_argument("C_r/D_r need r >= 2");
  }
};

// Root coordinates in the e_k basis.  Length r for B/C/D; for the gl(r+1)
// form of the A series the coordinates live in the r+1 diagonal directions.
struct Root {
  std::vector<int> coords;

  bool positive() const {
    for (int c : coords) {
      if (c > 0) return true;
      if (c < 0) return false;
    }
    return false;
  }

  Root negated() const {
    Root n = *this;
    for (int& c : n.coords) c = -c;
    return n;
  }

  double dot(const std::vector<double>& v) const {
    double s = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) s += coords[k] * v[k];
    return s;
  }

  std::string name() const {
    std::string out = "Q_";
    for (int c : coords) out += (c < 0 ? "m" + std::to_string(-c) : std::to_string(c));
    return out;
  }
};

inline Matrix unit_matrix(int N, int i, int j) {  // 1-based E_{ij}
  Matrix M = Matrix::Zero(N, N);
  M(i - 1, j - 1) = 1.0;
  return M;
}

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

inline Matrix commutator(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols())
    throw std::invalid_argument("commutator: dimension mismatch");
  return X * Y - Y * X;
}

// Deviation of X from the algebra condition S X^T S^{-1} = -X.
inline double membership_deviation(const Matrix& X, const Matrix& S, const Matrix& Sinv) {
  return max_abs(S * X.transpose() * Sinv + X);
}

// Deviation of u from the group condition u S u^T S^{-1} = 1.
inline double group_deviation(const Matrix& u, const Matrix& S, const Matrix& Sinv) {
  Matrix d = u * S * u.transpose() * Sinv;
  d -= Matrix::Identity(u.rows(), u.cols());
  return max_abs(d);
}

struct AlgebraBasis {
  AlgebraSeries series_rank;
  int rep_dim = 0;
  std::vector<Root> roots;
  std::vector<Matrix> cartan_generators;              // H_{e_k}
  std::map<std::vector<int>, Matrix> root_vectors;    // E_alpha keyed by coords
  Matrix s_matrix;                                    // 0x0 for the A series
  Matrix s_inverse;
  int sigma = 0;                                      // +1 for B/D, -1 for C, 0 for A
  std::vector<std::vector<double>> fundamental_weights;  // omega_j, B/C/D only
  double pairing = 2.0;                               // tr(E_{-alpha} E_alpha)

  bool has_s() const { return sigma != 0; }
  int rank() const { return series_rank.rank; }

  const Matrix& root_vector(const std::vector<int>& coords) const {
    auto it = root_vectors.find(coords);
    if (it == root_vectors.end()) throw std::invalid_argument("not a root of this algebra");
    return it->second;
  }

  // Coefficient of X along E_alpha under the trace pairing.
  cplx component(const Root& alpha, const Matrix& X) const {
    return (root_vector(alpha.negated().coords) * X).trace() / pairing;
  }
};

inline AlgebraBasis build_algebra(AlgebraSeries sr) {
  sr.validate();
  AlgebraBasis b;
  b.series_rank = sr;
  const int r = sr.rank;

  if (sr.series == Series::A) {
    // gl(r+1): diagonal Cartan E_kk, root vectors E_ij for i != j.
    const int N = r + 1;
    b.rep_dim = N;
    b.sigma = 0;
    b.pairing = 1.0;
    for (int k = 1; k <= N; ++k) b.cartan_generators.push_back(unit_matrix(N, k, k));
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) {
        if (i == j) continue;
        std::vector<int> a(N, 0);
        a[i - 1] = 1;
        a[j - 1] = -1;
        b.root_vectors[a] = unit_matrix(N, i, j);
        b.roots.push_back(Root{a});
      }
    return b;
  }

  const int N = (sr.series == Series::B) ? 2 * r + 1 : 2 * r;
  b.rep_dim = N;
  Matrix S = Matrix::Zero(N, N);
  for (int k = 1; k <= r; ++k) {
    const int kb = N + 1 - k;
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
    if (sr.series == Series::C) {
      S += sgn * (unit_matrix(N, k, kb) - unit_matrix(N, kb, k));
    } else {
      S += sgn * (unit_matrix(N, k, kb) + unit_matrix(N, kb, k));
    }
  }
  if (sr.series == Series::B) S += ((r % 2 == 0) ? 1.0 : -1.0) * unit_matrix(N, r + 1, r + 1);
  b.s_matrix = S;
  b.s_inverse = S.inverse();
  b.sigma = (sr.series == Series::C) ? -1 : 1;
  b.pairing = 2.0;

  for (int k = 1; k <= r; ++k) {
    const int kb = N + 1 - k;
    b.cartan_generators.push_back(unit_matrix(N, k, k) - unit_matrix(N, kb, kb));
  }

  auto add_pair = [&b](std::vector<int> a, const Matrix& E) {
    b.root_vectors[a] = E;
    b.roots.push_back(Root{a});
    for (int& c : a) c = -c;
    b.root_vectors[a] = E.transpose();
    b.roots.push_back(Root{a});
  };
  // The relative sign inside E_alpha is whatever the membership condition
  // S E^T S^{-1} = -E demands; trying both candidates keeps the pattern
  // uniform across series and rank.
  auto add_signed = [&](std::vector<int> a, const Matrix& P, const Matrix& Q) {
    for (double c : {1.0, -1.0}) {
      Matrix E = P + c * Q;
      if (membership_deviation(E, b.s_matrix, b.s_inverse) < 1e-12) {
        add_pair(std::move(a), E);
        return;
      }
    }
    throw std::logic_error("no sign satisfies the membership condition");
  };

  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) {
      const int ib = N + 1 - i, jb = N + 1 - j;
      std::vector<int> a(r, 0);
      a[i - 1] = 1;
      a[j - 1] = -1;
      add_signed(a, unit_matrix(N, i, j), unit_matrix(N, jb, ib));  // e_i - e_j
      a[j - 1] = 1;
      add_signed(a, unit_matrix(N, i, jb), unit_matrix(N, j, ib));  // e_i + e_j
    }
  if (sr.series == Series::C) {
    for (int k = 1; k <= r; ++k) {
      std::vector<int> a(r, 0);
      a[k - 1] = 2;
      add_pair(a, std::sqrt(2.0) * unit_matrix(N, k, N + 1 - k));  // 2e_k
    }
  }
  if (sr.series == Series::B) {
    const int z = r + 1;
    for (int k = 1; k <= r; ++k) {
      std::vector<int> a(r, 0);
      a[k - 1] = 1;
      add_signed(a, unit_matrix(N, k, z), unit_matrix(N, z, N + 1 - k));  // e_k
    }
  }

  // Fundamental weights omega_j in e_k coordinates.
  for (int j = 1; j <= r; ++j) {
    std::vector<double> w(r, 0.0);
    if (sr.series == Series::C) {
      for (int i = 0; i < j; ++i) w[i] = 1.0;
    } else if (sr.series == Series::B) {
      if (j < r)
        for (int i = 0; i < j; ++i) w[i] = 1.0;
      else
        for (int i = 0; i < r; ++i) w[i] = 0.5;
    } else {  // D
      if (j <= r - 2) {
        for (int i = 0; i < j; ++i) w[i] = 1.0;
      } else {
        for (int i = 0; i < r; ++i) w[i] = 0.5;
        if (j == r - 1) w[r - 1] = -0.5;
      }
    }
    b.fundamental_weights.push_back(std::move(w));
  }
  return b;
}

struct CartanElement {
  std::vector<double> coords;
  Matrix matrix;
  bool regular = false;
};

inline double root_action(const Root& alpha, const CartanElement& J) { return alpha.dot(J.coords); }

inline CartanElement cartan_element(const AlgebraBasis& basis, const std::vector<double>& coords,
                                    bool require_regular = true) {
  if (coords.size() != basis.cartan_generators.size())
    throw std::invalid_argument("cartan_element: coordinate count mismatch");
  CartanElement J;
  J.coords = coords;
  J.matrix = Matrix::Zero(basis.rep_dim, basis.rep_dim);
  for (std::size_t k = 0; k < coords.size(); ++k) J.matrix += coords[k] * basis.cartan_generators[k];
  J.regular = true;
  for (const Root& a : basis.roots)
    if (a.positive() && a.dot(coords) <= 0) J.regular = false;
  if (require_regular && !J.regular)
    throw std::domain_error("cartan_element: J is not regular (alpha(J) <= 0 for some positive root)");
  return J;
}

// Off-Cartan part of X: sum of its root-vector components.
inline Matrix projector_p0(const AlgebraBasis& basis, const Matrix& X) {
  Matrix Y = Matrix::Zero(X.rows(), X.cols());
  for (const Root& a : basis.roots) Y += basis.component(a, X) * basis.root_vector(a.coords);
  return Y;
}

// Solve [J, Y] = X for X with no Cartan component; each root component is
// divided by alpha(J).
inline Matrix ad_j_inverse(const AlgebraBasis& basis, const CartanElement& J, const Matrix& X) {
  if (!J.regular) throw std::domain_error("ad_j_inverse: J must be regular");
  Matrix Y = Matrix::Zero(X.rows(), X.cols());
  Matrix recon = Matrix::Zero(X.rows(), X.cols());
  for (const Root& a : basis.roots) {
    const cplx c = basis.component(a, X);
    const Matrix& E = basis.root_vector(a.coords);
    recon += c * E;
    Y += c / root_action(a, J) * E;
  }
  const double leftover = max_abs(Matrix(X - recon));
  if (leftover > 1e-10 * std::max(1.0, max_abs(X)))
    throw std::domain_error("ad_j_inverse: input has a Cartan (non-invertible) component");
  return Y;
}

inline VerificationReport verify_cartan_weyl(const AlgebraBasis& b, double tol = 1e-12) {
  VerificationReport rep;
  const int r = static_cast<int>(b.cartan_generators.size());

  double dev_he = 0, dev_ee = 0, dev_tr = 0, dev_pair = 0, dev_mem = 0;
  for (const Root& a : b.roots) {
    const Matrix& Ea = b.root_vector(a.coords);
    const Matrix& Em = b.root_vector(a.negated().coords);
    for (int k = 0; k < r; ++k)
      dev_he = std::max(dev_he,
                        max_abs(Matrix(commutator(b.cartan_generators[k], Ea) - double(a.coords[k]) * Ea)));
    Matrix Ha = Matrix::Zero(b.rep_dim, b.rep_dim);
    for (int k = 0; k < r; ++k) Ha += double(a.coords[k]) * b.cartan_generators[k];
    dev_ee = std::max(dev_ee, max_abs(Matrix(commutator(Ea, Em) - Ha)));
    dev_tr = std::max(dev_tr, max_abs(Matrix(Em - Ea.transpose())));
    dev_pair = std::max(dev_pair, std::abs((Em * Ea).trace() - b.pairing));
    if (b.has_s()) dev_mem = std::max(dev_mem, membership_deviation(Ea, b.s_matrix, b.s_inverse));
  }
  rep.add("commutation_h_e", dev_he, tol);
  rep.add("commutation_e_e", dev_ee, tol);
  rep.add("transpose_conjugation", dev_tr, tol);
  rep.add("trace_normalization", dev_pair, tol);

  // N_{-alpha,-beta} = -N_{alpha,beta} plus closure of [E_a, E_b] on E_{a+b}.
  double dev_n = 0;
  for (const Root& a : b.roots)
    for (const Root& g : b.roots) {
      std::vector<int> sum(a.coords.size());
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = a.coords[k] + g.coords[k];
      auto it = b.root_vectors.find(sum);
      if (it == b.root_vectors.end()) continue;
      const Matrix C = commutator(b.root_vector(a.coords), b.root_vector(g.coords));
      const cplx Nab = (b.root_vector(Root{sum}.negated().coords) * C).trace() / b.pairing;
      dev_n = std::max(dev_n, max_abs(Matrix(C - Nab * it->second)));
      const Matrix Cm =
          commutator(b.root_vector(a.negated().coords), b.root_vector(g.negated().coords));
      const cplx Nmm = (it->second * Cm).trace() / b.pairing;
      dev_n = std::max(dev_n, std::abs(Nmm + Nab));
    }
  rep.add("structure_constant_antisymmetry", dev_n, tol);

  if (b.has_s()) {
    const Matrix& S = b.s_matrix;
    double dev_s = max_abs(Matrix(S.inverse() - S.transpose()));
    dev_s = std::max(dev_s, max_abs(Matrix(S.inverse() - double(b.sigma) * S)));
    for (const Matrix& H : b.cartan_generators)
      dev_mem = std::max(dev_mem, membership_deviation(H, b.s_matrix, b.s_inverse));
    rep.add("s_matrix_symmetry", dev_s, tol);
    rep.add("algebra_membership", dev_mem, tol);
  }

  std::size_t expected = 0;
  const int rr = b.series_rank.rank;
  switch (b.series_rank.series) {
    case Series::A: expected = std::size_t(rr + 1) * rr; break;
    case Series::B:
    case Series::C: expected = 2 * std::size_t(rr) * rr; break;
    case Series::D: expected = 2 * std::size_t(rr) * (rr - 1); break;
  }
  rep.add("root_count", std::abs(double(b.roots.size()) - double(expected)), 0.0);
  return rep;
}

// --- JSON serialization ---------------------------------------------------

inline nlohmann::json matrix_to_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json basis_to_json(const AlgebraBasis& b) {
  nlohmann::json roots = nlohmann::json::array();
  nlohmann::json vectors = nlohmann::json::object();
  for (const Root& a : b.roots) {
    roots.push_back(a.coords);
    vectors[a.name()] = matrix_to_json(b.root_vector(a.coords));
  }
  nlohmann::json cartan = nlohmann::json::array();
  for (const Matrix& H : b.cartan_generators) cartan.push_back(matrix_to_json(H));
  nlohmann::json j{{"series", series_name(b.series_rank.series)},
                   {"rank", b.series_rank.rank},
                   {"rep_dim", b.rep_dim},
                   {"sigma", b.sigma},
                   {"roots", std::move(roots)},
                   {"cartan_generators", std::move(cartan)},
                   {"root_vectors", std::move(vectors)}};
  if (b.has_s()) j["s_matrix"] = matrix_to_json(b.s_matrix);
  if (!b.fundamental_weights.empty()) j["fundamental_weights"] = b.fundamental_weights;
  return j;
}

}  // namespace zsd
