#pragma once
// Closed-form soliton solutions for the three worked C_2 / sl(2) cases,
// evaluated in shifted-argument (log-space) hyperbolic form so the large
// exponentials cancel analytically before any ratio is formed.

#include <map>

#include "zsd/dressing.hpp"

namespace zsd {

// --- C_2 one-soliton (rank-1 with lambda-derivative corrections) ----------

struct Example2Params {
  SpectralPair pair;
  std::array<double, 2> J{2, 1};
  std::array<double, 2> I{1, -1};
  Vector n0, m0;  // 4-component seed vectors
};

struct Example2Values {
  std::map<std::string, cplx> Q;
  cplx rho, A, B, Delta;
};

inline Example2Values example2_eval(const Example2Params& p, double x, double t) {
  if (p.n0.size() != 4 || p.m0.size() != 4)
    throw std::invalid_argument("example2_eval needs 4-component seed vectors");
  const cplx l = p.pair.l();
  const cplx lp = p.pair.lambda_plus, lm = p.pair.lambda_minus;
  const double z1 = p.J[0] * x + p.I[0] * t, z2 = p.J[1] * x + p.I[1] * t;
  const Vector& n0 = p.n0;
  const Vector& m0 = p.m0;
  const cplx i1(0, 1);
  auto e = [](cplx a) { return std::exp(a); };

  Example2Values v;
  v.A = 2.0 * i1 * l * (m0[0] * m0[3] * z1 - m0[1] * m0[2] * z2);
  v.B = 2.0 * i1 * l * (n0[0] * n0[3] * z1 - n0[1] * n0[2] * z2);
  v.rho = n0[0] * m0[0] * e(i1 * l * z1) + n0[1] * m0[1] * e(i1 * l * z2) +
          n0[2] * m0[2] * e(-i1 * l * z2) + n0[3] * m0[3] * e(-i1 * l * z1);
  v.Delta = v.rho * v.rho + v.A * v.B;
  const double scale = std::max(std::norm(v.rho), std::abs(v.A) * std::abs(v.B));
  detail::check_denominator(v.Delta, scale, "Delta = rho^2 + AB", x, t);

  const cplx rho = v.rho, A = v.A, B = v.B, D = v.Delta;
  const double s2 = std::sqrt(2.0);
  v.Q["Q12b"] = l / D *
                (n0[0] * m0[1] * rho * e(i1 * lm * z2 - i1 * lp * z1) +
                 n0[2] * m0[3] * rho * e(-i1 * lm * z1 + i1 * lp * z2) -
                 n0[0] * n0[2] * A * e(-i1 * lp * (z1 - z2)) +
                 m0[1] * m0[3] * B * e(-i1 * lm * (z1 - z2)));
  v.Q["Q12"] = l / D *
               (n0[0] * m0[2] * rho * e(-i1 * lm * z2 - i1 * lp * z1) -
                n0[1] * m0[3] * rho * e(-i1 * lm * z1 - i1 * lp * z2) +
                n0[0] * n0[1] * A * e(-i1 * lp * (z1 + z2)) +
                m0[2] * m0[3] * B * e(-i1 * lm * (z1 + z2)));
  v.Q["Q11"] = l / (s2 * D) *
               (2.0 * n0[0] * m0[3] * rho * e(-i1 * (lm + lp) * z1) -
                n0[0] * n0[0] * A * e(-2.0 * i1 * lp * z1) + m0[3] * m0[3] * B * e(-2.0 * i1 * lm * z1));
  v.Q["Q22"] = l / (s2 * D) *
               (2.0 * n0[1] * m0[2] * rho * e(-i1 * (lm + lp) * z2) +
                n0[1] * n0[1] * A * e(-2.0 * i1 * lp * z2) - m0[2] * m0[2] * B * e(-2.0 * i1 * lm * z2));
  v.Q["Q1b2"] = l / D *
                (n0[1] * m0[0] * rho * e(i1 * lm * z1 - i1 * lp * z2) +
                 n0[3] * m0[2] * rho * e(-i1 * lm * z2 + i1 * lp * z1) +
                 n0[1] * n0[3] * A * e(i1 * lp * (z1 - z2)) -
                 m0[0] * m0[2] * B * e(i1 * lm * (z1 - z2)));
  v.Q["Q1b2b"] = l / D *
                 (n0[2] * m0[0] * rho * e(i1 * lm * z1 + i1 * lp * z2) -
                  n0[3] * m0[1] * rho * e(i1 * lm * z2 + i1 * lp * z1) +
                  n0[3] * n0[2] * A * e(i1 * lp * (z1 + z2)) +
                  m0[0] * m0[1] * B * e(i1 * lm * (z1 + z2)));
  v.Q["Q2b2b"] = l / (s2 * D) *
                 (2.0 * n0[2] * m0[1] * rho * e(i1 * (lm + lp) * z2) -
                  n0[2] * n0[2] * A * e(2.0 * i1 * lp * z2) + m0[1] * m0[1] * B * e(2.0 * i1 * lm * z2));
  v.Q["Q1b1b"] = l / (s2 * D) *
                 (2.0 * n0[3] * m0[0] * rho * e(i1 * (lm + lp) * z1) +
                  n0[3] * n0[3] * A * e(2.0 * i1 * lp * z1) - m0[0] * m0[0] * B * e(2.0 * i1 * lm * z1));
  return v;
}

// --- C_2 rank-2 (real seed family parametrized by a, b, c) ----------------

struct Example3Params {
  SpectralPair pair;
  std::array<double, 2> J{2, 1};
  std::array<double, 2> I{1, -1};
  double a = 1, b = 1, c = 1;
};

struct Example3Values {
  std::map<std::string, cplx> Q;
  double Delta = 0;  // = -det R, real and positive
};

// |n1> = (1, a, b, -ab), |n2> = (1, -a, c, ac); m-family swapped
inline SeedVectors example3_seeds(double a, double b, double c) {
  Vector n1(4), n2(4);
  n1 << 1, a, b, -a * b;
  n2 << 1, -a, c, a * c;
  return SeedVectors{{n1, n2}, {n2, n1}};
}

inline Example3Values example3_eval(const Example3Params& p, double x, double t) {
  if (!(p.a > 0) || !(p.b > 0) || !(p.c > 0))
    throw std::invalid_argument("example3_eval needs a, b, c > 0");
  const double nu1 = p.pair.lambda_plus.imag(), mu1 = p.pair.lambda_plus.real();
  const double z1 = p.J[0] * x + p.I[0] * t, z2 = p.J[1] * x + p.I[1] * t;
  const double a = p.a, b = p.b, c = p.c, sb = std::sqrt(b * c);
  const cplx i1(0, 1);
  auto e = [](cplx v) { return std::exp(v); };

  Example3Values v;
  v.Delta = 2.0 * (a * a * (b + c) * (b + c) +
                   a * a * (b - c) * (b - c) * std::cosh(2 * nu1 * (z1 - z2) - std::log(a * a)) +
                   4.0 * a * a * b * c * std::cosh(2 * nu1 * (z1 + z2) - std::log(b * c)));
  const double D = v.Delta;
  detail::check_denominator(D, 1.0, "Delta = -det R", x, t);
  const double s2 = std::sqrt(2.0);

  v.Q["Q12b"] = 4.0 * i1 * nu1 * a * a * (b - c) * (b + c) * e(-i1 * mu1 * (z1 - z2)) *
                std::cosh(nu1 * (z1 - z2) - std::log(a)) / D;
  v.Q["Q12"] = -8.0 * i1 * nu1 * a * a * sb * (b + c) * e(-i1 * mu1 * (z1 + z2)) *
               std::cosh(nu1 * (z1 + z2) - std::log(sb)) / D;
  v.Q["Q11"] = 4.0 * s2 * i1 * nu1 * a * a * sb * (b - c) * e(-2.0 * i1 * mu1 * z1) *
               std::sinh(2 * nu1 * z2 + std::log(a / sb)) / D;
  v.Q["Q22"] = -4.0 * s2 * i1 * nu1 * a * a * sb * (b - c) * e(-2.0 * i1 * mu1 * z2) *
               std::sinh(2 * nu1 * z1 - std::log(a * sb)) / D;
  v.Q["Q1b2"] = 4.0 * i1 * nu1 * a * a * (b - c) * (b + c) * e(i1 * mu1 * (z1 - z2)) *
                std::cosh(nu1 * (z1 - z2) - std::log(a)) / D;
  v.Q["Q1b2b"] = -8.0 * i1 * nu1 * a * a * sb * (b + c) * e(i1 * mu1 * (z1 + z2)) *
                 std::cosh(nu1 * (z1 + z2) - std::log(sb)) / D;
  v.Q["Q1b1b"] = 4.0 * s2 * i1 * nu1 * a * a * sb * (b - c) * e(2.0 * i1 * mu1 * z1) *
                 std::sinh(2 * nu1 * z2 + std::log(a / sb)) / D;
  v.Q["Q2b2b"] = -4.0 * s2 * i1 * nu1 * a * a * sb * (b - c) * e(2.0 * i1 * mu1 * z2) *
                 std::sinh(2 * nu1 * z1 - std::log(a * sb)) / D;
  return v;
}

// --- sl(2) one-soliton of the NLS system ----------------------------------

struct Example4Params {
  SpectralPair pair;
  double J1 = 1;
  cplx eta{1, 0};  // m02/m01
  cplx nu{1, 0};   // n02/n01; involution: nu = conj(eta)
};

struct Example4Values {
  cplx q, qtilde, Delta, Zp, Zm, fp, fm;
};

inline Example4Values example4_eval(const Example4Params& p, double x, double t) {
  const cplx lp = p.pair.lambda_plus, lm = p.pair.lambda_minus, l = p.pair.l();
  const cplx i1(0, 1);
  Example4Values v;
  v.Zp = i1 * p.J1 * lp * (x + lp * t);
  v.Zm = i1 * p.J1 * lm * (x + lm * t);
  v.fp = i1 * p.J1 * l * (x + 2.0 * lp * t);
  v.fm = i1 * p.J1 * l * (x + 2.0 * lm * t);
  const cplx en = p.eta * p.nu;
  const cplx w = std::exp(v.Zm - v.Zp);
  v.Delta = (w + en / w) * (w + en / w) + 4.0 * en * v.fp * v.fm;
  detail::check_denominator(v.Delta, std::max(std::norm(w), std::abs(en) / std::norm(w)), "Delta",
                            x, t);
  const double s2 = std::sqrt(2.0);
  v.q = 4.0 * p.eta * p.J1 * l / (s2 * v.Delta) *
        ((1.0 - v.fm) * std::exp(-2.0 * v.Zp) + en * (1.0 + v.fp) * std::exp(-2.0 * v.Zm));
  v.qtilde = -4.0 * p.nu * p.J1 * l / (s2 * v.Delta) *
             ((1.0 - v.fp) * std::exp(2.0 * v.Zm) + en * (1.0 + v.fm) * std::exp(2.0 * v.Zp));
  return v;
}

// Under the involution (nu = conj(eta), lambda_minus = conj(lambda_plus))
// Delta is real and strictly positive:
inline double example4_delta_cosh(const Example4Params& p, double x, double t) {
  const double nu1 = p.pair.lambda_plus.imag(), mu1 = p.pair.lambda_plus.real();
  const double J1 = p.J1, ae = std::abs(p.eta);
  const double u = x + 2 * mu1 * t;
  const double ch = std::cosh(2 * J1 * nu1 * u - std::log(ae));
  return 4.0 * ae * ae * (ch * ch + 4.0 * J1 * J1 * nu1 * nu1 * (u * u + 4.0 * nu1 * nu1 * t * t));
}

}  // namespace zsd
