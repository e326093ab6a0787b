#pragma once
// Finite-difference residual evaluators for the nonlinear evolution
// equations solved by the dressed potentials: the matrix N-wave equation,
// its C_2 component system, the general NLS-type equation, and the sl(2)
// NLS system.  All derivatives are second-order central differences.

#include <array>
#include <map>
#include <string>

#include "zsd/dressing.hpp"
#include "zsd/grid.hpp"

namespace zsd {

struct NWaveData {
  CartanElement J;
  CartanElement I;
  MatrixField Q;  // off-diagonal wave amplitudes, q = [J, Q]

  double kappa() const { return J.coords[0] * I.coords[1] - J.coords[1] * I.coords[0]; }
};

struct ComponentResidual {
  std::string name;
  double max_norm = 0;
  std::array<double, 2> worst_point{0, 0};
};

struct ResidualField {
  std::vector<ComponentResidual> components;
  double h = 0;
  Grid grid;

  double max_norm() const {
    double m = 0;
    for (const auto& c : components) m = std::max(m, c.max_norm);
    return m;
  }

  const ComponentResidual& component(const std::string& name) const {
    for (const auto& c : components)
      if (c.name == name) return c;
    throw std::invalid_argument("no residual component named " + name);
  }

  nlohmann::json to_json() const {
    nlohmann::json comps = nlohmann::json::object();
    for (const auto& c : components)
      comps[c.name] = {{"max_norm", c.max_norm},
                       {"h", h},
                       {"worst_point", {c.worst_point[0], c.worst_point[1]}},
                       {"grid_spec",
                        {{"x", {grid.x_min, grid.x_max, grid.nx}}, {"t", {grid.t_min, grid.t_max, grid.nt}}}}};
    return comps;
  }
};

namespace detail {

// Sweep the grid accumulating per-component maxima; fn(x, t, update) must
// call update(component_index, |residual|).  Deterministic combination:
// per-point results are reduced in row-major order.
template <class Fn>
ResidualField sweep(const Grid& grid, double h, std::vector<std::string> names, Fn&& fn) {
  grid.validate(5);
  ResidualField out;
  out.h = h;
  out.grid = grid;
  for (auto& n : names) out.components.push_back({std::move(n), 0.0, {0, 0}});
  const auto xs = grid.xs(), ts = grid.ts();
  const std::size_t npts = xs.size() * ts.size();
  std::vector<std::vector<double>> vals(npts, std::vector<double>(out.components.size(), 0.0));
  parallel_for(npts, [&](std::size_t idx) {
    const double x = xs[idx / ts.size()], t = ts[idx % ts.size()];
    fn(x, t, [&](std::size_t ci, double v) { vals[idx][ci] = std::max(vals[idx][ci], v); });
  });
  for (std::size_t idx = 0; idx < npts; ++idx)
    for (std::size_t ci = 0; ci < out.components.size(); ++ci)
      if (vals[idx][ci] > out.components[ci].max_norm) {
        out.components[ci].max_norm = vals[idx][ci];
        out.components[ci].worst_point = {xs[idx / ts.size()], ts[idx % ts.size()]};
      }
  return out;
}

}  // namespace detail

// i [J, Q_t] - i [I, Q_x] + [[I,Q],[J,Q]] = 0
inline ResidualField nwave_residual(const NWaveData& data, const Grid& grid, double h) {
  return detail::sweep(grid, h, {"matrix"}, [&](double x, double t, auto update) {
    const Matrix Q = data.Q(x, t);
    const Matrix Qt = (data.Q(x, t + h) - data.Q(x, t - h)) / (2 * h);
    const Matrix Qx = (data.Q(x + h, t) - data.Q(x - h, t)) / (2 * h);
    const cplx i1(0, 1);
    const Matrix r = i1 * commutator(data.J.matrix, Qt) - i1 * commutator(data.I.matrix, Qx) +
                     commutator(commutator(data.I.matrix, Q), commutator(data.J.matrix, Q));
    update(0, max_abs(r));
  });
}

// Names and root coordinates of the 8 C_2 components; the bar marks the
// conjugate index.
inline const std::vector<std::pair<std::string, std::vector<int>>>& c2_component_roots() {
  static const std::vector<std::pair<std::string, std::vector<int>>> v{
      {"Q12b", {1, -1}}, {"Q12", {1, 1}},    {"Q11", {2, 0}},    {"Q22", {0, 2}},
      {"Q1b2", {-1, 1}}, {"Q1b2b", {-1, -1}}, {"Q1b1b", {-2, 0}}, {"Q2b2b", {0, -2}}};
  return v;
}

// The eight scalar equations equivalent to nwave_residual on C_2.  In the
// sqrt(2)-normalized long-root basis the exact decomposition carries
// quadratic coefficients 2*sqrt(2)*kappa and time/space factors alpha(J),
// alpha(I); reassembling the components reproduces the matrix residual
// identically.
inline ResidualField nwave_c2_components(const AlgebraBasis& basis, const NWaveData& data,
                                         const Grid& grid, double h) {
  if (basis.series_rank.series != Series::C || basis.series_rank.rank != 2)
    throw std::invalid_argument("nwave_c2_components needs the C_2 algebra");
  using Comp = std::map<std::string, cplx>;
  auto comps = [&](double x, double t) {
    Comp c;
    const Matrix Q = data.Q(x, t);
    for (const auto& [name, coords] : c2_component_roots()) c[name] = basis.component(Root{coords}, Q);
    return c;
  };
  std::vector<std::string> names;
  for (const auto& [name, coords] : c2_component_roots()) names.push_back(name);

  const double J1 = data.J.coords[0], J2 = data.J.coords[1];
  const double I1 = data.I.coords[0], I2 = data.I.coords[1];
  const double g = 2.0 * std::sqrt(2.0) * data.kappa();
  const cplx i1(0, 1);

  return detail::sweep(grid, h, names, [&, comps](double x, double t, auto update) {
    const Comp Q = comps(x, t);
    const Comp Qtp = comps(x, t + h), Qtm = comps(x, t - h);
    const Comp Qxp = comps(x + h, t), Qxm = comps(x - h, t);
    auto dt = [&](const char* k) { return (Qtp.at(k) - Qtm.at(k)) / (2 * h); };
    auto dx = [&](const char* k) { return (Qxp.at(k) - Qxm.at(k)) / (2 * h); };
    auto q = [&](const char* k) { return Q.at(k); };
    const cplx r[8] = {
        i1 * (J1 - J2) * dt("Q12b") - i1 * (I1 - I2) * dx("Q12b") +
            g * (q("Q12") * q("Q2b2b") - q("Q11") * q("Q1b2b")),
        i1 * (J1 + J2) * dt("Q12") - i1 * (I1 + I2) * dx("Q12") -
            g * (q("Q12b") * q("Q22") + q("Q11") * q("Q1b2")),
        i1 * 2.0 * J1 * dt("Q11") - i1 * 2.0 * I1 * dx("Q11") + g * q("Q12b") * q("Q12"),
        i1 * 2.0 * J2 * dt("Q22") - i1 * 2.0 * I2 * dx("Q22") + g * q("Q12") * q("Q1b2"),
        i1 * (J2 - J1) * dt("Q1b2") - i1 * (I2 - I1) * dx("Q1b2") +
            g * (q("Q12") * q("Q1b1b") - q("Q22") * q("Q1b2b")),
        -i1 * (J1 + J2) * dt("Q1b2b") + i1 * (I1 + I2) * dx("Q1b2b") +
            g * (q("Q12b") * q("Q1b1b") + q("Q1b2") * q("Q2b2b")),
        -i1 * 2.0 * J1 * dt("Q1b1b") + i1 * 2.0 * I1 * dx("Q1b1b") - g * q("Q1b2") * q("Q1b2b"),
        -i1 * 2.0 * J2 * dt("Q2b2b") + i1 * 2.0 * I2 * dx("Q2b2b") - g * q("Q12b") * q("Q1b2b")};
    for (int k = 0; k < 8; ++k) update(k, std::abs(r[k]));
  });
}

// i q_t + ad_J^{-1} q_xx - i P0 [q, ad_J^{-1} q_x] + 1/2 [q, (1-P0)[q, ad_J^{-1} q]] = 0
inline ResidualField nls_residual(const AlgebraBasis& basis, const CartanElement& J,
                                  const MatrixField& q, const Grid& grid, double h) {
  if (!J.regular) throw std::domain_error("nls_residual: J must be regular");
  return detail::sweep(grid, h, {"matrix"}, [&](double x, double t, auto update) {
    const Matrix qc = q(x, t);
    const Matrix qt = (q(x, t + h) - q(x, t - h)) / (2 * h);
    const Matrix qxp = q(x + h, t), qxm = q(x - h, t);
    const Matrix qx = (qxp - qxm) / (2 * h);
    const Matrix qxx = (qxp - 2 * qc + qxm) / (h * h);
    const cplx i1(0, 1);
    const Matrix inner = commutator(qc, ad_j_inverse(basis, J, qc));
    const Matrix r = i1 * qt + ad_j_inverse(basis, J, qxx) -
                     i1 * projector_p0(basis, commutator(qc, ad_j_inverse(basis, J, qx))) +
                     0.5 * commutator(qc, Matrix(inner - projector_p0(basis, inner)));
    update(0, max_abs(r));
  });
}

// i q_t + w1 q_xx + w2 q^2 qtilde = 0 and its partner with flipped signs.
inline ResidualField nls_sl2_residual(const ScalarField& q, const ScalarField& qtilde, double omega1,
                                      double omega2, const Grid& grid, double h) {
  return detail::sweep(grid, h, {"q", "qtilde"}, [&](double x, double t, auto update) {
    const cplx i1(0, 1);
    const cplx qc = q(x, t), bc = qtilde(x, t);
    const cplx rq = i1 * (q(x, t + h) - q(x, t - h)) / (2 * h) +
                    omega1 * (q(x + h, t) - 2.0 * qc + q(x - h, t)) / (h * h) + omega2 * qc * qc * bc;
    const cplx rb = i1 * (qtilde(x, t + h) - qtilde(x, t - h)) / (2 * h) -
                    omega1 * (qtilde(x + h, t) - 2.0 * bc + qtilde(x - h, t)) / (h * h) -
                    omega2 * qc * bc * bc;
    update(0, std::abs(rq));
    update(1, std::abs(rb));
  });
}

}  // namespace zsd
