#pragma once
// Config-driven front end: parse a JSON run configuration, generate field
// dumps, and run the full verification battery behind the CLI commands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "zsd/closed_form.hpp"
#include "zsd/nlee.hpp"
#include "zsd/report.hpp"

namespace zsd {

enum class RunConstruction {
  SlRank1,
  BDRank1,
  CRank1,
  RankR,
  Sl2Double,
  ClosedForm2,
  ClosedForm3,
  ClosedForm4,
};

inline std::string run_construction_name(RunConstruction c) {
  switch (c) {
    case RunConstruction::SlRank1: return "SlRank1";
    case RunConstruction::BDRank1: return "BDRank1";
    case RunConstruction::CRank1: return "CRank1";
    case RunConstruction::RankR: return "RankR";
    case RunConstruction::Sl2Double: return "Sl2Double";
    case RunConstruction::ClosedForm2: return "ClosedForm2";
    case RunConstruction::ClosedForm3: return "ClosedForm3";
    case RunConstruction::ClosedForm4: return "ClosedForm4";
  }
  throw std::logic_error("bad construction");
}

inline RunConstruction run_construction_from_name(const std::string& s) {
  for (RunConstruction c :
       {RunConstruction::SlRank1, RunConstruction::BDRank1, RunConstruction::CRank1,
        RunConstruction::RankR, RunConstruction::Sl2Double, RunConstruction::ClosedForm2,
        RunConstruction::ClosedForm3, RunConstruction::ClosedForm4})
    if (run_construction_name(c) == s) return c;
  throw std::invalid_argument("unknown construction: " + s);
}

struct RunConfig {
  AlgebraSeries algebra{Series::C, 2};
  RunConstruction construction = RunConstruction::CRank1;
  SpectralPair pair = SpectralPair::involutive(cplx(0.3, 0.5));
  SeedVectors seeds;
  Flavor flavor = Flavor::NWave;
  std::vector<double> J{2, 1};
  std::vector<double> I{1, -1};
  Grid grid;
  double fd_step = 1e-3;
  std::map<std::string, double> tolerances;
  // closed-form parameters
  double a = 2, b = 1, c = 3;         // ClosedForm3 seed family
  cplx eta{1, 0}, nu{1, 0};           // ClosedForm4 / Sl2Double
  double J1 = 1;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};  // degenerate-limit sweep
  std::uint64_t generator_seed = 20240817;
  nlohmann::json echo;

  double tol(const std::string& name, double dflt) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? dflt : it->second;
  }

  bool pipeline() const {
    return construction == RunConstruction::SlRank1 || construction == RunConstruction::BDRank1 ||
           construction == RunConstruction::CRank1 || construction == RunConstruction::RankR;
  }
};

namespace detail {

inline cplx parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

inline Vector parse_seed_vector(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = parse_complex(j.at(k));
  return v;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
  RunConfig cfg;
  cfg.echo = doc;
  if (doc.contains("algebra")) {
    cfg.algebra.series = series_from_name(doc.at("algebra").at("series").get<std::string>());
    cfg.algebra.rank = doc.at("algebra").at("rank").get<int>();
  }
  cfg.construction = run_construction_from_name(doc.at("construction").get<std::string>());

  if (doc.contains("spectral")) {
    const auto& sp = doc.at("spectral");
    const cplx lp = detail::parse_complex(sp.at("lambda_plus"));
    const bool inv = sp.value("involution", true);
    if (inv) {
      cfg.pair = SpectralPair::involutive(lp);
    } else {
      cfg.pair = SpectralPair{lp, detail::parse_complex(sp.at("lambda_minus")), false};
      cfg.pair.validate();
    }
  }
  if (doc.contains("seeds")) {
    const auto& sd = doc.at("seeds");
    std::vector<Vector> n;
    for (const auto& v : sd.at("n")) n.push_back(detail::parse_seed_vector(v));
    if (sd.contains("m")) {
      cfg.seeds.n_list = std::move(n);
      for (const auto& v : sd.at("m")) cfg.seeds.m_list.push_back(detail::parse_seed_vector(v));
    } else {
      if (!cfg.pair.involution)
        throw std::invalid_argument("seeds.m required when involution is off");
      cfg.seeds = SeedVectors::involutive(std::move(n));
    }
  }
  if (doc.contains("dispersion")) {
    const auto& dp = doc.at("dispersion");
    const std::string fl = dp.value("flavor", "NWave");
    if (fl == "NWave")
      cfg.flavor = Flavor::NWave;
    else if (fl == "NLS")
      cfg.flavor = Flavor::NLS;
    else
      throw std::invalid_argument("unknown dispersion flavor: " + fl);
    if (dp.contains("J")) cfg.J = dp.at("J").get<std::vector<double>>();
    if (dp.contains("I")) cfg.I = dp.at("I").get<std::vector<double>>();
  }
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    cfg.grid.x_min = g.value("x_min", cfg.grid.x_min);
    cfg.grid.x_max = g.value("x_max", cfg.grid.x_max);
    cfg.grid.nx = g.value("nx", cfg.grid.nx);
    cfg.grid.t_min = g.value("t_min", cfg.grid.t_min);
    cfg.grid.t_max = g.value("t_max", cfg.grid.t_max);
    cfg.grid.nt = g.value("nt", cfg.grid.nt);
  }
  cfg.fd_step = doc.value("fd_step", cfg.fd_step);
  if (doc.contains("tolerances"))
    for (const auto& [k, v] : doc.at("tolerances").items()) cfg.tolerances[k] = v.get<double>();
  if (doc.contains("closed_form")) {
    const auto& cf = doc.at("closed_form");
    cfg.a = cf.value("a", cfg.a);
    cfg.b = cf.value("b", cfg.b);
    cfg.c = cf.value("c", cfg.c);
    cfg.J1 = cf.value("J1", cfg.J1);
    if (cf.contains("eta")) cfg.eta = detail::parse_complex(cf.at("eta"));
    cfg.nu = cf.contains("nu") ? detail::parse_complex(cf.at("nu")) : std::conj(cfg.eta);
  }
  if (doc.contains("epsilons")) cfg.epsilons = doc.at("epsilons").get<std::vector<double>>();
  cfg.generator_seed = doc.value("generator_seed", cfg.generator_seed);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc;
  in >> doc;
  return parse_config(doc);
}

namespace detail {

inline AlgebraBasis config_basis(const RunConfig& cfg) {
  switch (cfg.construction) {
    case RunConstruction::ClosedForm2:
    case RunConstruction::ClosedForm3:
      return build_algebra({Series::C, 2});
    case RunConstruction::ClosedForm4:
    case RunConstruction::Sl2Double:
      return build_algebra({Series::A, 1});
    default:
      return build_algebra(cfg.algebra);
  }
}

inline DispersionData config_dispersion(const RunConfig& cfg, const AlgebraBasis& basis) {
  DispersionData d;
  d.flavor = cfg.flavor;
  d.J = cartan_element(basis, cfg.J);
  if (cfg.flavor == Flavor::NWave) d.I = cartan_element(basis, cfg.I, false);
  return d;
}

inline std::pair<DressingState, DressedPotential> build_dressing(const RunConfig& cfg,
                                                                 const AlgebraBasis& basis,
                                                                 const DispersionData& disp) {
  switch (cfg.construction) {
    case RunConstruction::SlRank1: return dress_sl_rank1(basis, disp, cfg.pair, cfg.seeds);
    case RunConstruction::BDRank1: return dress_bd_rank1(basis, disp, cfg.pair, cfg.seeds);
    case RunConstruction::CRank1: return dress_c_rank1(basis, disp, cfg.pair, cfg.seeds);
    case RunConstruction::RankR: return dress_rank_r(basis, disp, cfg.pair, cfg.seeds);
    default: throw std::invalid_argument("not a pipeline construction");
  }
}

// 3x3 corner/center sample of the grid for pointwise identity checks
inline std::vector<std::pair<double, double>> corner_points(const Grid& g) {
  const double xm = 0.5 * (g.x_min + g.x_max), tm = 0.5 * (g.t_min + g.t_max);
  std::vector<std::pair<double, double>> pts;
  for (double x : {g.x_min, xm, g.x_max})
    for (double t : {g.t_min, tm, g.t_max}) pts.emplace_back(x, t);
  return pts;
}

inline std::map<std::string, cplx> pipeline_components(const AlgebraBasis& basis, const Matrix& Q) {
  std::map<std::string, cplx> out;
  for (const auto& [name, coords] : c2_component_roots()) out[name] = basis.component(Root{coords}, Q);
  return out;
}

inline double rel_dev(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-12);
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace detail

// --- verification battery -------------------------------------------------

inline VerificationReport run_battery(const RunConfig& cfg, const std::string& prefix = "") {
  VerificationReport rep;
  rep.config_echo = cfg.echo;
  rep.generator_seed = cfg.generator_seed;
  cfg.grid.validate(5);
  auto add = [&](std::string name, double r, double tol,
                 std::optional<std::array<double, 2>> wp = std::nullopt, std::string note = {}) {
    return std::ref(rep.add(prefix + std::move(name), r, tol, wp, std::move(note)));
  };

  const AlgebraBasis basis = detail::config_basis(cfg);
  auto cw = verify_cartan_weyl(basis, cfg.tol("cartan_weyl", 1e-12));
  for (const auto& c : cw.checks) rep.add(prefix + c.name, c.max_residual, c.tolerance, c.worst_point, c.note);

  const double tol_alg = cfg.tol("algebraic", 1e-10);
  const double tol_proj = cfg.tol("projector", 1e-12);
  const double tol_res = cfg.tol("residual", 1e-4);
  const double tol_cross = cfg.tol("cross_check", 1e-10);
  const double conv_factor = cfg.tol("convergence_factor", 3.5);
  const auto pts = detail::corner_points(cfg.grid);

  // reusable second-order convergence deficit: factor between h and h/2
  auto deficit = [&](double r_h, double r_h2) {
    return std::max(0.0, conv_factor - r_h / std::max(r_h2, 1e-300));
  };

  if (cfg.pipeline()) {
    const DispersionData disp = detail::config_dispersion(cfg, basis);

    if (basis.has_s()) {
      const double iso = cfg.seeds.s_isotropy_deviation(basis.s_matrix);
      const bool needs_iso = cfg.construction == RunConstruction::BDRank1 ||
                             cfg.construction == RunConstruction::RankR;
      if (needs_iso) {
        add("seed_isotropy", iso, tol_alg);
        if (iso > tol_alg) return rep;  // construction would throw; stop here
      }
    }

    DressingState st;
    DressedPotential pot;
    try {
      std::tie(st, pot) = detail::build_dressing(cfg, basis, disp);
      // force one evaluation so singular-at-origin configs are caught here
      st.pi_plus(cfg.grid.x_min, cfg.grid.t_min);
    } catch (const SingularPointError& e) {
      add("singular_point", 1.0, 0.0, std::array<double, 2>{e.x, e.t}, e.what());
      return rep;
    }

    try {
    // group membership at seeded-random lambda over the corner points
    if (basis.has_s()) {
      std::mt19937_64 rng(cfg.generator_seed);
      std::uniform_real_distribution<double> U(-2.0, 2.0);
      auto sample_lambda = [&] {
        while (true) {
          const cplx lam(U(rng), U(rng));
          if (std::abs(lam - cfg.pair.lambda_plus) > 0.3 &&
              std::abs(lam - cfg.pair.lambda_minus) > 0.3)
            return lam;
        }
      };
      double worst = 0;
      std::array<double, 2> at{0, 0};
      for (int k = 0; k < 20; ++k) {
        const cplx lam = sample_lambda();
        for (auto [x, t] : pts) {
          const double dev =
              group_deviation(dressing_factor_eval(st, x, t, lam), basis.s_matrix, basis.s_inverse);
          if (dev > worst) worst = dev, at = {x, t};
        }
      }
      add("group_membership", worst, tol_alg, at, "20 seeded lambda x 9 grid points");
    }

    // projector / algebraic system at the corner points
    {
      double d_alg = 0, d_q1 = 0, d_diag = 0, d_rank = 0, d_idem = 0;
      for (auto [x, t] : pts) {
        const Matrix p1 = st.pi_plus(x, t), pm = st.pi_minus(x, t);
        const Matrix q1 = pot.q1(x, t);
        d_diag = std::max(d_diag, q1.diagonal().cwiseAbs().maxCoeff());
        if (basis.has_s()) {
          const Matrix sp1 = basis.s_matrix * p1.transpose() * basis.s_inverse;
          const Matrix spm = basis.s_matrix * pm.transpose() * basis.s_inverse;
          d_alg = std::max({d_alg, max_abs(Matrix(p1 * sp1)), max_abs(Matrix(pm * spm)),
                            max_abs(Matrix(p1 + sp1 - p1 * spm - pm * sp1)),
                            max_abs(Matrix(pm + spm - p1 * spm - pm * sp1))});
          d_q1 = std::max(d_q1, membership_deviation(q1, basis.s_matrix, basis.s_inverse));
        } else {
          d_idem = std::max({d_idem, max_abs(Matrix(p1 * p1 - p1)), std::abs(p1.trace() - 1.0)});
        }
        if (cfg.construction == RunConstruction::RankR) {
          const int N = basis.rep_dim;
          d_rank = std::max({d_rank, max_abs(Matrix(p1 + pm - Matrix::Identity(N, N))),
                             max_abs(Matrix(p1 * p1 - p1)),
                             std::abs(p1.trace() - static_cast<double>(basis.rank()))});
        }
      }
      if (basis.has_s()) {
        add("projector_algebraic_system", d_alg, tol_alg);
        add("q1_membership", d_q1, tol_proj);
      } else {
        add("projector_idempotent", d_idem, tol_proj);
      }
      add("q1_offdiagonal", d_diag, tol_proj);
      if (cfg.construction == RunConstruction::RankR)
        add("rank_r_completeness", d_rank, tol_proj);
    }

    // pi-ODE residuals with convergence factor
    {
      auto odes = [&](double h) {
        auto sub = verify_pi_odes(st, pot, disp.J, cfg.grid, h, tol_res);
        double m = 0;
        for (const auto& c : sub.checks) m = std::max(m, c.max_residual);
        return std::pair{sub, m};
      };
      auto [at_h, m_h] = odes(cfg.fd_step);
      for (const auto& c : at_h.checks)
        rep.add(prefix + c.name, c.max_residual, c.tolerance, c.worst_point, c.note);
      auto [c1, m1] = odes(1e-2);
      auto [c2, m2] = odes(5e-3);
      add("pi_ode_convergence_deficit", deficit(m1, m2), 0.0, std::nullopt,
          "residuals " + std::to_string(m1) + " (h=1e-2) -> " + std::to_string(m2) + " (h=5e-3)");
    }

    // NLEE residuals
    {
      auto nlee = [&](double h) -> ResidualField {
        if (cfg.flavor == Flavor::NWave) {
          NWaveData data{disp.J, *disp.I, pot.Q};
          if (basis.series_rank.series == Series::C && basis.rank() == 2)
            return nwave_c2_components(basis, data, cfg.grid, h);
          return nwave_residual(data, cfg.grid, h);
        }
        return nls_residual(basis, disp.J, pot.q1, cfg.grid, h);
      };
      const ResidualField at_h = nlee(cfg.fd_step);
      for (const auto& c : at_h.components)
        add("nlee_" + c.name, c.max_norm, tol_res, c.worst_point, "h=" + std::to_string(cfg.fd_step));
      const double m1 = nlee(1e-2).max_norm(), m2 = nlee(5e-3).max_norm();
      add("nlee_convergence_deficit", deficit(m1, m2), 0.0, std::nullopt,
          "residuals " + std::to_string(m1) + " (h=1e-2) -> " + std::to_string(m2) + " (h=5e-3)");
    }

    // asymptotic scattering data (B/C/D only: d_j needs fundamental weights)
    if (basis.has_s()) {
      try {
        auto as = asymptotic_data(st, basis, disp.J, disp);
        const double settle_tol = cfg.construction == RunConstruction::RankR ? 1e-6 : 1e-8;
        std::string note = "x_far=" + std::to_string(as.x_far) +
                           ", d_plus=" + detail::join_ints(as.d_plus) + " (units of ln c_mu)";
        if (as.d_minus_supported)
          note += ", d_minus=" + detail::join_ints(as.d_minus);
        else
          note += ", d_minus unsupported (w0 unknown for this series)";
        add("asymptotics_settle", as.settle_deviation, settle_tol, std::nullopt, note);
      } catch (const std::exception& e) {
        add("asymptotics_settle", 1.0, 0.0, std::nullopt, e.what());
      }
    }

    // involution nonsingularity for the C rank-1 construction
    if (cfg.construction == RunConstruction::CRank1 && cfg.pair.involution) {
      double min_d = 1e300;
      std::array<double, 2> at{0, 0};
      for (double x : Grid::axis(cfg.grid.x_min, cfg.grid.x_max, 41))
        for (double t : Grid::axis(cfg.grid.t_min, cfg.grid.t_max, 41)) {
          const double v = std::min(std::norm(st.rho(x, t)) + std::norm(st.A(x, t)),
                                    st.Delta(x, t).real());
          if (v < min_d) min_d = v, at = {x, t};
        }
      add("delta_positivity", min_d > 0 ? 0.0 : 1.0, 0.0, at, "min Delta = " + std::to_string(min_d));
    }
    } catch (const SingularPointError& e) {
      add("singular_point", 1.0, 0.0, std::array<double, 2>{e.x, e.t}, e.what());
    }
    return rep;
  }

  // --- closed-form constructions ---
  if (cfg.construction == RunConstruction::ClosedForm2) {
    Example2Params p{cfg.pair, {cfg.J[0], cfg.J[1]}, {cfg.I[0], cfg.I[1]}, cfg.seeds.n_list.at(0),
                     cfg.seeds.m_list.at(0)};
    const DispersionData disp = detail::config_dispersion(cfg, basis);
    auto [st, pot] = dress_c_rank1(basis, disp, cfg.pair, cfg.seeds);
    double worst = 0;
    std::array<double, 2> at{0, 0};
    for (double x : cfg.grid.xs())
      for (double t : cfg.grid.ts()) {
        const auto v = example2_eval(p, x, t);
        const auto pipe = detail::pipeline_components(basis, pot.Q(x, t));
        for (const auto& [name, q] : v.Q) {
          const double d = detail::rel_dev(q, pipe.at(name));
          if (d > worst) worst = d, at = {x, t};
        }
      }
    add("closed_form_cross_check", worst, tol_cross, at, "vs dress_c_rank1");

    auto Qf = [p, basis](double x, double t) -> Matrix {
      Matrix X = Matrix::Zero(4, 4);
      const auto v = example2_eval(p, x, t);
      for (const auto& [name, coords] : c2_component_roots())
        X += v.Q.at(name) * basis.root_vector(coords);
      return X;
    };
    NWaveData data{disp.J, *disp.I, Qf};
    const ResidualField at_h = nwave_c2_components(basis, data, cfg.grid, cfg.fd_step);
    for (const auto& c : at_h.components)
      add("nlee_" + c.name, c.max_norm, tol_res, c.worst_point, "h=" + std::to_string(cfg.fd_step));
    const double m1 = nwave_c2_components(basis, data, cfg.grid, 1e-2).max_norm();
    const double m2 = nwave_c2_components(basis, data, cfg.grid, 5e-3).max_norm();
    add("nlee_convergence_deficit", deficit(m1, m2), 0.0);

    if (cfg.pair.involution) {
      double min_d = 1e300;
      for (double x : Grid::axis(cfg.grid.x_min, cfg.grid.x_max, 41))
        for (double t : Grid::axis(cfg.grid.t_min, cfg.grid.t_max, 41)) {
          const auto v = example2_eval(p, x, t);
          min_d = std::min(min_d, std::norm(v.rho) + std::norm(v.A));
        }
      add("delta_positivity", min_d > 0 ? 0.0 : 1.0, 0.0, std::nullopt,
          "min |rho|^2+|A|^2 = " + std::to_string(min_d));
    }
    return rep;
  }

  if (cfg.construction == RunConstruction::ClosedForm3) {
    Example3Params p{cfg.pair, {cfg.J[0], cfg.J[1]}, {cfg.I[0], cfg.I[1]}, cfg.a, cfg.b, cfg.c};
    const DispersionData disp = detail::config_dispersion(cfg, basis);
    auto [st, pot] = dress_rank_r(basis, disp, cfg.pair, example3_seeds(cfg.a, cfg.b, cfg.c));
    double worst = 0;
    std::array<double, 2> at{0, 0};
    for (double x : cfg.grid.xs())
      for (double t : cfg.grid.ts()) {
        const auto v = example3_eval(p, x, t);
        const auto pipe = detail::pipeline_components(basis, pot.Q(x, t));
        for (const auto& [name, q] : v.Q) {
          const double d = detail::rel_dev(q, pipe.at(name));
          if (d > worst) worst = d, at = {x, t};
        }
        worst = std::max(worst, detail::rel_dev(cplx(v.Delta), -st.R(x, t).determinant()));
      }
    add("closed_form_cross_check", worst, tol_cross, at, "vs dress_rank_r (incl. Delta = -det R)");

    auto Qf = [p, basis](double x, double t) -> Matrix {
      Matrix X = Matrix::Zero(4, 4);
      const auto v = example3_eval(p, x, t);
      for (const auto& [name, coords] : c2_component_roots())
        X += v.Q.at(name) * basis.root_vector(coords);
      return X;
    };
    NWaveData data{disp.J, *disp.I, Qf};
    const ResidualField at_h = nwave_c2_components(basis, data, cfg.grid, cfg.fd_step);
    for (const auto& c : at_h.components)
      add("nlee_" + c.name, c.max_norm, tol_res, c.worst_point, "h=" + std::to_string(cfg.fd_step));
    const double m1 = nwave_c2_components(basis, data, cfg.grid, 1e-2).max_norm();
    const double m2 = nwave_c2_components(basis, data, cfg.grid, 5e-3).max_norm();
    add("nlee_convergence_deficit", deficit(m1, m2), 0.0);

    double min_d = 1e300;
    for (double x : Grid::axis(cfg.grid.x_min, cfg.grid.x_max, 41))
      for (double t : Grid::axis(cfg.grid.t_min, cfg.grid.t_max, 41))
        min_d = std::min(min_d, example3_eval(p, x, t).Delta);
    add("delta_positivity", min_d > 0 ? 0.0 : 1.0, 0.0, std::nullopt,
        "min Delta = " + std::to_string(min_d));
    return rep;
  }

  // ClosedForm4 / Sl2Double: sl(2) NLS system and the degenerate limit
  Example4Params p{cfg.pair, cfg.J1, cfg.eta, cfg.nu};
  if (cfg.construction == RunConstruction::ClosedForm4) {
    ScalarField q = [p](double x, double t) { return example4_eval(p, x, t).q; };
    ScalarField b = [p](double x, double t) { return example4_eval(p, x, t).qtilde; };
    const double w1 = 1.0 / (2 * p.J1), w2 = 2.0 / p.J1;
    auto res = [&](double h) { return nls_sl2_residual(q, b, w1, w2, cfg.grid, h); };
    const ResidualField at_h = res(cfg.fd_step);
    for (const auto& c : at_h.components)
      add("nlee_" + c.name, c.max_norm, tol_res, c.worst_point, "h=" + std::to_string(cfg.fd_step));
    const double m1 = res(1e-2).max_norm(), m2 = res(5e-3).max_norm();
    add("nlee_convergence_deficit", deficit(m1, m2), 0.0, std::nullopt,
        "residuals " + std::to_string(m1) + " (h=1e-2) -> " + std::to_string(m2) + " (h=5e-3)");

    if (cfg.pair.involution) {
      double min_d = 1e300, cross = 0;
      for (double x : Grid::axis(cfg.grid.x_min, cfg.grid.x_max, 41))
        for (double t : Grid::axis(cfg.grid.t_min, cfg.grid.t_max, 41)) {
          const double dc = example4_delta_cosh(p, x, t);
          min_d = std::min(min_d, dc);
          cross = std::max(cross, detail::rel_dev(example4_eval(p, x, t).Delta, dc));
        }
      add("delta_positivity", min_d > 0 ? 0.0 : 1.0, 0.0, std::nullopt,
          "min cosh-form Delta = " + std::to_string(min_d));
      add("delta_cosh_form", cross, tol_cross);
    }
  }

  // degenerate double-dressing limit, common to ClosedForm4 and Sl2Double
  {
    Vector n0(2), m0(2);
    n0 << 1.0, p.nu;
    m0 << 1.0, p.eta;
    const double xc = 0.5 * (cfg.grid.x_min + cfg.grid.x_max) + 0.6;
    const double tc = 0.5 * (cfg.grid.t_min + cfg.grid.t_max) + 0.3;
    const cplx ref = std::sqrt(2.0) * example4_eval(p, xc, tc).q;
    std::vector<double> errs;
    std::string note = "|q_double/(sqrt2 q_closed) - 1| at eps =";
    for (double eps : cfg.epsilons) {
      auto pair2 = SpectralPair::involutive(cfg.pair.lambda_plus + eps);
      auto pot2 = double_dress_sl2(p.J1, cfg.pair, pair2, n0, m0);
      errs.push_back(std::abs(pot2.q1(xc, tc)(0, 1) / ref - 1.0));
      note += " " + std::to_string(eps) + ":" + std::to_string(errs.back());
    }
    double min_ratio = 1e300;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
      min_ratio = std::min(min_ratio, errs[i] / std::max(errs[i + 1], 1e-300));
    add("extrapolation_error", errs.back(), cfg.tol("extrapolation", 1e-3), std::nullopt, note);
    add("extrapolation_linear_deficit", std::max(0.0, 5.0 - min_ratio), 0.0, std::nullopt,
        "error must drop ~10x per eps decade");
  }

  if (cfg.construction == RunConstruction::Sl2Double) {
    // two distinct poles: genuine 2-soliton, still solves the sl(2) system
    auto pair2 = SpectralPair::involutive(cfg.pair.lambda_plus + cplx(0.4, 0.2));
    Vector n0(2), m0(2);
    n0 << 1.0, p.nu;
    m0 << 1.0, p.eta;
    auto pot2 = double_dress_sl2(p.J1, cfg.pair, pair2, n0, m0);
    ScalarField q = [q1 = pot2.q1](double x, double t) { return q1(x, t)(0, 1); };
    ScalarField b = [q1 = pot2.q1](double x, double t) { return q1(x, t)(1, 0); };
    // raw gl(2) entries: omega2 = 1/J1 (2/J1 applies to sqrt2-normalized components)
    const double w1 = 1.0 / (2 * p.J1), w2 = 1.0 / p.J1;
    auto res = [&](double h) { return nls_sl2_residual(q, b, w1, w2, cfg.grid, h); };
    const ResidualField at_h = res(cfg.fd_step);
    for (const auto& c : at_h.components)
      add("nlee_" + c.name, c.max_norm, tol_res, c.worst_point, "h=" + std::to_string(cfg.fd_step));
    const double m1 = res(1e-2).max_norm(), m2 = res(5e-3).max_norm();
    add("nlee_convergence_deficit", deficit(m1, m2), 0.0);
  }
  return rep;
}

// --- field dumps ----------------------------------------------------------

namespace detail {

inline void write_rows(std::ofstream& out, const Grid& g, const ScalarField& f) {
  char buf[128];
  for (double x : g.xs())
    for (double t : g.ts()) {
      const cplx v = f(x, t);
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", x, t, v.real(), v.imag());
      out << buf;
    }
}

inline void write_field(const std::filesystem::path& file, const nlohmann::json& echo,
                        const std::string& component, const Grid& g, const ScalarField& f) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "# component: " << component << "\n";
  out << "# config: " << echo.dump() << "\n";
  out << "# columns: x t re im\n";
  write_rows(out, g, f);  // throws SingularPointError mid-file; partial rows stay flushed
}

}  // namespace detail

inline int cmd_generate(const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  cfg.grid.validate(2);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  auto dump = [&](const std::string& name, const ScalarField& f) {
    detail::write_field(dir / (name + ".dat"), cfg.echo, name, cfg.grid, f);
  };
  try {
    if (cfg.pipeline()) {
      const AlgebraBasis basis = detail::config_basis(cfg);
      const DispersionData disp = detail::config_dispersion(cfg, basis);
      auto [st, pot] = detail::build_dressing(cfg, basis, disp);
      for (const Root& alpha : basis.roots) dump(alpha.name(), pot.root_coefficient(basis, alpha));
      if (cfg.construction == RunConstruction::CRank1) dump("Delta", st.Delta);
      if (cfg.construction == RunConstruction::RankR)
        dump("Delta", [R = st.R](double x, double t) { return -R(x, t).determinant(); });
    } else if (cfg.construction == RunConstruction::ClosedForm2) {
      Example2Params p{cfg.pair, {cfg.J[0], cfg.J[1]}, {cfg.I[0], cfg.I[1]},
                       cfg.seeds.n_list.at(0), cfg.seeds.m_list.at(0)};
      for (const auto& [name, coords] : c2_component_roots())
        dump(name, [p, name = name](double x, double t) { return example2_eval(p, x, t).Q.at(name); });
      dump("Delta", [p](double x, double t) { return example2_eval(p, x, t).Delta; });
    } else if (cfg.construction == RunConstruction::ClosedForm3) {
      Example3Params p{cfg.pair, {cfg.J[0], cfg.J[1]}, {cfg.I[0], cfg.I[1]}, cfg.a, cfg.b, cfg.c};
      for (const auto& [name, coords] : c2_component_roots())
        dump(name, [p, name = name](double x, double t) { return example3_eval(p, x, t).Q.at(name); });
      dump("Delta", [p](double x, double t) { return cplx(example3_eval(p, x, t).Delta); });
    } else if (cfg.construction == RunConstruction::ClosedForm4) {
      Example4Params p{cfg.pair, cfg.J1, cfg.eta, cfg.nu};
      dump("q", [p](double x, double t) { return example4_eval(p, x, t).q; });
      dump("qtilde", [p](double x, double t) { return example4_eval(p, x, t).qtilde; });
      dump("Delta", [p](double x, double t) { return example4_eval(p, x, t).Delta; });
    } else {  // Sl2Double: degenerate-mode fields at the smallest eps + eps table
      Example4Params p{cfg.pair, cfg.J1, cfg.eta, cfg.nu};
      Vector n0(2), m0(2);
      n0 << 1.0, p.nu;
      m0 << 1.0, p.eta;
      const double eps = cfg.epsilons.back();
      auto pair2 = SpectralPair::involutive(cfg.pair.lambda_plus + eps);
      auto pot = double_dress_sl2(p.J1, cfg.pair, pair2, n0, m0);
      dump("q", [q1 = pot.q1](double x, double t) { return q1(x, t)(0, 1); });
      dump("qtilde", [q1 = pot.q1](double x, double t) { return q1(x, t)(1, 0); });
      std::ofstream tab(dir / "extrapolation.dat");
      tab << "# columns: eps q_re q_im err_vs_sqrt2_closed\n# config: " << cfg.echo.dump() << "\n";
      const double xc = 0.5 * (cfg.grid.x_min + cfg.grid.x_max) + 0.6;
      const double tc = 0.5 * (cfg.grid.t_min + cfg.grid.t_max) + 0.3;
      const cplx ref = std::sqrt(2.0) * example4_eval(p, xc, tc).q;
      char buf[128];
      for (double e : cfg.epsilons) {
        auto pr2 = SpectralPair::involutive(cfg.pair.lambda_plus + e);
        auto po = double_dress_sl2(p.J1, cfg.pair, pr2, n0, m0);
        const cplx v = po.q1(xc, tc)(0, 1);
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", e, v.real(), v.imag(),
                      std::abs(v / ref - 1.0));
        tab << buf;
      }
    }
  } catch (const SingularPointError& e) {
    std::fprintf(stderr, "generate: %s\n", e.what());
    return 2;
  }
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& report_path) {
  const VerificationReport rep = run_battery(cfg);
  const nlohmann::json j = rep.to_json();
  if (report_path.empty() || report_path == "-") {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report: " + report_path);
    out << j.dump(2) << "\n";
  }
  for (const auto& c : rep.checks)
    if (!c.pass)
      std::fprintf(stderr, "FAIL %s: %.3e > %.3e\n", c.name.c_str(), c.max_residual, c.tolerance);
  return rep.all_pass() ? 0 : 1;
}

// --- canned selftest configs ----------------------------------------------

inline nlohmann::json canned_config(const std::string& name) {
  using nlohmann::json;
  const json grid{{"x_min", -2}, {"x_max", 2}, {"nx", 9}, {"t_min", -2}, {"t_max", 2}, {"nt", 9}};
  const json nwave{{"flavor", "NWave"}, {"J", {2, 1}}, {"I", {1, -1}}};
  const json spectral{{"lambda_plus", {0.3, 0.5}}, {"involution", true}};
  if (name == "c2_example2")
    return json{{"algebra", {{"series", "C"}, {"rank", 2}}},
                {"construction", "CRank1"},
                {"spectral", spectral},
                {"seeds", {{"n", {{1.0, 0.8, 1.2, 0.9}}}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "c2_example3")
    return json{{"algebra", {{"series", "C"}, {"rank", 2}}},
                {"construction", "RankR"},
                {"spectral", spectral},
                {"seeds",
                 {{"n", {{1, 2, 1, -2}, {1, -2, 3, 6}}}, {"m", {{1, -2, 3, 6}, {1, 2, 1, -2}}}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "b2_bd")
    return json{{"algebra", {{"series", "B"}, {"rank", 2}}},
                {"construction", "BDRank1"},
                {"spectral", spectral},
                {"seeds", {{"n", {{1, 1, 0, 1, 1}}}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "d2_bd")
    return json{{"algebra", {{"series", "D"}, {"rank", 2}}},
                {"construction", "BDRank1"},
                {"spectral", spectral},
                {"seeds", {{"n", {{1, 1, 1, 1}}}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "sl2_rank1")
    return json{{"algebra", {{"series", "A"}, {"rank", 1}}},
                {"construction", "SlRank1"},
                {"spectral", spectral},
                {"seeds", {{"n", {{1, 1}}}}},
                {"dispersion", {{"flavor", "NLS"}, {"J", {1, -1}}}},
                {"grid", grid}};
  if (name == "sl2_double")
    return json{{"construction", "Sl2Double"},
                {"spectral", spectral},
                {"closed_form", {{"J1", 1.0}, {"eta", {0.7, 0.4}}}},
                {"grid", grid}};
  if (name == "closed_form_2")
    return json{{"construction", "ClosedForm2"},
                {"spectral", spectral},
                {"seeds", {{"n", {{1.0, 0.8, 1.2, 0.9}}}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "closed_form_3")
    return json{{"construction", "ClosedForm3"},
                {"spectral", spectral},
                {"closed_form", {{"a", 2.0}, {"b", 1.0}, {"c", 3.0}}},
                {"dispersion", nwave},
                {"grid", grid}};
  if (name == "closed_form_4")
    return json{{"construction", "ClosedForm4"},
                {"spectral", spectral},
                {"closed_form", {{"J1", 1.0}, {"eta", {0.7, 0.4}}}},
                {"grid", grid}};
  throw std::invalid_argument("unknown canned config: " + name);
}

inline const std::vector<std::string>& selftest_config_names() {
  static const std::vector<std::string> names{"c2_example2", "c2_example3", "b2_bd", "d2_bd",
                                             "sl2_rank1",   "sl2_double"};
  return names;
}

inline int cmd_selftest() {
  VerificationReport all;
  all.config_echo = nlohmann::json::object({{"selftest", selftest_config_names()}});
  for (const std::string& name : selftest_config_names()) {
    const RunConfig cfg = parse_config(canned_config(name));
    all.generator_seed = cfg.generator_seed;
    all.append(run_battery(cfg, name + "/"));
  }
  int failed = 0;
  for (const auto& c : all.checks)
    if (!c.pass) {
      ++failed;
      std::printf("FAIL %-48s %.3e > %.3e\n", c.name.c_str(), c.max_residual, c.tolerance);
    }
  std::printf("selftest: %zu checks, %d failed\n", all.checks.size(), failed);
  std::printf("%s\n", all.to_json().dump(2).c_str());
  return failed == 0 ? 0 : 1;
}

}  // namespace zsd
