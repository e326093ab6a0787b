#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zsd/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace zsd;
using namespace std::complex_literals;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing: involution, defaults, rejection") {
  auto doc = canned_config("c2_example2");
  RunConfig cfg = parse_config(doc);
  CHECK(cfg.construction == RunConstruction::CRank1);
  CHECK(cfg.pair.lambda_minus == std::conj(cfg.pair.lambda_plus));
  CHECK(cfg.seeds.m_list.size() == 1);
  CHECK(max_abs(Matrix(cfg.seeds.m_list[0] - cfg.seeds.n_list[0].conjugate())) == 0.0);
  CHECK(cfg.fd_step == 1e-3);
  CHECK(cfg.tol("residual", 1e-4) == 1e-4);

  doc["tolerances"] = {{"residual", 1e-5}};
  CHECK(parse_config(doc).tol("residual", 1e-4) == 1e-5);

  doc["construction"] = "NoSuchThing";
  CHECK_THROWS_AS(parse_config(doc), std::invalid_argument);

  // explicit lambda_minus without involution requires explicit m seeds
  auto doc2 = canned_config("c2_example2");
  doc2["spectral"] = {{"lambda_plus", {0.3, 0.5}},
                      {"lambda_minus", {0.3, -0.5}},
                      {"involution", false}};
  CHECK_THROWS_AS(parse_config(doc2), std::invalid_argument);
}

TEST_CASE("battery: canned configs pass and are deterministic") {
  const RunConfig cfg = parse_config(canned_config("c2_example2"));
  const VerificationReport a = run_battery(cfg);
  const VerificationReport b = run_battery(cfg);
  CHECK(a.all_pass());
  CHECK(a.checks.size() > 10);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.find("group_membership") != nullptr);
  CHECK(a.find("delta_positivity") != nullptr);
}

TEST_CASE("battery: broken seed fails the isotropy check") {
  auto doc = canned_config("d2_bd");
  doc["seeds"] = {{"n", {{1, 1, 1, 2}}}};
  const VerificationReport rep = run_battery(parse_config(doc));
  CHECK_FALSE(rep.all_pass());
  const CheckResult* iso = rep.find("seed_isotropy");
  REQUIRE(iso != nullptr);
  CHECK_FALSE(iso->pass);
}

TEST_CASE("battery: stencil-room rejection") {
  auto doc = canned_config("c2_example2");
  doc["grid"]["nx"] = 3;
  CHECK_THROWS_AS(run_battery(parse_config(doc)), std::invalid_argument);
}

TEST_CASE("generate: ClosedForm3 dumps and bit-stable round trip") {
  auto doc = canned_config("closed_form_3");
  doc["grid"] = {{"x_min", -1.0}, {"x_max", 1.0}, {"nx", 5},
                 {"t_min", -1.0}, {"t_max", 1.0}, {"nt", 5}};
  const RunConfig cfg = parse_config(doc);
  const fs::path dir = fresh_dir("zsd_gen_cf3");
  REQUIRE(cmd_generate(cfg, dir.string()) == 0);

  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) (void)e, ++files;
  CHECK(files == 9);  // 8 components + Delta

  Example3Params p{cfg.pair, {2, 1}, {1, -1}, cfg.a, cfg.b, cfg.c};
  std::ifstream in(dir / "Q11.dat");
  REQUIRE(in.good());
  std::string line;
  int headers = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      ++headers;
      continue;
    }
    std::istringstream ss(line);
    double x, t, re, im;
    ss >> x >> t >> re >> im;
    const cplx want = example3_eval(p, x, t).Q.at("Q11");
    CHECK(re == want.real());  // %.17g round-trips doubles exactly
    CHECK(im == want.imag());
    ++rows;
  }
  CHECK(headers == 3);
  CHECK(rows == 25);
}

TEST_CASE("generate: singular point reported with partial output") {
  nlohmann::json doc{
      {"algebra", {{"series", "A"}, {"rank", 1}}},
      {"construction", "SlRank1"},
      {"spectral",
       {{"lambda_plus", {0.0, 1.0}}, {"lambda_minus", {0.0, -1.0}}, {"involution", false}}},
      {"seeds", {{"n", {{1, 1}}}, {"m", {{1, -1}}}}},
      {"dispersion", {{"flavor", "NLS"}, {"J", {1, -1}}}},
      {"grid", {{"x_min", -1}, {"x_max", 1}, {"nx", 5}, {"t_min", -1}, {"t_max", 1}, {"nt", 5}}}};
  const fs::path dir = fresh_dir("zsd_gen_singular");
  CHECK(cmd_generate(parse_config(doc), dir.string()) == 2);  // <m|n> = 0 at x = 0
  CHECK(fs::exists(dir / "Q_1m1.dat"));
}

TEST_CASE("verify: report schema and exit contract") {
  const fs::path dir = fresh_dir("zsd_verify");
  const std::string report = (dir / "report.json").string();
  CHECK(cmd_verify(parse_config(canned_config("sl2_double")), report) == 0);

  std::ifstream in(report);
  nlohmann::json j;
  in >> j;
  REQUIRE(j.contains("checks"));
  CHECK(j.contains("config_echo"));
  CHECK(j.contains("generator_seed"));
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("max_residual"));
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("pass"));
    CHECK((c.at("worst_point").is_null() || c.at("worst_point").size() == 2));
    CHECK(c.at("pass").get<bool>() ==
          (c.at("max_residual").get<double>() <= c.at("tolerance").get<double>()));
  }

  auto broken = canned_config("d2_bd");
  broken["seeds"] = {{"n", {{1, 1, 1, 2}}}};
  CHECK(cmd_verify(parse_config(broken), (dir / "broken.json").string()) == 1);
}

TEST_CASE("selftest battery covers the canned series") {
  const auto& names = selftest_config_names();
  CHECK(names.size() == 6);
  for (const auto& n : names) CHECK_NOTHROW(parse_config(canned_config(n)));
}
