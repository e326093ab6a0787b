// CLI front end: generate field dumps, verify configurations, run the
// built-in selftest battery.  Exit status 0 iff every check passes.

#include "CLI11.hpp"

#include "zsd/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"soliton dressing toolkit for generalised Zakharov-Shabat systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", report_path;

  auto* gen = app.add_subcommand("generate", "evaluate a configured solution on a grid");
  gen->add_option("--config", config_path, "JSON run configuration")->required();
  gen->add_option("--out", out_dir, "output directory for field dumps");

  auto* ver = app.add_subcommand("verify", "run the verification battery for a configuration");
  ver->add_option("--config", config_path, "JSON run configuration")->required();
  ver->add_option("--report", report_path, "JSON report path ('-' for stdout)");

  auto* self = app.add_subcommand("selftest", "run the canned configuration battery");
  (void)self;

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return zsd::cmd_generate(zsd::load_config(config_path), out_dir);
    if (ver->parsed()) return zsd::cmd_verify(zsd::load_config(config_path), report_path);
    return zsd::cmd_selftest();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
