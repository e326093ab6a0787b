#pragma once
// Named-check verification reports with JSON serialization.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace zsd {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::optional<std::array<double, 2>> worst_point;  // [x, t]
  std::string note;  // free-form extra info (e.g. measured shift multiplicities)
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  nlohmann::json config_echo;
  std::uint64_t generator_seed = 0;

  CheckResult& add(std::string name, double max_residual, double tolerance,
                   std::optional<std::array<double, 2>> worst_point = std::nullopt,
                   std::string note = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.max_residual = max_residual;
    c.tolerance = tolerance;
    c.pass = max_residual <= tolerance;
    c.worst_point = worst_point;
    c.note = std::move(note);
    checks.push_back(std::move(c));
    return checks.back();
  }

  void append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json jchecks = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json jc{{"name", c.name},
                        {"max_residual", c.max_residual},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}};
      if (c.worst_point)
        jc["worst_point"] = {(*c.worst_point)[0], (*c.worst_point)[1]};
      else
        jc["worst_point"] = nullptr;
      if (!c.note.empty()) jc["note"] = c.note;
      jchecks.push_back(std::move(jc));
    }
    return nlohmann::json{{"checks", std::move(jchecks)},
                          {"config_echo", config_echo},
                          {"generator_seed", generator_seed}};
  }
};

}  // namespace zsd
