#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actuation/cmdp_solver.hpp"
#include "actuation/system_model.hpp"

namespace actuation {

inline constexpr int kSchemaVersion = 1;

/// One experiment scenario.
///
/// Text form is `key = value` per line, `#` comments, matrices as bracketed
/// row lists (`[[0.8, 0.2], [0.1, 0.9]]`, may span lines). Required keys:
/// `schema_version`, `P`, `C`, `p_s`, `c`, `c_max`.
struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  Matrix transitions;
  Matrix costs;
  std::vector<double> p_s;
  double c = 1.0;
  double c_max = 0.2;
  double w = 100.0;
  SolverParams solver;
  std::int64_t horizon = 1'000'000;
  int replications = 20;
  std::uint64_t seed = 1;
  std::string output;
  std::optional<int> initial_state;  ///< unset: x0 drawn from the stationary law

  Model model(double success_probability) const;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string to_text(const ScenarioConfig& cfg);

}  // namespace actuation
