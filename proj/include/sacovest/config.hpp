#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sacovest/engine.hpp"
#include "sacovest/problems.hpp"

namespace sacovest {

enum class Command { Run, Rate, Coverage, Diagnose, ListProblems };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);

/// One experiment, as read from a flat JSON file plus command-line overrides.
struct ExperimentConfig {
  Command command = Command::Run;
  std::string problem_id = "l1quad";
  /// Problem keys (sigma, state_scale, lambda, method, q, b, c, lo, hi, payoff).
  nlohmann::json problem_overrides = nlohmann::json::object();
  std::int64_t n = 10000;
  std::vector<std::int64_t> n_grid;
  std::int64_t reps = 1;
  std::uint64_t seed = 0;
  double alpha = 0.51;
  std::optional<double> eta;  // problem's recommended value when empty
  double batch_c = 1.0;
  double beta = 2.0 / (1.0 - 0.51);
  std::int64_t k_s = 0;
  double delta = 0.5;
  double level = 0.95;
  std::string out_dir = ".";
  int threads = 1;
  std::optional<std::vector<double>> direction;  // U e_1 when empty
  std::int64_t diagnostics_stride = 1;
  std::int64_t burn_in = 0;
  std::int64_t mc_reps = 200;

  void validate() const;
};

/// Values given on the command line; each one replaces the file's key.
struct ConfigOverrides {
  std::optional<Command> command;
  std::optional<std::string> problem_id;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> reps;
};

/// Parses and validates. `source` names the origin in error messages.
ExperimentConfig config_from_json(const nlohmann::json& j, const ConfigOverrides& overrides = {},
                                  const std::string& source = "<config>");
ExperimentConfig config_from_text(const std::string& text, const ConfigOverrides& overrides = {},
                                  const std::string& source = "<config>");
/// Reads the file at `path`; with no path only the overrides and defaults apply.
ExperimentConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& overrides = {});

/// The configured problem with overrides applied to its default parameters.
Problem make_problem(const ExperimentConfig& cfg);
RunConfig make_run_config(const ExperimentConfig& cfg, const Problem& problem, std::int64_t n);
/// The configured direction, or the first tangent direction of the ground truth.
Vector study_direction(const ExperimentConfig& cfg, const Problem& problem);

/// Config echo for reports. Leaves out threads and out_dir, which must not
/// change the summary.
nlohmann::json config_echo(const ExperimentConfig& cfg);

}  // namespace sacovest
