// sacovest: run SA experiments and write trace/covariance/summary files.
//
//   sacovest run --config exp.json --seed 3 --out-dir out/
//   sacovest list-problems
//
// Exit status: 0 success, 1 invalid config or arguments, 2 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "sacovest/config.hpp"
#include "sacovest/errors.hpp"
#include "sacovest/experiment.hpp"
#include "sacovest/report.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> reps;
  std::optional<std::string> problem;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out-dir", f.out_dir, "directory for output files");
  cmd->add_option("--threads", f.threads, "worker threads for replications");
  cmd->add_option("--n", f.n, "iterations per run");
  cmd->add_option("--reps", f.reps, "replications");
  cmd->add_option("--problem", f.problem, "problem id (see list-problems)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online batch-means covariance estimation for nonsmooth stochastic approximation"};
  app.require_subcommand(1);

  Flags flags;
  std::optional<sacovest::Command> command;
  for (auto c : {sacovest::Command::Run, sacovest::Command::Rate, sacovest::Command::Coverage,
                 sacovest::Command::Diagnose}) {
    auto* sub = app.add_subcommand(std::string(sacovest::to_string(c)));
    add_flags(sub, flags);
    sub->callback([&command, c] { command = c; });
  }
  app.add_subcommand("list-problems", "print the problem zoo with default parameters")
      ->callback([&command] { command = sacovest::Command::ListProblems; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*command == sacovest::Command::ListProblems) {
      sacovest::ExperimentConfig cfg;
      cfg.command = sacovest::Command::ListProblems;
      std::cout << sacovest::to_canonical_json(sacovest::execute(cfg));
      return 0;
    }
    sacovest::ConfigOverrides ov;
    ov.command = command;
    ov.problem_id = flags.problem;
    ov.seed = flags.seed;
    ov.out_dir = flags.out_dir;
    ov.threads = flags.threads;
    ov.n = flags.n;
    ov.reps = flags.reps;
    const auto cfg = sacovest::load_config(flags.config, ov);
    sacovest::execute(cfg);
    std::cout << "wrote " << cfg.out_dir << "/summary.json\n";
    return 0;
  } catch (const sacovest::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const sacovest::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
