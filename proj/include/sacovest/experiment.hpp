#pragma once

#include <string>

#include "json.hpp"

#include "sacovest/config.hpp"
#include "sacovest/problems.hpp"

namespace sacovest {

/// Runs the configured command, writes its files into cfg.out_dir and
/// returns the summary that was written to summary.json.
///
///   run       trace.csv, sigma_hat.csv, summary.json
///   rate      rate.csv, summary.json (needs >= 2 entries in n_grid)
///   coverage  coverage.csv, summary.json
///   diagnose  trace.csv, sigma_hat.csv, summary.json; adds a Monte Carlo
///             covariance when the problem has no analytic one
nlohmann::json execute(const ExperimentConfig& cfg);

/// Default parameter record of a zoo problem, as printed by list-problems.
nlohmann::json problem_record(ProblemId id);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);

}  // namespace sacovest
