#include "sacovest/experiment.hpp"

#include <filesystem>
#include <limits>

#include "sacovest/engine.hpp"
#include "sacovest/errors.hpp"
#include "sacovest/inference.hpp"
#include "sacovest/report.hpp"

namespace sacovest {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

json problem_record(ProblemId id) {
  const Problem p = Problem::make_default(id);
  json j;
  j["id"] = problem_ids()[static_cast<std::size_t>(id)];
  j["dim"] = p.dim();
  j["method"] = std::string(to_string(p.method()));
  j["sigma"] = default_noise_sigma(id);
  j["eta"] = p.recommended_eta();
  j["sigma_truth_mode"] = std::string(to_string(p.truth().sigma_mode));
  json params = json::object();
  if (const auto* q = std::get_if<L1QuadParams>(&p.params())) {
    params["q"] = to_json(q->q_diag);
    params["b"] = to_json(q->b);
    params["lambda"] = q->lambda;
  } else if (const auto* q = std::get_if<BoxQpParams>(&p.params())) {
    params["q"] = to_json(q->q);
    params["c"] = to_json(q->c);
    params["lo"] = to_json(q->lo);
    params["hi"] = to_json(q->hi);
  } else if (const auto* q = std::get_if<GameParams>(&p.params())) {
    params["payoff"] = to_json(q->payoff);
    params["lambda"] = q->lambda;
  }
  j["params"] = params;
  j["x_star"] = to_json(p.truth().x_star);
  return j;
}

namespace {

std::string in_dir(const ExperimentConfig& cfg, const char* name) { return (fs::path(cfg.out_dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

json base_summary(const ExperimentConfig& cfg, const Problem& problem) {
  json s;
  s["command"] = std::string(to_string(cfg.command));
  s["config"] = config_echo(cfg);
  s["sigma_truth_mode"] = std::string(to_string(problem.truth().sigma_mode));
  return s;
}

bool analytic(const Problem& p) { return p.truth().sigma_mode == SigmaTruthMode::Analytic; }

void add_run_fields(json& s, const Problem& problem, const RunResult& r, const ExperimentConfig& cfg) {
  s["n"] = r.n;
  s["x_bar"] = to_json(r.x_bar);
  s["x_final"] = to_json(r.x_final);
  s["sigma_hat"] = to_json(r.sigma_hat);
  s["tau"] = r.tau_infinite() ? json(nullptr) : json(r.tau);
  s["containment"] = r.containment;
  s["identified_fraction"] = r.identified_fraction;
  s["mean_error_norm"] = (r.x_bar - problem.truth().x_star).norm();
  if (analytic(problem)) {
    s["opnorm_error"] = operator_norm(r.sigma_hat - problem.truth().sigma_limit);
    s["sigma_limit"] = to_json(problem.truth().sigma_limit);
  }
  const Vector v = study_direction(cfg, problem);
  const auto ci = confidence_interval(r.x_bar, r.sigma_hat, std::max<std::int64_t>(r.n - cfg.burn_in, 1), v,
                                      cfg.level);
  s["ci"] = {{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}, {"direction", to_json(v)},
             {"covers_truth", ci.contains(v.dot(problem.truth().x_star))}};
}

json do_run(const ExperimentConfig& cfg, const Problem& problem, RunResult* out = nullptr) {
  const RunResult r = run(problem, make_run_config(cfg, problem, cfg.n));
  if (out) *out = r;
  write_trace_csv(in_dir(cfg, "trace.csv"), r);
  write_matrix_csv(in_dir(cfg, "sigma_hat.csv"), r.sigma_hat);
  json s = base_summary(cfg, problem);
  add_run_fields(s, problem, r, cfg);
  return s;
}

json do_diagnose(const ExperimentConfig& cfg, const Problem& problem) {
  RunResult r;
  json s = do_run(cfg, problem, &r);
  if (!analytic(problem)) {
    const RunConfig rc = make_run_config(cfg, problem, cfg.n);
    const Matrix mc = monte_carlo_sigma(problem, rc, cfg.mc_reps, cfg.threads);
    const Matrix& sigma_hat = r.sigma_hat;
    const double scale = operator_norm(mc);
    s["sigma_mc"] = to_json(mc);
    s["mc_reps"] = cfg.mc_reps;
    s["opnorm_error_mc"] = operator_norm(sigma_hat - mc);
    s["relative_error_mc"] = scale > 0.0 ? json(operator_norm(sigma_hat - mc) / scale) : json(nullptr);
  }
  return s;
}

json do_rate(const ExperimentConfig& cfg, const Problem& problem) {
  if (cfg.n_grid.size() < 2) throw ValidationError("rate needs n_grid with at least two entries");
  if (!analytic(problem)) throw ValidationError("rate needs a problem with an analytic limiting covariance");
  std::vector<RateRow> rows;
  std::vector<std::pair<double, double>> points;
  json per_n = json::array();
  for (const std::int64_t n : cfg.n_grid) {
    RunConfig rc = make_run_config(cfg, problem, n);
    rc.diagnostics_stride = n;
    const auto errors = run_replications(cfg.reps, cfg.threads, [&](std::int64_t rep) {
      RunConfig c = rc;
      c.stream = static_cast<std::uint64_t>(rep);
      return operator_norm(run(problem, c).sigma_hat - problem.truth().sigma_limit);
    });
    double sum = 0.0;
    for (std::size_t rep = 0; rep < errors.size(); ++rep) {
      rows.push_back({n, static_cast<std::int64_t>(rep), errors[rep]});
      sum += errors[rep];
    }
    const double mean = sum / static_cast<double>(errors.size());
    points.emplace_back(static_cast<double>(n), mean);
    per_n.push_back({{"n", n}, {"mean_opnorm_error", mean}});
  }
  write_rate_csv(in_dir(cfg, "rate.csv"), rows);
  const RateFit fit = rate_fit(points);
  json s = base_summary(cfg, problem);
  s["per_n"] = per_n;
  s["rate"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
  return s;
}

json do_coverage(const ExperimentConfig& cfg, const Problem& problem) {
  const RunConfig rc = make_run_config(cfg, problem, cfg.n);
  const Vector v = study_direction(cfg, problem);
  const CoverageResult res = coverage_study(problem, rc, cfg.reps, v, cfg.level, cfg.threads);
  std::vector<StudyRow> rows;
  double err_sum = 0.0;
  for (const auto& r : res.rows) {
    rows.push_back({cfg.n, r.rep, r.error, r.ci.lo, r.ci.hi, r.covered});
    err_sum += r.error;
  }
  write_coverage_csv(in_dir(cfg, "coverage.csv"), rows);
  json s = base_summary(cfg, problem);
  s["coverage"] = res.coverage;
  s["level"] = cfg.level;
  s["direction"] = to_json(v);
  s["target"] = v.dot(problem.truth().x_star);
  s["mean_opnorm_error"] = analytic(problem) ? json(err_sum / static_cast<double>(cfg.reps)) : json(nullptr);
  return s;
}

}  // namespace

json execute(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.command == Command::ListProblems) {
    json list = json::array();
    for (ProblemId id : {ProblemId::L1Quad, ProblemId::BoxQP, ProblemId::EntropyGame, ProblemId::NonconvexParabola}) {
      list.push_back(problem_record(id));
    }
    return {{"command", "list-problems"}, {"problems", list}};
  }
  const Problem problem = make_problem(cfg);
  ensure_dir(cfg.out_dir);
  json summary;
  switch (cfg.command) {
    case Command::Run: summary = do_run(cfg, problem); break;
    case Command::Diagnose: summary = do_diagnose(cfg, problem); break;
    case Command::Rate: summary = do_rate(cfg, problem); break;
    case Command::Coverage: summary = do_coverage(cfg, problem); break;
    case Command::ListProblems: break;
  }
  write_json(in_dir(cfg, "summary.json"), summary);
  return summary;
}

}  // namespace sacovest
