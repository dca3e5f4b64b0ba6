#include "sacovest/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "sacovest/errors.hpp"

namespace sacovest {

using nlohmann::json;

namespace {

const std::set<std::string>& run_keys() {
  static const std::set<std::string> keys{
      "command", "problem", "n",      "n_grid",  "reps",      "seed",      "alpha",
      "eta",     "batch_c", "beta",   "k_s",     "delta",     "level",     "out_dir",
      "threads", "direction", "diagnostics_stride", "burn_in", "mc_reps"};
  return keys;
}

const std::set<std::string>& problem_keys() {
  static const std::set<std::string> keys{"sigma", "state_scale", "lambda", "method", "q",
                                          "b",     "c",           "lo",     "hi",     "payoff"};
  return keys;
}

std::string join_ids() {
  std::string out;
  for (const auto& id : problem_ids()) out += (out.empty() ? "" : ", ") + id;
  return out;
}

[[noreturn]] void bad_type(const std::string& source, const std::string& key, const char* want) {
  throw ParseError(source + ": key \"" + key + "\" must be " + want);
}

double get_real(const json& v, const std::string& source, const std::string& key) {
  if (!v.is_number()) bad_type(source, key, "a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_type(source, key, "finite");
  return x;
}

std::int64_t get_int(const json& v, const std::string& source, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    // Accept 1e5 style literals when they are whole numbers.
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e18) return static_cast<std::int64_t>(x);
  }
  bad_type(source, key, "an integer");
}

std::uint64_t get_seed(const json& v, const std::string& source) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const std::int64_t s = get_int(v, source, "seed");
  if (s < 0) bad_type(source, "seed", "a nonnegative integer");
  return static_cast<std::uint64_t>(s);
}

std::string get_string(const json& v, const std::string& source, const std::string& key) {
  if (!v.is_string()) bad_type(source, key, "a string");
  return v.get<std::string>();
}

std::vector<double> get_real_list(const json& v, const std::string& source, const std::string& key) {
  if (!v.is_array()) bad_type(source, key, "an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_real(e, source, key));
  return out;
}

Vector to_vector(const std::vector<double>& xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

Vector vector_key(const json& o, const std::string& key) {
  return to_vector(get_real_list(o.at(key), "problem overrides", key));
}

Matrix matrix_key(const json& o, const std::string& key) {
  const json& rows = o.at(key);
  if (!rows.is_array() || rows.empty()) bad_type("problem overrides", key, "a nonempty array of rows");
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::Index n = -1;
  Matrix out;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = get_real_list(rows[static_cast<std::size_t>(i)], "problem overrides", key);
    if (n < 0) {
      n = static_cast<Eigen::Index>(row.size());
      out.resize(m, n);
    }
    if (static_cast<Eigen::Index>(row.size()) != n) throw ValidationError(key + ": rows have unequal length");
    for (Eigen::Index jj = 0; jj < n; ++jj) out(i, jj) = row[static_cast<std::size_t>(jj)];
  }
  return out;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Run: return "run";
    case Command::Rate: return "rate";
    case Command::Coverage: return "coverage";
    case Command::Diagnose: return "diagnose";
    case Command::ListProblems: return "list-problems";
  }
  return "run";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (Command c : {Command::Run, Command::Rate, Command::Coverage, Command::Diagnose, Command::ListProblems}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (!problem_id_from_string(problem_id)) {
    throw ValidationError("unknown problem \"" + problem_id + "\"; valid ids: " + join_ids());
  }
  if (n < 1) throw ValidationError("n must be at least 1");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ValidationError("n_grid entries must be at least 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ValidationError("n_grid must be strictly increasing");
  }
  if (reps < 1) throw ValidationError("reps must be at least 1");
  if (!(alpha > 0.5 && alpha < 1.0)) throw ValidationError("alpha must lie in (0.5, 1)");
  if (eta && !(*eta > 0.0)) throw ValidationError("eta must be positive");
  if (!(batch_c > 0.0)) throw ValidationError("batch_c must be positive");
  if (!batch_exponent_admissible(alpha, beta)) throw ValidationError("beta must exceed 1/(1-alpha)");
  if (k_s < 0) throw ValidationError("k_s must be nonnegative");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must lie in (0, 1)");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  if (diagnostics_stride < 1) throw ValidationError("diagnostics_stride must be at least 1");
  if (burn_in < 0) throw ValidationError("burn_in must be nonnegative");
  if (burn_in >= n) throw ValidationError("burn_in must be smaller than n");
  if (mc_reps < 2) throw ValidationError("mc_reps must be at least 2");
}

ExperimentConfig config_from_json(const json& j, const ConfigOverrides& overrides, const std::string& source) {
  if (!j.is_object()) throw ParseError(source + ": top level must be a JSON object");
  ExperimentConfig cfg;
  bool beta_given = false;
  for (const auto& [key, v] : j.items()) {
    if (problem_keys().count(key)) {
      cfg.problem_overrides[key] = v;
      continue;
    }
    if (!run_keys().count(key)) throw ValidationError(source + ": unknown key \"" + key + "\"");
    if (key == "command") {
      const auto c = command_from_string(get_string(v, source, key));
      if (!c) throw ValidationError(source + ": unknown command \"" + v.get<std::string>() + "\"");
      cfg.command = *c;
    } else if (key == "problem") {
      cfg.problem_id = get_string(v, source, key);
    } else if (key == "n") {
      cfg.n = get_int(v, source, key);
    } else if (key == "n_grid") {
      if (!v.is_array()) bad_type(source, key, "an array of integers");
      cfg.n_grid.clear();
      for (const auto& e : v) cfg.n_grid.push_back(get_int(e, source, key));
    } else if (key == "reps") {
      cfg.reps = get_int(v, source, key);
    } else if (key == "seed") {
      cfg.seed = get_seed(v, source);
    } else if (key == "alpha") {
      cfg.alpha = get_real(v, source, key);
    } else if (key == "eta") {
      cfg.eta = get_real(v, source, key);
    } else if (key == "batch_c") {
      cfg.batch_c = get_real(v, source, key);
    } else if (key == "beta") {
      cfg.beta = get_real(v, source, key);
      beta_given = true;
    } else if (key == "k_s") {
      cfg.k_s = get_int(v, source, key);
    } else if (key == "delta") {
      cfg.delta = get_real(v, source, key);
    } else if (key == "level") {
      cfg.level = get_real(v, source, key);
    } else if (key == "out_dir") {
      cfg.out_dir = get_string(v, source, key);
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(get_int(v, source, key));
    } else if (key == "direction") {
      cfg.direction = get_real_list(v, source, key);
    } else if (key == "diagnostics_stride") {
      cfg.diagnostics_stride = get_int(v, source, key);
    } else if (key == "burn_in") {
      cfg.burn_in = get_int(v, source, key);
    } else if (key == "mc_reps") {
      cfg.mc_reps = get_int(v, source, key);
    }
  }
  if (!beta_given) cfg.beta = 2.0 / (1.0 - cfg.alpha);

  if (overrides.command) cfg.command = *overrides.command;
  if (overrides.problem_id) cfg.problem_id = *overrides.problem_id;
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.threads) cfg.threads = *overrides.threads;
  if (overrides.n) cfg.n = *overrides.n;
  if (overrides.reps) cfg.reps = *overrides.reps;

  cfg.validate();
  return cfg;
}

ExperimentConfig config_from_text(const std::string& text, const ConfigOverrides& overrides,
                                  const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  return config_from_json(j, overrides, source);
}

ExperimentConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& overrides) {
  if (!path) return config_from_json(json::object(), overrides, "<flags>");
  std::ifstream in(*path);
  if (!in) throw IoError("cannot read config file " + *path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str(), overrides, *path);
}

Problem make_problem(const ExperimentConfig& cfg) {
  const auto id = problem_id_from_string(cfg.problem_id);
  if (!id) throw ValidationError("unknown problem \"" + cfg.problem_id + "\"; valid ids: " + join_ids());
  const json& o = cfg.problem_overrides;
  auto has = [&](const char* k) { return o.contains(k); };

  ProblemParams params;
  switch (*id) {
    case ProblemId::L1Quad: {
      auto p = default_l1quad_params();
      if (has("q")) p.q_diag = vector_key(o, "q");
      if (has("b")) p.b = vector_key(o, "b");
      if (has("lambda")) p.lambda = get_real(o.at("lambda"), "problem overrides", "lambda");
      params = p;
      break;
    }
    case ProblemId::BoxQP: {
      auto p = default_boxqp_params();
      if (has("q")) p.q = matrix_key(o, "q");
      if (has("c")) p.c = vector_key(o, "c");
      if (has("lo")) p.lo = vector_key(o, "lo");
      if (has("hi")) p.hi = vector_key(o, "hi");
      params = p;
      break;
    }
    case ProblemId::EntropyGame: {
      auto p = default_game_params();
      if (has("payoff")) p.payoff = matrix_key(o, "payoff");
      if (has("lambda")) p.lambda = get_real(o.at("lambda"), "problem overrides", "lambda");
      params = p;
      break;
    }
    case ProblemId::NonconvexParabola: params = ParabolaParams{}; break;
  }
  static const std::map<ProblemId, std::set<std::string>> shape_keys{
      {ProblemId::L1Quad, {"q", "b", "lambda"}},
      {ProblemId::BoxQP, {"q", "c", "lo", "hi"}},
      {ProblemId::EntropyGame, {"payoff", "lambda"}},
      {ProblemId::NonconvexParabola, {}}};
  for (const char* k : {"q", "b", "c", "lo", "hi", "payoff", "lambda"}) {
    if (has(k) && !shape_keys.at(*id).count(k)) {
      throw ValidationError("key \"" + std::string(k) + "\" does not apply to problem " + cfg.problem_id);
    }
  }

  Method method = default_method(*id);
  if (has("method")) {
    const auto m = method_from_string(get_string(o.at("method"), "problem overrides", "method"));
    if (!m) throw ValidationError("unknown method \"" + o.at("method").get<std::string>() + "\"");
    method = *m;
  }
  const double sigma = has("sigma") ? get_real(o.at("sigma"), "problem overrides", "sigma") : default_noise_sigma(*id);
  if (!(sigma >= 0.0)) throw ValidationError("sigma must be nonnegative");
  const double state_scale =
      has("state_scale") ? get_real(o.at("state_scale"), "problem overrides", "state_scale") : 0.0;

  Eigen::Index d = 2;
  if (const auto* p = std::get_if<L1QuadParams>(&params)) d = p->b.size();
  if (const auto* p = std::get_if<BoxQpParams>(&params)) d = p->c.size();
  if (const auto* p = std::get_if<GameParams>(&params)) d = 2 * p->payoff.rows();
  try {
    return Problem(std::move(params), method, NoiseModel::isotropic(d, sigma, state_scale));
  } catch (const InvalidBounds& e) {
    throw ValidationError(e.what());
  } catch (const StrictComplementarityViolated& e) {
    throw ValidationError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ValidationError(e.what());
  }
}

RunConfig make_run_config(const ExperimentConfig& cfg, const Problem& problem, std::int64_t n) {
  RunConfig rc;
  rc.n = n;
  rc.seed = cfg.seed;
  rc.step = StepSchedule(cfg.eta.value_or(problem.recommended_eta()), cfg.alpha);
  rc.batch = BatchSchedule(cfg.batch_c, cfg.beta);
  rc.k_s = std::min(cfg.k_s, n);
  rc.delta = cfg.delta;
  rc.diagnostics_stride = cfg.diagnostics_stride;
  rc.burn_in = std::min(cfg.burn_in, std::max<std::int64_t>(n - 1, 0));
  return rc;
}

Vector study_direction(const ExperimentConfig& cfg, const Problem& problem) {
  if (cfg.direction) {
    Vector v = to_vector(*cfg.direction);
    if (v.size() != problem.dim()) throw ValidationError("direction length must equal the problem dimension");
    return v;
  }
  const GroundTruth& t = problem.truth();
  if (t.rank() > 0) return t.tangent_basis.col(0);
  return Vector::Unit(problem.dim(), 0);
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["command"] = std::string(to_string(cfg.command));
  j["problem"] = cfg.problem_id;
  j["problem_overrides"] = cfg.problem_overrides;
  j["n"] = cfg.n;
  j["n_grid"] = cfg.n_grid;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["alpha"] = cfg.alpha;
  j["eta"] = cfg.eta ? json(*cfg.eta) : json(nullptr);
  j["batch_c"] = cfg.batch_c;
  j["beta"] = cfg.beta;
  j["k_s"] = cfg.k_s;
  j["delta"] = cfg.delta;
  j["level"] = cfg.level;
  j["direction"] = cfg.direction ? json(*cfg.direction) : json(nullptr);
  j["diagnostics_stride"] = cfg.diagnostics_stride;
  j["burn_in"] = cfg.burn_in;
  j["mc_reps"] = cfg.mc_reps;
  return j;
}

}  // namespace sacovest
