// Command-line front end: solve / simulate / frontier / gen subcommands with
// reproducible seeds and machine-readable JSON/CSV output.
//
// Exit codes: 0 success, 1 solver did not converge (output still written),
// 2 usage error, 3 file error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "rck/instances.hpp"
#include "rck/io.hpp"
#include "rck/kelly.hpp"
#include "rck/montecarlo.hpp"
#include "rck/qrck.hpp"
#include "rck/rck.hpp"
#include "rck/rng.hpp"

namespace {

using rck::io::json;

struct ProblemOpts {
  std::string problem;   // JSON file: finite model or sampler spec
  std::string instance;  // finite | mixture | two:PI:P
  int n = 20;
  int k = 100;
  std::uint64_t seed = 0;
};

struct SolverOpts {
  double eps = 1e-6;
  double dual_cap = 100.0;
  std::int64_t iters = 0;  // 0 = profile default
  std::int64_t batch = 0;  // 0 = profile default
};

void add_problem_flags(CLI::App* cmd, ProblemOpts& o) {
  cmd->add_option("--problem", o.problem,
                  "problem file (finite model or sampler spec JSON)");
  cmd->add_option("--instance", o.instance,
                  "generate the problem: finite | mixture | two:PI:P");
  cmd->add_option("--n", o.n, "assets for generated instances (default 20)");
  cmd->add_option("--k", o.k, "outcomes for generated finite instances (default 100)");
  cmd->add_option("--seed", o.seed, "seed for generators and simulation (default 0)");
}

void add_solver_flags(CLI::App* cmd, SolverOpts& o) {
  cmd->add_option("--eps", o.eps, "cash floor of the feasible simplex (default 1e-6)");
  cmd->add_option("--dual-cap", o.dual_cap, "upper clamp on the dual variable (default 100)");
  cmd->add_option("--iters", o.iters, "iteration budget (default: solver profile)");
  cmd->add_option("--batch", o.batch, "samples per stochastic gradient (default: profile)");
}

int apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  return threads;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size())
    throw std::invalid_argument("cannot parse " + what + " from '" + s + "'");
  return v;
}

rck::io::Problem load_problem(const ProblemOpts& o) {
  if (!o.problem.empty() && !o.instance.empty())
    throw std::invalid_argument("--problem and --instance are mutually exclusive");
  if (o.problem.empty() && o.instance.empty())
    throw std::invalid_argument("one of --problem or --instance is required");
  if (!o.problem.empty()) {
    try {
      return rck::io::problem_from_json(rck::io::read_json_file(o.problem));
    } catch (const std::logic_error& e) {
      throw std::runtime_error("invalid problem file " + o.problem + ": " + e.what());
    }
  }
  if (o.instance == "finite") return rck::gen_finite(o.n, o.k, o.seed);
  if (o.instance == "mixture") return rck::gen_lognormal_mixture(o.n, o.seed);
  if (o.instance.rfind("two:", 0) == 0) {
    const auto parts = split(o.instance, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("--instance two takes the form two:PI:P");
    return rck::gen_two_outcome(parse_double(parts[1], "PI"),
                                parse_double(parts[2], "P"));
  }
  throw std::invalid_argument("unknown --instance '" + o.instance +
                              "' (expected finite, mixture, or two:PI:P)");
}

json problem_echo(const ProblemOpts& o) {
  json j;
  if (!o.problem.empty()) {
    j["problem"] = o.problem;
  } else {
    j["instance"] = o.instance;
    j["n"] = o.n;
    j["k"] = o.k;
  }
  j["seed"] = o.seed;
  return j;
}

void emit(const json& j, const std::string& out_file) {
  const std::string text = j.dump(2) + "\n";
  if (out_file.empty())
    std::cout << text;
  else
    rck::io::write_text_file(out_file, text);
}

// one-line config echo prepended to CSV products
std::string csv_comment(const json& config) {
  return "# " + config.dump() + "\n";
}

struct LambdaFlags {
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool has_lambda = false;
  bool has_alpha = false;
  bool has_beta = false;

  // resolves the exponent, enforcing the --lambda xor (--alpha,--beta) rule
  double resolve(const std::string& method) const {
    if (has_lambda && (has_alpha || has_beta))
      throw std::invalid_argument(
          "--lambda and --alpha/--beta are mutually exclusive");
    if (has_alpha != has_beta)
      throw std::invalid_argument("--alpha and --beta must be given together");
    double lam = 0.0;
    if (has_alpha)
      lam = rck::lambda_from_alpha_beta(alpha, beta);
    else if (has_lambda)
      lam = lambda;
    if (!(lam >= 0.0))
      throw std::invalid_argument("lambda must be nonnegative");
    if (method == "kelly" && lam > 0.0)
      throw std::invalid_argument(
          "--method kelly is unconstrained; use --method rck for lambda > 0");
    return lam;
  }

  void echo(json& config, double resolved) const {
    config["lambda"] = resolved;
    if (has_alpha) {
      config["alpha"] = alpha;
      config["beta"] = beta;
    }
  }
};

rck::SolverConfig build_config(bool finite_problem, const SolverOpts& so) {
  rck::SolverConfig cfg = finite_problem ? rck::SolverConfig::finite_defaults()
                                         : rck::SolverConfig::sampled_defaults();
  cfg.eps = so.eps;
  cfg.dual_cap = so.dual_cap;
  if (so.iters > 0) cfg.max_iters = so.iters;
  if (so.batch > 0) cfg.batch_size = so.batch;
  return cfg;
}

int run_solve(const ProblemOpts& po, const SolverOpts& so,
              const LambdaFlags& lf, const std::string& method,
              const std::string& out_file, int threads) {
  apply_threads(threads);
  const double lam = lf.resolve(method);
  rck::io::Problem prob = load_problem(po);
  const bool finite = std::holds_alternative<rck::FiniteOutcomeModel>(prob);
  const rck::SolverConfig cfg = build_config(finite, so);

  rck::SolveReport rep;
  if (finite) {
    const auto& m = std::get<rck::FiniteOutcomeModel>(prob);
    if (method == "kelly")
      rep = rck::solve_kelly(m, cfg);
    else if (method == "rck")
      rep = rck::solve_rck(m, lam, cfg);
    else {
      rep = rck::solve_qrck(rck::estimate_moments(m), lam, cfg);
      // the quadratic program reports its own surrogate objective; replace it
      // with the exact growth and risk of the returned bet under the model
      rep.growth = rck::growth_rate(m, rep.bet);
      rep.risk_value = rck::risk_value(m, rep.bet, lam);
    }
  } else {
    const auto& s = *std::get<std::unique_ptr<rck::ReturnSampler>>(prob);
    if (method == "kelly")
      rep = rck::solve_kelly(s, cfg);
    else if (method == "rck")
      rep = rck::solve_rck(s, lam, cfg);
    else {
      rep = rck::solve_qrck(
          rck::estimate_moments(s, cfg.eval_samples, rck::streams::kMomentBase),
          lam, cfg);
      // held-out estimate of the bet's actual growth and risk, mirroring the
      // sampled solvers' reporting
      const auto ev = rck::kernels::evaluate_bet(
          s, rep.bet.weights(), lam, rck::streams::kHeldOutBase,
          cfg.eval_samples, rck::Exec::parallel);
      rep.growth = ev.growth_mean;
      rep.growth_std_error = ev.growth_std_error;
      rep.risk_value = ev.risk_mean;
      rep.risk_std_error = ev.risk_std_error;
    }
  }

  json config = problem_echo(po);
  config["command"] = "solve";
  config["method"] = method;
  lf.echo(config, lam);
  config["eps"] = cfg.eps;
  config["dual_cap"] = cfg.dual_cap;
  config["iters"] = cfg.max_iters;
  config["batch"] = cfg.batch_size;

  json out;
  out["config"] = std::move(config);
  out["report"] = rck::io::report_to_json(rep);
  if (lam > 0.0 && rep.risk_value <= 1.0) {
    const double alpha = lf.has_alpha ? lf.alpha : 0.7;
    out["certificate"] =
        rck::io::certificate_to_json(rck::certify(lam, alpha, rep.risk_value));
  }
  emit(out, out_file);
  return rep.converged ? 0 : 1;
}

int run_simulate(const ProblemOpts& po, const std::string& bet_file,
                 const std::string& from_solve, std::int64_t trajectories,
                 int horizon, std::vector<double> alpha_grid,
                 const std::string& csv_file, const std::string& out_file,
                 int threads) {
  apply_threads(threads);
  if (bet_file.empty() == from_solve.empty())
    throw std::invalid_argument("exactly one of --bet or --from-solve is required");

  rck::BetVector bet = rck::BetVector::cash(2);
  double lam = 0.0;
  const std::string source = bet_file.empty() ? from_solve : bet_file;
  try {
    const json j = rck::io::read_json_file(source);
    // solve reports nest the bet under "report"; bare bet files hold it at
    // the top level
    const json& body = j.contains("report") ? j.at("report") : j;
    bet = rck::io::bet_from_json(body);
    if (!from_solve.empty()) lam = body.value("lambda", 0.0);
  } catch (const std::logic_error& e) {
    throw std::runtime_error("invalid bet file " + source + ": " + e.what());
  }

  rck::io::Problem prob = load_problem(po);
  rck::SimulationPlan plan;
  plan.trajectories = trajectories;
  plan.horizon = horizon;
  if (!alpha_grid.empty()) plan.alpha_grid = std::move(alpha_grid);
  plan.seed = po.seed;

  rck::TrajectoryStats stats =
      std::holds_alternative<rck::FiniteOutcomeModel>(prob)
          ? rck::simulate(std::get<rck::FiniteOutcomeModel>(prob), bet, plan)
          : rck::simulate(*std::get<std::unique_ptr<rck::ReturnSampler>>(prob),
                          bet, plan);

  json config = problem_echo(po);
  config["command"] = "simulate";
  if (!bet_file.empty())
    config["bet"] = bet_file;
  else
    config["from_solve"] = from_solve;
  config["trajectories"] = plan.trajectories;
  config["horizon"] = plan.horizon;
  config["alpha_grid"] = plan.alpha_grid;
  config["lambda"] = lam;

  json out;
  out["config"] = config;
  out["summary"] = rck::io::stats_to_json(stats);
  if (lam > 0.0)
    out["validation"] = rck::io::validation_to_json(rck::validate_bound(stats, lam));
  emit(out, out_file);
  if (!csv_file.empty())
    rck::io::write_text_file(csv_file,
                             csv_comment(config) + rck::io::stats_to_csv(stats));
  return 0;
}

int run_frontier(const ProblemOpts& po, const SolverOpts& so,
                 const std::vector<double>& lambdas,
                 const std::vector<double>& fractions, double alpha,
                 std::int64_t trajectories, int horizon,
                 const std::string& out_file, int threads) {
  apply_threads(threads);
  if (lambdas.empty() && fractions.empty())
    throw std::invalid_argument("--lambdas and/or --fractions must be nonempty");

  rck::io::Problem prob = load_problem(po);
  const bool finite = std::holds_alternative<rck::FiniteOutcomeModel>(prob);
  const rck::SolverConfig cfg = build_config(finite, so);
  rck::SimulationPlan plan;
  plan.trajectories = trajectories;
  plan.horizon = horizon;
  plan.alpha_grid = {alpha};
  plan.seed = po.seed;

  const std::vector<rck::FrontierRow> rows =
      finite ? rck::frontier(std::get<rck::FiniteOutcomeModel>(prob), lambdas,
                             fractions, alpha, plan, cfg)
             : rck::frontier(*std::get<std::unique_ptr<rck::ReturnSampler>>(prob),
                             lambdas, fractions, alpha, plan, cfg);

  json config = problem_echo(po);
  config["command"] = "frontier";
  config["lambdas"] = lambdas;
  config["fractions"] = fractions;
  config["alpha"] = alpha;
  config["trajectories"] = plan.trajectories;
  config["horizon"] = plan.horizon;
  config["eps"] = cfg.eps;
  config["dual_cap"] = cfg.dual_cap;
  config["iters"] = cfg.max_iters;
  config["batch"] = cfg.batch_size;

  const std::string text = csv_comment(config) + rck::io::frontier_to_csv(rows);
  if (out_file.empty())
    std::cout << text;
  else
    rck::io::write_text_file(out_file, text);

  for (const rck::FrontierRow& row : rows)
    if (!row.converged) return 1;
  return 0;
}

int run_gen(const std::string& kind, int n, int k, double pi, double P,
            bool has_pi, bool has_P, std::uint64_t seed,
            const std::string& out_file) {
  json file;
  if (kind == "finite") {
    file = rck::io::model_to_json(rck::gen_finite(n, k, seed));
  } else if (kind == "mixture") {
    file = rck::io::mixture_spec_to_json(n, seed);
  } else if (kind == "two") {
    if (!has_pi || !has_P)
      throw std::invalid_argument("--kind two requires --pi and --P");
    file = rck::io::model_to_json(rck::gen_two_outcome(pi, P));
  } else {
    throw std::invalid_argument("unknown --kind '" + kind +
                                "' (expected finite, mixture, or two)");
  }

  const std::string text = file.dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else {
    rck::io::write_text_file(out_file, text);
    json config;
    config["command"] = "gen";
    config["kind"] = kind;
    if (kind != "two") {
      config["n"] = n;
      if (kind == "finite") config["k"] = k;
      config["seed"] = seed;
    } else {
      config["pi"] = pi;
      config["P"] = P;
    }
    config["out"] = out_file;
    std::cout << config.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth-optimal and drawdown-risk-constrained betting"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve = app.add_subcommand(
      "solve", "compute a bet vector and its optimality certificate");
  ProblemOpts solve_po;
  SolverOpts solve_so;
  LambdaFlags solve_lf;
  std::string method;
  std::string solve_out;
  int solve_threads = 0;
  solve->add_option("--method", method, "kelly | rck | qrck")
      ->required()
      ->check(CLI::IsMember({"kelly", "rck", "qrck"}));
  add_problem_flags(solve, solve_po);
  auto* lam_opt = solve->add_option("--lambda", solve_lf.lambda,
                                    "risk exponent (>= 0)");
  auto* alpha_opt =
      solve->add_option("--alpha", solve_lf.alpha, "drawdown threshold in (0,1)");
  auto* beta_opt =
      solve->add_option("--beta", solve_lf.beta, "drawdown probability in (0,1)");
  add_solver_flags(solve, solve_so);
  solve->add_option("--out", solve_out, "write the report here instead of stdout");
  solve->add_option("--threads", solve_threads, "cap worker threads (results identical)");

  // ---- simulate ----
  auto* sim = app.add_subcommand(
      "simulate", "Monte Carlo wealth trajectories for a fixed bet");
  ProblemOpts sim_po;
  std::string sim_bet, sim_from_solve, sim_csv, sim_out;
  std::int64_t sim_traj = 10000;
  int sim_horizon = 100;
  std::vector<double> sim_grid;
  int sim_threads = 0;
  add_problem_flags(sim, sim_po);
  sim->add_option("--bet", sim_bet, "bet file ({\"weights\": [...]})");
  sim->add_option("--from-solve", sim_from_solve,
                  "take the bet (and lambda) from a solve report");
  sim->add_option("--trajectories", sim_traj, "number of trajectories (default 10000)");
  sim->add_option("--horizon", sim_horizon, "periods per trajectory (default 100)");
  sim->add_option("--alpha-grid", sim_grid,
                  "drawdown thresholds (default 0.5,0.6,0.7,0.8,0.9)")
      ->delimiter(',');
  sim->add_option("--csv", sim_csv, "write per-trajectory CSV here");
  sim->add_option("--out", sim_out, "write the summary JSON here instead of stdout");
  sim->add_option("--threads", sim_threads, "cap worker threads (results identical)");

  // ---- frontier ----
  auto* fro = app.add_subcommand(
      "frontier", "growth vs drawdown-risk trade-off sweep");
  ProblemOpts fro_po;
  SolverOpts fro_so;
  std::vector<double> fro_lambdas, fro_fractions;
  double fro_alpha = 0.7;
  std::int64_t fro_traj = 10000;
  int fro_horizon = 100;
  std::string fro_out;
  int fro_threads = 0;
  add_problem_flags(fro, fro_po);
  fro->add_option("--lambdas", fro_lambdas, "risk exponents to sweep")->delimiter(',');
  fro->add_option("--fractions", fro_fractions, "fractional-Kelly fractions to sweep")
      ->delimiter(',');
  fro->add_option("--alpha", fro_alpha, "risk threshold for the risk column (default 0.7)");
  fro->add_option("--trajectories", fro_traj, "trajectories per row (default 10000)");
  fro->add_option("--horizon", fro_horizon, "periods per trajectory (default 100)");
  add_solver_flags(fro, fro_so);
  fro->add_option("--out", fro_out, "write the CSV here instead of stdout");
  fro->add_option("--threads", fro_threads, "cap worker threads (results identical)");

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "write a reproducible problem file");
  std::string gen_kind, gen_out;
  int gen_n = 20, gen_k = 100;
  double gen_pi = 0.0, gen_P = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "finite | mixture | two")->required();
  gen->add_option("--n", gen_n, "assets (default 20)");
  gen->add_option("--k", gen_k, "outcomes (default 100)");
  auto* pi_opt = gen->add_option("--pi", gen_pi, "win probability for --kind two");
  auto* P_opt = gen->add_option("--P", gen_P, "payoff for --kind two");
  gen->add_option("--seed", gen_seed, "generator seed (default 0)");
  gen->add_option("--out", gen_out, "write the problem file here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  solve_lf.has_lambda = lam_opt->count() > 0;
  solve_lf.has_alpha = alpha_opt->count() > 0;
  solve_lf.has_beta = beta_opt->count() > 0;

  try {
    if (solve->parsed())
      return run_solve(solve_po, solve_so, solve_lf, method, solve_out,
                       solve_threads);
    if (sim->parsed())
      return run_simulate(sim_po, sim_bet, sim_from_solve, sim_traj,
                          sim_horizon, sim_grid, sim_csv, sim_out, sim_threads);
    if (fro->parsed())
      return run_frontier(fro_po, fro_so, fro_lambdas, fro_fractions, fro_alpha,
                          fro_traj, fro_horizon, fro_out, fro_threads);
    if (gen->parsed())
      return run_gen(gen_kind, gen_n, gen_k, gen_pi, gen_P, pi_opt->count() > 0,
                     P_opt->count() > 0, gen_seed, gen_out);
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
