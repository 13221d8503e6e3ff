#include "rck/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "rck/instances.hpp"

namespace rck::io {

namespace {

// shortest round-trip decimal form, same doctrine as the JSON serializer
std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> doubles_from(const json& j, const char* key) {
  if (!j.contains(key))
    throw std::runtime_error(std::string("missing field \"") + key + '"');
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

json model_to_json(const FiniteOutcomeModel& m) {
  json j;
  j["probs"] = std::vector<double>(m.probs().begin(), m.probs().end());
  json rows = json::array();
  for (int k = 0; k < m.num_outcomes(); ++k) {
    const auto r = m.outcome(k);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["returns"] = std::move(rows);
  return j;
}

FiniteOutcomeModel model_from_json(const json& j) {
  const auto probs = doubles_from(j, "probs");
  if (!j.contains("returns") || !j.at("returns").is_array() ||
      j.at("returns").empty())
    throw std::runtime_error("problem file needs a nonempty \"returns\" array");
  const json& rows = j.at("returns");
  const auto first = rows.front().get<std::vector<double>>();
  const int n = static_cast<int>(first.size());
  std::vector<double> flat;
  flat.reserve(rows.size() * first.size());
  for (const json& row : rows) {
    const auto r = row.get<std::vector<double>>();
    if (static_cast<int>(r.size()) != n)
      throw std::runtime_error("problem file returns rows have mixed lengths");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  try {
    return FiniteOutcomeModel(probs, std::move(flat), n);
  } catch (const std::invalid_argument& e) {
    // a bad file is an input error, not a caller bug
    throw std::runtime_error(std::string("problem file invalid: ") + e.what());
  }
}

json mixture_spec_to_json(int n, std::uint64_t seed) {
  json j;
  j["kind"] = "mixture";
  j["n"] = n;
  j["seed"] = seed;
  return j;
}

Problem problem_from_json(const json& j) {
  if (j.contains("probs")) return model_from_json(j);
  if (j.value("kind", "") == "mixture") {
    const int n = j.value("n", 20);
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    return gen_lognormal_mixture(n, seed);
  }
  throw std::runtime_error(
      "problem file is neither a finite model (\"probs\") nor a sampler spec "
      "(\"kind\": \"mixture\")");
}

json bet_to_json(const BetVector& b) {
  json j;
  j["weights"] = std::vector<double>(b.weights().begin(), b.weights().end());
  return j;
}

BetVector bet_from_json(const json& j) {
  if (j.contains("weights")) return BetVector(doubles_from(j, "weights"));
  if (j.contains("bet"))  // accept a solve report, too
    return BetVector(doubles_from(j, "bet"));
  throw std::runtime_error("bet file needs a \"weights\" (or \"bet\") array");
}

json moments_to_json(const MomentEstimate& mom) {
  json j;
  j["mu"] = mom.mu;
  j["Sigma"] = mom.sigma;
  j["sample_count"] = mom.sample_count;
  return j;
}

MomentEstimate moments_from_json(const json& j) {
  MomentEstimate mom;
  mom.mu = doubles_from(j, "mu");
  mom.sigma = doubles_from(j, "Sigma");
  const std::size_t n = mom.mu.size();
  if (mom.sigma.size() != n * n)
    throw std::runtime_error("moments file: Sigma size is not n*n");
  mom.sample_count = j.value("sample_count", std::int64_t{0});
  mom.s.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      mom.s[i * n + k] = mom.sigma[i * n + k] + mom.mu[i] * mom.mu[k];
  return mom;
}

json report_to_json(const SolveReport& rep) {
  json j;
  j["method"] = rep.method;
  j["lambda"] = rep.lambda;
  j["bet"] = std::vector<double>(rep.bet.weights().begin(),
                                 rep.bet.weights().end());
  j["kappa"] = rep.kappa;
  j["growth"] = rep.growth;
  j["growth_std_error"] = rep.growth_std_error;
  j["risk_value"] = rep.risk_value;
  j["risk_std_error"] = rep.risk_std_error;
  j["kkt_residual"] = rep.kkt_residual;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["cash_floor_respected"] = rep.cash_floor_respected;
  j["dual_in_range"] = rep.dual_in_range;
  return j;
}

json certificate_to_json(const DrawdownCertificate& cert) {
  json j;
  j["certified"] = cert.certified;
  j["lambda"] = cert.lambda;
  j["alpha"] = cert.alpha;
  j["risk_value"] = cert.risk_value;
  j["bound"] = cert.bound;
  return j;
}

json stats_to_json(const TrajectoryStats& stats) {
  json j;
  j["generator"] = stats.generator;
  j["rng"] = "splitmix64";
  j["seed"] = stats.plan.seed;
  j["stream_offset"] = stats.plan.stream_offset;
  j["trajectories"] = stats.plan.trajectories;
  j["horizon"] = stats.plan.horizon;
  j["growth_estimate"] = stats.growth_estimate;
  j["growth_std_error"] = stats.growth_std_error;
  json risks = json::array();
  for (const RiskEstimate& est : stats.drawdown_risk) {
    json r;
    r["alpha"] = est.alpha;
    r["probability"] = est.probability;
    r["std_error"] = est.std_error;
    risks.push_back(std::move(r));
  }
  j["drawdown_risk"] = std::move(risks);
  return j;
}

std::string stats_to_csv(const TrajectoryStats& stats) {
  std::string out = "trajectory,min_wealth,final_log_wealth\n";
  for (std::size_t i = 0; i < stats.min_wealth.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt_double(stats.min_wealth[i]);
    out += ',';
    out += fmt_double(stats.final_log_wealth[i]);
    out += '\n';
  }
  return out;
}

std::string frontier_to_csv(const std::vector<FrontierRow>& rows) {
  std::string out = "method,param,growth,risk,bound,stderr\n";
  for (const FrontierRow& row : rows) {
    out += row.method;
    out += ',';
    out += fmt_double(row.param);
    out += ',';
    out += fmt_double(row.growth);
    out += ',';
    out += fmt_double(row.risk);
    out += ',';
    out += fmt_double(row.bound);
    out += ',';
    out += fmt_double(row.risk_std_error);
    out += '\n';
  }
  return out;
}

json validation_to_json(const BoundValidation& val) {
  json j;
  j["lambda"] = val.lambda;
  j["all_consistent"] = val.all_consistent;
  json checks = json::array();
  for (const BoundCheck& c : val.checks) {
    json e;
    e["alpha"] = c.alpha;
    e["bound"] = c.bound;
    e["empirical"] = c.empirical;
    e["std_error"] = c.std_error;
    e["margin"] = c.margin;
    e["consistent"] = c.consistent;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open())
    throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out.is_open())
    throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out.good())
    throw std::runtime_error("failed writing " + path);
}

}  // namespace rck::io
