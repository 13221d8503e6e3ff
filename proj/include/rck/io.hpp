#pragma once

#include <memory>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "rck/model.hpp"
#include "rck/montecarlo.hpp"
#include "rck/qrck.hpp"
#include "rck/rck.hpp"

namespace rck::io {

using json = nlohmann::ordered_json;

// Problem file: {"probs": [pi_1..pi_K], "returns": [[r_11..r_1n], ...]}.
// The loader normalizes probabilities and rejects files whose cash column
// deviates from 1 by more than 1e-12.
json model_to_json(const FiniteOutcomeModel& m);
FiniteOutcomeModel model_from_json(const json& j);

// Sampler-spec file: {"kind": "mixture", "n": ..., "seed": ...}.
json mixture_spec_to_json(int n, std::uint64_t seed);

// A problem file holds either a finite model or a sampler spec; load_problem
// dispatches on the presence of "probs".
using Problem = std::variant<FiniteOutcomeModel, std::unique_ptr<ReturnSampler>>;
Problem problem_from_json(const json& j);

json bet_to_json(const BetVector& b);
BetVector bet_from_json(const json& j);

json moments_to_json(const MomentEstimate& mom);
MomentEstimate moments_from_json(const json& j);

json report_to_json(const SolveReport& rep);

json certificate_to_json(const DrawdownCertificate& cert);

// Summary statistics only; the per-trajectory table goes to CSV.
json stats_to_json(const TrajectoryStats& stats);
// "trajectory,min_wealth,final_log_wealth" rows.
std::string stats_to_csv(const TrajectoryStats& stats);

// "method,param,growth,risk,bound,stderr" rows, one per frontier point.
std::string frontier_to_csv(const std::vector<FrontierRow>& rows);

json validation_to_json(const BoundValidation& val);

// File helpers; throw std::runtime_error with the path on failure.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rck::io
