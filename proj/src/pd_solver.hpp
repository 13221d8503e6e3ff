#pragma once

// Internal entry points to the projected primal-dual gradient machinery,
// shared by the growth-only (lambda = 0) and risk-constrained solvers.

#include <string>

#include "rck/config.hpp"
#include "rck/model.hpp"

namespace rck::detail {

SolveReport pd_solve_finite(const FiniteOutcomeModel& m, double lambda,
                            const SolverConfig& cfg, const std::string& method);

SolveReport pd_solve_sampled(const ReturnSampler& sampler, double lambda,
                             const SolverConfig& cfg, const std::string& method);

}  // namespace rck::detail
