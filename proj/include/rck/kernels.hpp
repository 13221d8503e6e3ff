#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rck/model.hpp"

namespace rck {

// Every bulk kernel has a serial reference implementation and an
// OpenMP-parallel one. Both partition work into fixed-size blocks keyed by
// stream id, store per-block results by index, and fold them in index order,
// so the output is bit-identical for any thread count (and identical between
// the two policies). Tests compare them; the benchmark tool times them.
enum class Exec { serial, parallel };

namespace kernels {

inline constexpr std::int64_t kBlockSamples = 4096;

// Sample mean of r (per coordinate) and of the outer products r_outer =
// E[(r-1)(r-1)^T] precursor: accumulates sum rho and sum rho rho^T with
// rho = r - 1, over `count` samples drawn from streams starting at
// stream_base.
struct MomentSums {
  std::vector<double> sum_rho;        // length n
  std::vector<double> sum_rho_outer;  // n x n, row major
  std::int64_t count = 0;
};
MomentSums accumulate_moments(const ReturnSampler& sampler,
                              std::uint64_t stream_base, std::int64_t count,
                              Exec exec);

// One-pass held-out evaluation of a fixed bet: growth statistics, risk
// statistics for exponent lambda, and the per-asset expectations that enter
// the optimality conditions, E[r_i / y] and E[r_i / y^(lambda+1)] with
// y = r.b. Ruin samples (y == 0) push risk to +infinity and growth to
// -infinity, which is the intended signal.
struct BetEvaluation {
  double growth_mean = 0.0;
  double growth_std_error = 0.0;
  double risk_mean = 0.0;  // E y^(-lambda)
  double risk_std_error = 0.0;
  std::vector<double> inv_moment;        // E[r_i / y]
  std::vector<double> risk_inv_moment;   // E[r_i / y^(lambda+1)]
  std::int64_t count = 0;
};
BetEvaluation evaluate_bet(const ReturnSampler& sampler,
                           std::span<const double> bet, double lambda,
                           std::uint64_t stream_base, std::int64_t count,
                           Exec exec);

// Wealth trajectories under multiplicative dynamics w_{t+1} = w_t * (r.b),
// w_1 = 1, run for `steps` multiplicative steps. Writes, per trajectory j
// (stream stream_offset + j), the minimum wealth over the whole path
// (including the start, so values are in [0, 1]) and the final log wealth.
// A ruin step sets minimum wealth to 0 and final log wealth to -infinity.
void simulate_paths(const ReturnSampler& sampler, std::span<const double> bet,
                    int steps, std::uint64_t stream_offset,
                    std::span<double> min_wealth_out,
                    std::span<double> final_log_wealth_out, Exec exec);

}  // namespace kernels
}  // namespace rck
