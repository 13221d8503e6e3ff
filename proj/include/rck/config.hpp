#pragma once

#include <cstdint>

namespace rck {

// Knobs shared by the projected-gradient solvers. Defaults are the sampled
// (stochastic) profile; finite_defaults() tightens tolerances and iteration
// budget for the deterministic full-expectation solvers.
struct SolverConfig {
  double eps = 1e-6;           // cash floor of the truncated simplex
  double dual_cap = 100.0;     // upper clamp M for the dual variable kappa
  double step_constant = 0.5;  // C in the schedule t_k = C / sqrt(k)
  std::int64_t max_iters = 10000;
  std::int64_t batch_size = 100;   // samples per stochastic gradient
  double kkt_tol = 1e-3;           // convergence threshold on the residual
  double support_tol = 1e-6;       // b_i > support_tol counts as "in support"
  double bisect_tol = 1e-13;       // projection root-finding tolerance
  std::int64_t check_interval = 200;      // iterations between residual checks
  std::int64_t eval_samples = 200000;     // held-out sample budget for reports
  bool auto_step_scale = false;    // divide C by an estimated curvature bound
  bool warm_start = true;          // sampled solvers start from the QP proxy

  static SolverConfig sampled_defaults() { return {}; }

  static SolverConfig finite_defaults() {
    SolverConfig c;
    c.step_constant = 1.0;
    c.auto_step_scale = true;
    c.max_iters = 400000;
    c.kkt_tol = 1e-6;
    c.check_interval = 100;
    return c;
  }
};

}  // namespace rck
