#ifndef FAIRPLAN_SOLVER_HPP
#define FAIRPLAN_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "fairplan/instance.hpp"
#include "fairplan/knapsack.hpp"

namespace fairplan {

enum class SolveMethod { ColumnGeneration, Ellipsoid };

// Per-iteration diagnostics, filled only when requested (log-determinant
// evaluation is cubic in the dimension).
struct EllipsoidTrace {
  std::vector<double> log_det;        // of the shape matrix, per iteration
  std::vector<double> incumbent_obj;  // best feasible dual objective so far
};

struct EllipsoidConfig {
  int t_max = 10000;
  double initial_radius = 0.0;  // <= 0: n * max(rbar, delta * max_i q_i^2, 1)
  // Reported only: enters the theoretical iteration-bound printout, never a
  // stopping rule.
  std::int64_t q_max = 0;
  EllipsoidTrace* trace = nullptr;
};

struct SolverConfig {
  SolveMethod method = SolveMethod::ColumnGeneration;
  OracleSpec oracle;
  double feas_tol = 1e-6;
  double red_cost_tol = 1e-7;
  int colgen_iter_cap = 0;  // <= 0: 10 * n^2
  double stall_tol = 1e-9;  // master-objective improvement floor
  int stall_window = 50;
  EllipsoidConfig ellipsoid;
  // When > 0 and the instance has at most this many assortments, solve()
  // cross-checks the result against full enumeration (beta contract).
  std::int64_t self_check_enum_cap = 0;
};

struct SolveReport {
  DistributionSolution solution;
  DualPoint dual;
  double objective = 0.0;
  int iterations = 0;
  std::vector<Assortment> generated_columns;  // sets that cut the dual
  std::int64_t oracle_calls = 0;
  double wall_time_sec = 0.0;
};

// Solves the fairness-constrained problem restricted to the given columns:
// the LP over p(S) for S in `columns` with all n(n-1) pairwise rows plus the
// sum-to-one row. Returns the primal distribution and the dual point
// (z from the pairwise rows, rho from the sum row).
struct MasterResult {
  DistributionSolution primal;
  DualPoint dual;
};
MasterResult restricted_master(const Instance& inst,
                               const std::vector<Assortment>& columns);

// Full-enumeration baseline: builds the LP over every assortment of size
// <= K (guarded by `cap`) and solves it exactly.
DistributionSolution brute_force_fair(const Instance& inst,
                                      std::int64_t cap = 1000000);

SolveReport column_generation(const Instance& inst, const SolverConfig& cfg);
SolveReport ellipsoid_solve(const Instance& inst, const SolverConfig& cfg);

// Dispatches on cfg.method, then audits the result: the returned solution
// must pass fairness_check at feas_tol, and optionally the approximation
// contract against enumeration (see self_check_enum_cap).
SolveReport solve(const Instance& inst, const SolverConfig& cfg);

// Optimal expected revenue with the fairness constraints dropped: the best
// single assortment of size <= K, found by the exact capacitated-MNL path.
double unconstrained_optimum(const Instance& inst, Assortment* argmax = nullptr);

// Support size after dropping probabilities <= threshold (reporting only;
// solutions themselves are never pruned).
int pruned_support_size(const DistributionSolution& sol,
                        double threshold = 1e-3);

}  // namespace fairplan

#endif  // FAIRPLAN_SOLVER_HPP
