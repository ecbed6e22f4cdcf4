#ifndef FAIRPLAN_LP_HPP
#define FAIRPLAN_LP_HPP

#include <vector>

namespace fairplan {

// A dense maximization LP with bounded variables:
//   max c'x  s.t.  A x {<=,=,>=} b,  lower <= x <= upper.
// Bounds may be +/-infinity.
struct LpProblem {
  enum class Sense { LE, EQ, GE };

  int num_vars = 0;
  int num_rows = 0;
  std::vector<double> c;       // objective, size num_vars
  std::vector<double> a;       // row-major constraint matrix, num_rows*num_vars
  std::vector<Sense> sense;    // per row
  std::vector<double> b;       // right-hand sides
  std::vector<double> lower;   // per variable
  std::vector<double> upper;   // per variable

  double& at(int row, int col) {
    return a[static_cast<size_t>(row) * num_vars + col];
  }
  double at(int row, int col) const {
    return a[static_cast<size_t>(row) * num_vars + col];
  }
  void validate() const;  // throws InputError on malformed input
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;              // primal values, size num_vars
  std::vector<double> duals;          // one per row, sign-consistent with sense
  std::vector<double> reduced_costs;  // one per structural variable
  std::vector<int> basis;  // basic column per row; >= num_vars means slack
  int iterations = 0;
};

// Solves the LP with a bounded-variable two-phase simplex. Basic optimal
// solutions are returned (at most num_rows variables strictly between their
// bounds); pivoting is deterministic, with Bland's rule as the anti-cycling
// fallback. Throws NumericalError if the pivot cap is exhausted.
LpSolution lp_solve(const LpProblem& problem, double tol = 1e-9);

// Maximum dual-feasibility / complementary-slackness / strong-duality
// violation of an optimal solution; used by tests and debug checks.
double lp_optimality_gap(const LpProblem& problem, const LpSolution& sol);

// The two-constraint knapsack relaxation: max u'x over x in [0,1]^n subject
// to w'x <= W and sum(x) <= K. Always feasible (x = 0). The returned basic
// optimum has at most two fractional components.
LpSolution kp_relax_solve(const std::vector<double>& utilities,
                          const std::vector<double>& weights, double W, int K);

}  // namespace fairplan

#endif  // FAIRPLAN_LP_HPP
