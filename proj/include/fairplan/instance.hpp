#ifndef FAIRPLAN_INSTANCE_HPP
#define FAIRPLAN_INSTANCE_HPP

#include <cstdint>
#include <map>
#include <vector>

namespace fairplan {

// A set of offered items, kept as a strictly increasing sequence of
// 0-based item indices. The empty assortment is valid (value 0 everywhere).
using Assortment = std::vector<int>;

// Problem data: n items under the MNL choice model, a cardinality cap K and
// a fairness level delta. Per item: outcome parameters (a, b) so that the
// outcome of item i shown in S is a_i * w_i / (1 + w(S)) + b_i, revenue r,
// popularity weight w and quality score q.
struct Instance {
  int n = 0;
  int K = 1;
  double delta = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> q;
  // External item ids, used only by file I/O; defaults to 1..n.
  std::vector<std::int64_t> ids;

  // Throws InputError when any invariant is violated (vector lengths,
  // positivity of w/r/q, nonnegativity of a/b, K range, delta >= 0).
  void validate() const;

  // Instance classes. Revenue/marketshare-fair means b == 0 everywhere,
  // visibility-fair means a == 0 everywhere.
  bool revenue_marketshare_fair() const;
  bool visibility_fair() const;
  bool uniform_revenue() const;

  double total_weight() const;
  double max_revenue() const;
};

// A randomized solution: probability p(S) > 0 per supported assortment,
// with sum(p) <= 1, plus its expected revenue.
struct DistributionSolution {
  std::map<Assortment, double> support;
  double objective = 0.0;
};

// Dense n-by-n nonnegative matrix of pairwise fairness costs, zero diagonal.
struct ZMatrix {
  int n = 0;
  std::vector<double> data;  // row-major, n*n

  ZMatrix() = default;
  explicit ZMatrix(int n_) : n(n_), data(static_cast<size_t>(n_) * n_, 0.0) {}
  static ZMatrix zero(int n_) { return ZMatrix(n_); }

  double operator()(int i, int j) const {
    return data[static_cast<size_t>(i) * n + j];
  }
  double& operator()(int i, int j) {
    return data[static_cast<size_t>(i) * n + j];
  }
};

// Dual iterate fed to the separation oracles: fairness costs z and the
// scalar rho dual to the sum-to-one row.
struct DualPoint {
  ZMatrix z;
  double rho = 0.0;
};

// Item-level reductions of a dual point: cost c_i, adjusted revenue
// r_i - a_i c_i and fixed cost b_i c_i.
struct PostFairness {
  std::vector<double> cost;        // c_i(z)
  std::vector<double> revenue;    // r~_i = r_i - a_i c_i(z)
  std::vector<double> fixed_cost;  // c~_i = b_i c_i(z)
};

// Expected revenue of one assortment: sum_{i in S} r_i w_i / (1 + w(S)).
double rev(const Instance& inst, const Assortment& s);

// Outcome of item i when assortment s is shown; i must belong to s.
double outcome(const Instance& inst, int i, const Assortment& s);

// Expected outcome per item under a randomized solution.
std::vector<double> expected_outcomes(const Instance& inst,
                                      const DistributionSolution& p);

// Result of a pairwise fairness audit. On failure (i, j) is the worst
// ordered pair and `slack` its excess over delta.
struct FairnessVerdict {
  bool pass = true;
  int i = -1;
  int j = -1;
  double slack = 0.0;  // max over pairs of O_i/q_i - O_j/q_j - delta
};

FairnessVerdict fairness_check(const Instance& inst,
                               const DistributionSolution& p, double tol);

// Item-level cost algebra for a dual matrix z.
PostFairness post_fairness(const Instance& inst, const ZMatrix& z);

// Cost-adjusted revenue of an assortment:
//   sum_{i in S} r~_i w_i / (1 + w(S)) - sum_{i in S} c~_i.
// Equals rev(s) when z == 0.
double rev_cost(const Instance& inst, const Assortment& s, const ZMatrix& z);
double rev_cost(const Instance& inst, const Assortment& s,
                const PostFairness& pf);

// Number of assortments of size <= K among n items, saturating at `cap`+1.
std::int64_t count_assortments(int n, int K, std::int64_t cap);

// Visits every assortment of size <= K in lexicographic sequence order,
// starting with the empty set. Throws CapacityError when the count exceeds
// `cap`. The callback receives a sorted index vector.
template <typename Fn>
void for_each_assortment(int n, int K, Fn&& fn) {
  Assortment cur;
  fn(static_cast<const Assortment&>(cur));
  // Depth-first extension keeps lexicographic order: {0}, {0,1}, {0,1,2}, ...
  auto rec = [&](auto&& self, int start) -> void {
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      fn(static_cast<const Assortment&>(cur));
      if (static_cast<int>(cur.size()) < K) self(self, i + 1);
      cur.pop_back();
    }
  };
  if (K >= 1) rec(rec, 0);
}

}  // namespace fairplan

#endif  // FAIRPLAN_INSTANCE_HPP
