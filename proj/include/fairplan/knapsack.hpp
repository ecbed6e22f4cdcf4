#ifndef FAIRPLAN_KNAPSACK_HPP
#define FAIRPLAN_KNAPSACK_HPP

#include <array>
#include <vector>

#include "fairplan/instance.hpp"

namespace fairplan {

// Item-level data for the capacity-parameterized knapsack reading of the
// separation subproblem. Only "live" items are kept: an item with adjusted
// revenue <= 0 and fixed cost >= 0 can never help and is removed up front;
// `orig` maps live positions back to instance indices.
struct KnapsackView {
  std::vector<int> orig;
  std::vector<double> rtilde;      // adjusted revenue r~_i
  std::vector<double> rw;          // r~_i * w_i
  std::vector<double> ctilde;      // fixed cost c~_i
  std::vector<double> weight;
  int K = 0;          // effective cardinality bound, min(K, live count)
  double w_cap = 0.0;  // total live weight; capacities beyond it are moot

  int size() const { return static_cast<int>(orig.size()); }
  // Utility of live item at capacity W: r~_i w_i / (1 + W) - c~_i.
  double utility(int i, double W) const { return rw[i] / (1.0 + W) - ctilde[i]; }
  // Utility-to-weight ratio: r~_i / (1 + W) - c~_i / w_i.
  double ratio(int i, double W) const {
    return rtilde[i] / (1.0 + W) - ctilde[i] / weight[i];
  }
};

KnapsackView make_knapsack_view(const Instance& inst, const PostFairness& pf);

// A half-open capacity range [lo, hi); the final range of a partition is
// closed at the total-weight cap.
struct CapacityInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_hi = false;
  double mid() const { return lo + 0.5 * (hi - lo); }
};

// Capacity values at which one of the four ordering conditions (utility
// signs, utility order, ratio order, pairwise swap slopes) can change.
// All four are linear in s = 1/(1+W).
struct ConditionRoots {
  std::vector<double> sign;
  std::vector<double> utility_order;
  std::vector<double> ratio_order;
  std::vector<double> slope_order;
};

ConditionRoots condition_roots(const KnapsackView& view);

// Partition of [0, w_cap] into intervals on which all four orderings are
// constant. Roots outside (0, w_cap) are discarded; duplicates merge at
// 1e-10 absolute.
struct OrderStablePartition {
  std::vector<double> breakpoints;
  std::vector<CapacityInterval> intervals;
};

OrderStablePartition order_stable_partition(const KnapsackView& view);

// Basic-solution structure of the two-constraint relaxation: items fully in
// the knapsack, up to two fractional items (-1 when absent, lighter first),
// and items excluded.
struct Profile {
  std::vector<int> full;
  std::array<int, 2> fractional{-1, -1};
  std::vector<int> excluded;
};

// Counters reported by the interval-scanning oracles; the swap loop in any
// single interval is bounded by n*K swaps (hard cap 4nK, then an error).
struct OracleStats {
  int intervals = 0;
  long long total_swaps = 0;
  int max_swaps_per_interval = 0;
  long long lp_calls = 0;
};

// An oracle's answer: an assortment (original indices), its cost-adjusted
// revenue recomputed from scratch, and optionally every candidate examined.
struct OracleResult {
  Assortment set;
  double value = 0.0;
  std::vector<Assortment> collection;
  OracleStats stats;
};

struct OracleOptions {
  bool collect = false;  // keep the full candidate collection
};

// Exhaustive maximizer of rev_cost over assortments of size <= K. Ties break
// toward the lexicographically smallest sequence. Guarded by `cap` on the
// number of assortments.
OracleResult brute_force_subdual(const Instance& inst, const ZMatrix& z,
                                 std::int64_t cap = 1000000);

// Exact maximizer for revenue/marketshare-fair instances (b == 0), via the
// root of g(lambda) = max_{|S|<=K} sum_i w_i (r~_i - lambda) - lambda.
OracleResult exact_oracle(const Instance& inst, const ZMatrix& z);

// Core of the exact path: maximize sum_{i in S} rev_i w_i / (1 + w(S)) over
// |S| <= K, where revenues may be negative. Returns the set and its value
// (empty set, 0 when nothing positive exists).
std::pair<Assortment, double> capacitated_mnl_optimum(
    const std::vector<double>& revenues, const std::vector<double>& weights,
    int K);

// 1/2-approximation for general instances: order-stable partition plus the
// per-interval prefix/swap scan.
OracleResult half_approx(const Instance& inst, const ZMatrix& z,
                         const OracleOptions& opt = {});

// Specialized 1/2-approximation for visibility-fair instances with uniform
// revenues; runs on [0, inf) with no pre-partition.
OracleResult uniform_half_approx(const Instance& inst, const ZMatrix& z,
                                 const OracleOptions& opt = {});

// (1-eps)-approximation for general instances; enumerates small seed sets
// and completes each with the modified 1/2-approximation.
OracleResult ptas(const Instance& inst, const ZMatrix& z, double epsilon,
                  const OracleOptions& opt = {});

// (1-eps)-approximation for visibility-fair uniform-revenue instances via
// utility-scaled dynamic programming per eligible-set interval.
OracleResult fptas(const Instance& inst, const ZMatrix& z, double epsilon,
                   const OracleOptions& opt = {});

// Candidate completions for the seeded subproblem: knapsack restricted to
// `small_items` (live indices), capacity W - w(seed), cardinality K - |seed|.
// Returns sets of live-item original indices, not including the seed.
std::vector<Assortment> modified_half_collection(
    const KnapsackView& view, const std::vector<int>& seed_live,
    const std::vector<int>& small_live, const CapacityInterval& interval,
    OracleStats* stats);

enum class OracleMethod { Auto, Exact, Half, UniformHalf, Ptas, Fptas, Brute };

struct OracleSpec {
  OracleMethod method = OracleMethod::Auto;
  double epsilon = 0.25;       // ptas accuracy
  double fptas_epsilon = 0.2;  // fptas accuracy
  std::int64_t brute_cap = 1000000;
};

// Routes to the matching oracle; Auto picks exact when b == 0, fptas for
// visibility-fair uniform-revenue instances, and half otherwise.
OracleResult oracle_dispatch(const Instance& inst, const ZMatrix& z,
                             const OracleSpec& spec,
                             const OracleOptions& opt = {});

}  // namespace fairplan

#endif  // FAIRPLAN_KNAPSACK_HPP
