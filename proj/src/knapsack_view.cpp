#include <algorithm>
#include <cmath>

#include "fairplan/knapsack.hpp"

namespace fairplan {

namespace {

// Maps a root of a condition that is linear in s = 1/(1+W) back to W.
// Valid solutions have s in (0, 1]; s = 1 is W = 0, the partition's left
// edge, so only s in (0, 1) yields an interior breakpoint.
void push_root_s(double num, double den, std::vector<double>* out) {
  if (den == 0.0) return;  // condition holds identically or never
  const double s = num / den;
  if (!(s > 0.0) || !(s < 1.0)) return;
  out->push_back(1.0 / s - 1.0);
}

}  // namespace

KnapsackView make_knapsack_view(const Instance& inst, const PostFairness& pf) {
  KnapsackView v;
  for (int i = 0; i < inst.n; ++i) {
    // An item with nonpositive adjusted revenue and nonnegative fixed cost
    // can only lower the objective of any set containing it.
    if (pf.revenue[i] <= 0.0 && pf.fixed_cost[i] >= 0.0) continue;
    v.orig.push_back(i);
    v.rtilde.push_back(pf.revenue[i]);
    v.rw.push_back(pf.revenue[i] * inst.w[i]);
    v.ctilde.push_back(pf.fixed_cost[i]);
    v.weight.push_back(inst.w[i]);
    v.w_cap += inst.w[i];
  }
  v.K = std::min(inst.K, v.size());
  return v;
}

ConditionRoots condition_roots(const KnapsackView& view) {
  ConditionRoots roots;
  const int n = view.size();
  // Sign changes: r~_i w_i s = c~_i.
  for (int i = 0; i < n; ++i)
    push_root_s(view.ctilde[i], view.rw[i], &roots.sign);
  // Utility order: (r~_i w_i - r~_j w_j) s = c~_i - c~_j.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      push_root_s(view.ctilde[i] - view.ctilde[j], view.rw[i] - view.rw[j],
                  &roots.utility_order);
  // Ratio order: (r~_i - r~_j) s = c~_i/w_i - c~_j/w_j.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      push_root_s(view.ctilde[i] / view.weight[i] -
                      view.ctilde[j] / view.weight[j],
                  view.rtilde[i] - view.rtilde[j], &roots.ratio_order);
  // Swap-slope order for (i; j, k): slopes (u_j - u_i)/(w_j - w_i) compared
  // across j, k. Equal-weight pairs have no slope and are skipped.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || view.weight[j] == view.weight[i]) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == i || view.weight[k] == view.weight[i]) continue;
        const double dwj = view.weight[j] - view.weight[i];
        const double dwk = view.weight[k] - view.weight[i];
        const double num = (view.ctilde[j] - view.ctilde[i]) * dwk -
                           (view.ctilde[k] - view.ctilde[i]) * dwj;
        const double den =
            (view.rw[j] - view.rw[i]) * dwk - (view.rw[k] - view.rw[i]) * dwj;
        push_root_s(num, den, &roots.slope_order);
      }
    }
  }
  return roots;
}

OrderStablePartition order_stable_partition(const KnapsackView& view) {
  OrderStablePartition part;
  if (view.size() == 0 || view.w_cap <= 0.0) return part;

  ConditionRoots roots = condition_roots(view);
  std::vector<double> all;
  for (auto* src : {&roots.sign, &roots.utility_order, &roots.ratio_order,
                    &roots.slope_order})
    all.insert(all.end(), src->begin(), src->end());
  std::sort(all.begin(), all.end());

  constexpr double kDedupTol = 1e-10;
  for (double w : all) {
    if (!(w > 0.0) || !(w < view.w_cap)) continue;
    if (!part.breakpoints.empty() && w - part.breakpoints.back() <= kDedupTol)
      continue;
    part.breakpoints.push_back(w);
  }

  double lo = 0.0;
  for (double bp : part.breakpoints) {
    part.intervals.push_back({lo, bp, false});
    lo = bp;
  }
  part.intervals.push_back({lo, view.w_cap, true});
  return part;
}

}  // namespace fairplan
