#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <string>

#include "fairplan/errors.hpp"
#include "fairplan/knapsack.hpp"
#include "fairplan/lp.hpp"

namespace fairplan {

namespace {

using LiveSet = std::vector<int>;  // sorted live indices

double weight_of(const KnapsackView& view, const LiveSet& s) {
  double total = 0.0;
  for (int i : s) total += view.weight[i];
  return total;
}

LiveSet sorted_insert(LiveSet s, int item) {
  s.insert(std::upper_bound(s.begin(), s.end(), item), item);
  return s;
}

// Items ranked by utility-to-weight ratio at the given capacity, best first,
// index ascending on ties.
std::vector<int> rank_by_ratio(const KnapsackView& view,
                               const std::vector<int>& items, double at_w) {
  std::vector<int> order = items;
  std::vector<double> ratio(view.size(), 0.0);
  for (int i : items) ratio[i] = view.ratio(i, at_w);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (ratio[i] != ratio[j]) return ratio[i] > ratio[j];
    return i < j;
  });
  return order;
}

struct ProfileInit {
  LiveSet p1;
  double w_next = 0.0;
  std::vector<LiveSet> extra_candidates;
};

// Profile of an optimal basic solution to the two-constraint relaxation over
// `items` with capacity `cap` and cardinality `budget`, read at W = at_w.
ProfileInit profile_from_relaxation(const KnapsackView& view,
                                    const std::vector<int>& items, double cap,
                                    int budget, double at_w, double w_offset,
                                    OracleStats* stats) {
  std::vector<double> u(items.size()), wt(items.size());
  for (size_t k = 0; k < items.size(); ++k) {
    u[k] = view.utility(items[k], at_w);
    wt[k] = view.weight[items[k]];
  }
  LpSolution sol = kp_relax_solve(u, wt, cap, budget);
  if (stats) ++stats->lp_calls;

  LiveSet full;
  std::vector<int> frac;
  for (size_t k = 0; k < items.size(); ++k) {
    if (sol.x[k] >= 1.0 - 1e-7)
      full.push_back(items[k]);
    else if (sol.x[k] > 1e-7)
      frac.push_back(items[k]);
  }
  assert(frac.size() <= 2);
  std::sort(frac.begin(), frac.end(), [&](int i, int j) {
    if (view.weight[i] != view.weight[j])
      return view.weight[i] < view.weight[j];
    return i < j;
  });

  ProfileInit init;
  if (frac.empty()) {
    init.extra_candidates.push_back(full);
    init.p1 = full;
  } else if (frac.size() == 1) {
    init.extra_candidates.push_back(sorted_insert(full, frac[0]));
    init.extra_candidates.push_back(full);
    init.p1 = full;
  } else {
    init.extra_candidates.push_back(sorted_insert(full, frac[0]));
    init.extra_candidates.push_back(sorted_insert(full, frac[1]));
    init.p1 = sorted_insert(full, frac[1]);  // the heavier fractional item
  }
  init.w_next = weight_of(view, init.p1) + w_offset;
  return init;
}

// Interval scan shared by the general and the seeded oracles. Produces the
// candidate collection for one order-stable interval: singletons and the
// empty set, ratio-ranked prefixes for capacities below the prefix weight
// threshold, then the adaptive swap walk above it. `w_offset` shifts every
// capacity by the weight of an already-committed seed set.
std::vector<LiveSet> scan_interval(const KnapsackView& view,
                                   const std::vector<int>& items,
                                   double w_offset, int budget,
                                   const CapacityInterval& interval,
                                   bool direct_init_at_equal,
                                   OracleStats* stats) {
  std::vector<LiveSet> cands;
  cands.push_back({});
  if (budget <= 0 || items.empty()) return cands;
  for (int i : items) cands.push_back({i});
  if (stats) ++stats->intervals;

  const std::vector<int> order = rank_by_ratio(view, items, interval.mid());
  const int d = std::min<int>(budget, static_cast<int>(items.size()));
  LiveSet prefix;
  double prefix_weight = w_offset;
  std::vector<LiveSet> prefixes;
  for (int k = 0; k < d; ++k) {
    prefix = sorted_insert(prefix, order[k]);
    prefix_weight += view.weight[order[k]];
    prefixes.push_back(prefix);
  }
  const double w_th = prefix_weight;

  const bool low_nonempty = interval.lo < w_th;
  if (low_nonempty) {
    for (const auto& h : prefixes) cands.push_back(h);
    // Below the threshold the cardinality bound cannot bind. If even the
    // d-th ranked item has negative utility there, capacity has stopped
    // binding and larger capacities cannot help.
    if (d < budget || view.utility(order[d - 1], w_th) < 0.0) return cands;
  }
  const bool high_nonempty =
      interval.closed_hi ? interval.hi >= w_th : interval.hi > w_th;
  if (!high_nonempty) return cands;

  LiveSet p1;
  double w_next = 0.0;
  const bool direct_init =
      direct_init_at_equal ? interval.lo <= w_th : interval.lo < w_th;
  if (direct_init) {
    p1 = prefixes.empty() ? LiveSet{} : prefixes.back();
    std::sort(p1.begin(), p1.end());
    w_next = w_th;
  } else {
    ProfileInit init = profile_from_relaxation(
        view, items, interval.lo - w_offset, budget, interval.lo, w_offset,
        stats);
    for (auto& c : init.extra_candidates) cands.push_back(std::move(c));
    p1 = std::move(init.p1);
    w_next = init.w_next;
  }
  LiveSet p0;
  for (int i : items)
    if (!std::binary_search(p1.begin(), p1.end(), i)) p0.push_back(i);

  const long long swap_cap =
      4LL * static_cast<long long>(view.size()) * std::max(view.K, 1);
  int swaps = 0;
  while (true) {
    // Best swap: i in the knapsack, j outside, strictly heavier, with the
    // largest marginal utility gain per unit of added weight.
    int bi = -1, bj = -1;
    double best_slope = 0.0;
    for (int i : p1) {
      const double ui = view.utility(i, w_next);
      for (int j : p0) {
        if (view.weight[i] >= view.weight[j]) continue;
        const double slope = (view.utility(j, w_next) - ui) /
                             (view.weight[j] - view.weight[i]);
        if (bi < 0 || slope > best_slope) {
          best_slope = slope;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;  // no admissible pair left
    const bool past_end =
        interval.closed_hi ? w_next > interval.hi : w_next >= interval.hi;
    if (past_end) break;
    if (view.utility(bi, w_next) > view.utility(bj, w_next)) break;

    if (++swaps > swap_cap)
      throw NumericalError("swap walk exceeded 4nK iterations (" +
                           std::to_string(swap_cap) + ")");
    p1.erase(std::find(p1.begin(), p1.end(), bi));
    p1 = sorted_insert(std::move(p1), bj);
    p0.erase(std::find(p0.begin(), p0.end(), bj));
    p0 = sorted_insert(std::move(p0), bi);
    assert(view.weight[bj] > view.weight[bi]);  // change points move right
    assert(p1.size() + p0.size() == items.size());
    w_next += view.weight[bj] - view.weight[bi];
    cands.push_back(p1);
  }
  if (stats) {
    stats->total_swaps += swaps;
    stats->max_swaps_per_interval =
        std::max(stats->max_swaps_per_interval, swaps);
  }
  return cands;
}

Assortment to_original(const KnapsackView& view, const LiveSet& live) {
  Assortment out;
  out.reserve(live.size());
  for (int i : live) out.push_back(view.orig[i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Shared final step: score candidates (original indices) against the empty
// set, tie-breaking toward the lexicographically smallest sequence.
void finish(const Instance& inst, const PostFairness& pf,
            std::vector<Assortment> candidates, const OracleOptions& opt,
            OracleResult* res) {
  res->set = {};
  res->value = 0.0;
  std::set<Assortment> seen;
  for (auto& cand : candidates) {
    assert(static_cast<int>(cand.size()) <= inst.K);
    const double v = rev_cost(inst, cand, pf);
    if (v > res->value ||
        (v == res->value && !res->set.empty() && cand < res->set)) {
      res->set = cand;
      res->value = v;
    }
    if (opt.collect) seen.insert(std::move(cand));
  }
  if (opt.collect) {
    seen.insert(Assortment{});
    res->collection.assign(seen.begin(), seen.end());
  }
  res->value = rev_cost(inst, res->set, pf);
}

}  // namespace

OracleResult half_approx(const Instance& inst, const ZMatrix& z,
                         const OracleOptions& opt) {
  const PostFairness pf = post_fairness(inst, z);
  const KnapsackView view = make_knapsack_view(inst, pf);
  OracleResult res;
  if (view.size() == 0) {
    if (opt.collect) res.collection.push_back({});
    return res;
  }
  std::vector<int> all_items(view.size());
  for (int i = 0; i < view.size(); ++i) all_items[i] = i;

  const OrderStablePartition part = order_stable_partition(view);
  std::vector<Assortment> candidates;
  for (const auto& interval : part.intervals) {
    auto live_sets = scan_interval(view, all_items, 0.0, view.K, interval,
                                   /*direct_init_at_equal=*/false, &res.stats);
    for (auto& s : live_sets) candidates.push_back(to_original(view, s));
  }
  finish(inst, pf, std::move(candidates), opt, &res);
  return res;
}

OracleResult uniform_half_approx(const Instance& inst, const ZMatrix& z,
                                 const OracleOptions& opt) {
  if (!inst.visibility_fair() || !inst.uniform_revenue())
    throw InputError(
        "uniform_half_approx needs a visibility-fair instance with uniform "
        "revenues");
  const PostFairness pf = post_fairness(inst, z);
  const KnapsackView view = make_knapsack_view(inst, pf);
  OracleResult res;
  res.stats.intervals = 1;
  const int n = view.size();
  const double r = view.rtilde.empty() ? 0.0 : view.rtilde[0];

  std::vector<int> all_items(n);
  for (int i = 0; i < n; ++i) all_items[i] = i;
  std::vector<Assortment> candidates;
  candidates.push_back({});
  for (int i = 0; i < n; ++i) candidates.push_back({view.orig[i]});

  // With uniform adjusted revenues every ordering is capacity-free; the scan
  // runs once over [0, inf).
  const std::vector<int> order = rank_by_ratio(view, all_items, 0.0);
  const int d = std::min(view.K, n);
  LiveSet p1;
  double w_th = 0.0;
  for (int k = 0; k < d; ++k) {
    p1 = sorted_insert(std::move(p1), order[k]);
    w_th += view.weight[order[k]];
    candidates.push_back(to_original(view, p1));
  }

  if (d == view.K && d > 0 && view.utility(order[d - 1], w_th) >= 0.0) {
    LiveSet p0;
    for (int i : all_items)
      if (!std::binary_search(p1.begin(), p1.end(), i)) p0.push_back(i);
    double w_next = w_th;
    const long long swap_cap = 4LL * n * std::max(view.K, 1);
    int swaps = 0;
    while (true) {
      // Cheapest marginal cost per unit of added weight.
      int bi = -1, bj = -1;
      double best_slope = 0.0;
      for (int i : p1) {
        for (int j : p0) {
          if (view.weight[i] >= view.weight[j]) continue;
          const double slope = (view.ctilde[j] - view.ctilde[i]) /
                               (view.weight[j] - view.weight[i]);
          if (bi < 0 || slope < best_slope) {
            best_slope = slope;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi < 0) break;
      if (++swaps > swap_cap)
        throw NumericalError("swap walk exceeded 4nK iterations");
      w_next += view.weight[bj] - view.weight[bi];
      p1.erase(std::find(p1.begin(), p1.end(), bi));
      p1 = sorted_insert(std::move(p1), bj);
      p0.erase(std::find(p0.begin(), p0.end(), bj));
      p0 = sorted_insert(std::move(p0), bi);
      if (best_slope <= r / (1.0 + w_next)) {
        candidates.push_back(to_original(view, p1));
      } else {
        break;  // the swap no longer pays for its weight
      }
    }
    res.stats.total_swaps = swaps;
    res.stats.max_swaps_per_interval = swaps;
  }
  finish(inst, pf, std::move(candidates), opt, &res);
  return res;
}

std::vector<Assortment> modified_half_collection(
    const KnapsackView& view, const std::vector<int>& seed_live,
    const std::vector<int>& small_live, const CapacityInterval& interval,
    OracleStats* stats) {
  double seed_weight = 0.0;
  for (int i : seed_live) seed_weight += view.weight[i];
  const int budget = view.K - static_cast<int>(seed_live.size());
  std::vector<LiveSet> live_sets;
  if (budget <= 0 || small_live.empty()) {
    live_sets.push_back({});
  } else {
    live_sets = scan_interval(view, small_live, seed_weight, budget, interval,
                              /*direct_init_at_equal=*/true, stats);
  }
  std::vector<Assortment> out;
  out.reserve(live_sets.size());
  for (const auto& s : live_sets) out.push_back(to_original(view, s));
  return out;
}

OracleResult ptas(const Instance& inst, const ZMatrix& z, double epsilon,
                  const OracleOptions& opt) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw InputError("ptas accuracy parameter must lie in (0, 1)");
  const PostFairness pf = post_fairness(inst, z);
  const KnapsackView view = make_knapsack_view(inst, pf);
  OracleResult res;
  if (view.size() == 0) {
    if (opt.collect) res.collection.push_back({});
    return res;
  }
  const int n = view.size();
  const int seed_raw = static_cast<int>(std::ceil(1.0 / epsilon - 2.0));
  const int seed_size = std::min(std::max(seed_raw, 1), view.K);

  const OrderStablePartition part = order_stable_partition(view);
  std::vector<Assortment> candidates;
  std::vector<double> util_mid(n);

  for (const auto& interval : part.intervals) {
    ++res.stats.intervals;
    const double w_max = interval.hi;
    const double mid = interval.mid();
    for (int i = 0; i < n; ++i) util_mid[i] = view.utility(i, mid);

    // All seeds up to size seed_size that fit below the interval's top
    // capacity; seeds short of seed_size are candidates themselves, seeds of
    // exactly seed_size get completed from their low-utility complement.
    std::vector<int> seed;
    double seed_weight = 0.0;
    auto enumerate = [&](auto&& self, int start) -> void {
      if (static_cast<int>(seed.size()) == seed_size) {
        double min_util = util_mid[seed[0]];
        for (int i : seed) min_util = std::min(min_util, util_mid[i]);
        std::vector<int> small;
        for (int i = 0; i < n; ++i) {
          if (std::binary_search(seed.begin(), seed.end(), i)) continue;
          if (util_mid[i] <= min_util) small.push_back(i);
        }
        Assortment seed_orig = to_original(view, seed);
        for (auto& tail : modified_half_collection(view, seed, small, interval,
                                                   &res.stats)) {
          Assortment merged = seed_orig;
          merged.insert(merged.end(), tail.begin(), tail.end());
          std::sort(merged.begin(), merged.end());
          candidates.push_back(std::move(merged));
        }
        return;
      }
      candidates.push_back(to_original(view, seed));
      for (int i = start; i < n; ++i) {
        if (seed_weight + view.weight[i] > w_max) continue;
        seed.push_back(i);
        seed_weight += view.weight[i];
        self(self, i + 1);
        seed_weight -= view.weight[i];
        seed.pop_back();
      }
    };
    enumerate(enumerate, 0);
  }
  finish(inst, pf, std::move(candidates), opt, &res);
  return res;
}

}  // namespace fairplan
