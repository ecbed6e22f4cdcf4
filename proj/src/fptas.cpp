#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>

#include "fairplan/errors.hpp"
#include "fairplan/knapsack.hpp"

namespace fairplan {

namespace {

// Capacity grid for the DP: eligibility (fits and has nonnegative utility)
// changes only at item weights and at utility sign roots.
std::vector<CapacityInterval> eligibility_intervals(const KnapsackView& view,
                                                    double r) {
  std::vector<double> roots;
  for (int i = 0; i < view.size(); ++i) {
    roots.push_back(view.weight[i]);
    if (view.ctilde[i] > 0.0) {
      const double w0 = r * view.weight[i] / view.ctilde[i] - 1.0;
      if (w0 > 0.0) roots.push_back(w0);
    }
  }
  std::sort(roots.begin(), roots.end());
  // The cap itself stays in: an item weighing the whole cap (a single live
  // item) fits only at that exact capacity, which becomes a degenerate
  // closed final interval.
  std::vector<double> bps;
  for (double w : roots) {
    if (!(w > 0.0) || !(w <= view.w_cap)) continue;
    if (!bps.empty() && w - bps.back() <= 1e-10) continue;
    bps.push_back(w);
  }
  std::vector<CapacityInterval> out;
  double lo = 0.0;
  for (double bp : bps) {
    out.push_back({lo, bp, false});
    lo = bp;
  }
  out.push_back({lo, view.w_cap, true});
  return out;
}

}  // namespace

OracleResult fptas(const Instance& inst, const ZMatrix& z, double epsilon,
                   const OracleOptions& opt) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw InputError("fptas accuracy parameter must lie in (0, 1)");
  if (!inst.visibility_fair() || !inst.uniform_revenue())
    throw InputError(
        "fptas needs a visibility-fair instance with uniform revenues");

  const PostFairness pf = post_fairness(inst, z);
  const KnapsackView view = make_knapsack_view(inst, pf);
  OracleResult res;
  const int n = view.size();
  if (n == 0) {
    if (opt.collect) res.collection.push_back({});
    return res;
  }
  const double r = view.rtilde[0];
  const int K = view.K;
  const std::int64_t chi_max =
      static_cast<std::int64_t>(std::ceil(double(K) * K / epsilon)) + K;

  std::vector<Assortment> candidates;
  candidates.push_back({});

  const auto intervals = eligibility_intervals(view, r);
  // DP tables indexed [item][utility total][cardinality]; the unreachable
  // state is an explicit marker, never a large weight.
  const std::int64_t cols = chi_max + 1;
  const std::int64_t cells = static_cast<std::int64_t>(n + 1) * cols * (K + 1);
  std::vector<double> min_wt(cells, 0.0);
  std::vector<std::uint8_t> reach(cells, 0);
  std::vector<std::uint8_t> take(cells, 0);
  auto idx = [&](int i, std::int64_t chi, int kappa) {
    return (static_cast<std::int64_t>(i) * cols + chi) * (K + 1) + kappa;
  };

  for (const auto& interval : intervals) {
    ++res.stats.intervals;
    const double w_min = interval.lo;
    const double mid = interval.mid();

    std::vector<int> elig;
    for (int i = 0; i < n; ++i)
      if (view.weight[i] <= mid && view.utility(i, mid) >= 0.0)
        elig.push_back(i);
    if (elig.empty()) continue;
    double cap_u = 0.0;
    for (int i : elig) cap_u = std::max(cap_u, view.utility(i, w_min));
    if (!(cap_u > 0.0)) continue;  // only zero-utility sets exist here

    std::vector<std::int64_t> scaled(n, 0);
    std::vector<bool> is_elig(n, false);
    for (int i : elig) {
      is_elig[i] = true;
      scaled[i] = static_cast<std::int64_t>(
          std::ceil(view.utility(i, w_min) * K / (cap_u * epsilon)));
    }

    std::fill(reach.begin(), reach.end(), 0);
    reach[idx(0, 0, 0)] = 1;
    min_wt[idx(0, 0, 0)] = 0.0;
    for (int i = 1; i <= n; ++i) {
      const int item = i - 1;
      for (std::int64_t chi = 0; chi <= chi_max; ++chi) {
        for (int kappa = 0; kappa <= K; ++kappa) {
          const auto cur = idx(i, chi, kappa);
          const auto skip = idx(i - 1, chi, kappa);
          std::optional<double> best;
          std::uint8_t took = 0;
          if (reach[skip]) best = min_wt[skip];
          if (is_elig[item] && kappa >= 1 && chi >= scaled[item]) {
            const auto prev = idx(i - 1, chi - scaled[item], kappa - 1);
            if (reach[prev]) {
              const double w = min_wt[prev] + view.weight[item];
              if (!best || w < *best) {
                best = w;
                took = 1;
              }
            }
          }
          if (best) {
            reach[cur] = 1;
            min_wt[cur] = *best;
            take[cur] = took;
          }
        }
      }
    }

    // Every minimum-weight representative that fits below the interval's top
    // capacity is a candidate.
    for (std::int64_t chi = 0; chi <= chi_max; ++chi) {
      for (int kappa = 0; kappa <= K; ++kappa) {
        const auto fin = idx(n, chi, kappa);
        if (!reach[fin] || min_wt[fin] > interval.hi) continue;
        Assortment live;
        std::int64_t c = chi;
        int k = kappa;
        for (int i = n; i >= 1; --i) {
          if (!take[idx(i, c, k)]) continue;
          live.push_back(i - 1);
          c -= scaled[i - 1];
          --k;
        }
        std::sort(live.begin(), live.end());
        Assortment orig;
        orig.reserve(live.size());
        for (int i : live) orig.push_back(view.orig[i]);
        candidates.push_back(std::move(orig));
      }
    }
  }

  res.set = {};
  res.value = 0.0;
  std::set<Assortment> seen;
  for (auto& cand : candidates) {
    const double v = rev_cost(inst, cand, pf);
    if (v > res.value || (v == res.value && cand < res.set)) {
      res.set = cand;
      res.value = v;
    }
    if (opt.collect) seen.insert(std::move(cand));
  }
  if (opt.collect) res.collection.assign(seen.begin(), seen.end());
  res.value = rev_cost(inst, res.set, pf);
  return res;
}

}  // namespace fairplan
