#include <algorithm>
#include <cmath>
#include <string>

#include "fairplan/errors.hpp"
#include "fairplan/knapsack.hpp"

namespace fairplan {

namespace {

// g(lambda) = max_{|S|<=K} sum_{i in S} w_i (rt_i - lambda) - lambda, the
// margin by which some assortment beats value lambda. Strictly decreasing
// and piecewise linear; its root is the optimal capacitated MNL value.
double margin(const std::vector<double>& rt, const std::vector<double>& w,
              int K, double lambda, std::vector<double>* scratch) {
  scratch->clear();
  for (size_t i = 0; i < rt.size(); ++i) {
    const double v = w[i] * (rt[i] - lambda);
    if (v > 0.0) scratch->push_back(v);
  }
  const int take = std::min<int>(K, static_cast<int>(scratch->size()));
  std::partial_sort(scratch->begin(), scratch->begin() + take, scratch->end(),
                    std::greater<double>());
  double total = -lambda;
  for (int k = 0; k < take; ++k) total += (*scratch)[k];
  return total;
}

// Top-ranked positive items at a given lambda; the optimum is one of the
// prefixes of this ranking.
std::vector<int> ranking(const std::vector<double>& rt,
                         const std::vector<double>& w, double lambda) {
  std::vector<int> order;
  for (size_t i = 0; i < rt.size(); ++i)
    if (w[i] * (rt[i] - lambda) > 0.0) order.push_back(static_cast<int>(i));
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const double vi = w[i] * (rt[i] - lambda);
    const double vj = w[j] * (rt[j] - lambda);
    if (vi != vj) return vi > vj;
    return i < j;
  });
  return order;
}

double mnl_value(const std::vector<double>& rt, const std::vector<double>& w,
                 const Assortment& s) {
  if (s.empty()) return 0.0;
  double num = 0.0, den = 1.0;
  for (int i : s) {
    num += rt[i] * w[i];
    den += w[i];
  }
  return num / den;
}

}  // namespace

std::pair<Assortment, double> capacitated_mnl_optimum(
    const std::vector<double>& revenues, const std::vector<double>& weights,
    int K) {
  std::vector<double> scratch;
  if (margin(revenues, weights, K, 0.0, &scratch) <= 0.0) return {{}, 0.0};

  double lo = 0.0;
  double hi = *std::max_element(revenues.begin(), revenues.end());
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (margin(revenues, weights, K, mid, &scratch) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }

  // Read the optimal set off the ranking near the fixed point; prefixes at
  // both bracket ends guard against a crossing inside the final bracket.
  Assortment best;
  double best_value = 0.0;
  for (double lambda : {lo, hi, 0.5 * (lo + hi)}) {
    const std::vector<int> order = ranking(revenues, weights, lambda);
    Assortment prefix;
    for (int k = 0; k < std::min<int>(K, static_cast<int>(order.size()));
         ++k) {
      prefix.push_back(order[k]);
      Assortment sorted = prefix;
      std::sort(sorted.begin(), sorted.end());
      const double v = mnl_value(revenues, weights, sorted);
      if (v > best_value || (v == best_value && sorted < best)) {
        best_value = v;
        best = sorted;
      }
    }
  }
  return {best, best_value};
}

OracleResult exact_oracle(const Instance& inst, const ZMatrix& z) {
  if (!inst.revenue_marketshare_fair())
    throw InputError(
        "exact_oracle needs a revenue/marketshare-fair instance (b == 0)");
  const PostFairness pf = post_fairness(inst, z);
  OracleResult res;
  res.set = capacitated_mnl_optimum(pf.revenue, inst.w, inst.K).first;
  res.value = rev_cost(inst, res.set, pf);
  return res;
}

OracleResult brute_force_subdual(const Instance& inst, const ZMatrix& z,
                                 std::int64_t cap) {
  if (count_assortments(inst.n, inst.K, cap) > cap)
    throw CapacityError("assortment count exceeds enumeration cap " +
                        std::to_string(cap));
  const PostFairness pf = post_fairness(inst, z);
  OracleResult res;
  for_each_assortment(inst.n, inst.K, [&](const Assortment& s) {
    const double v = rev_cost(inst, s, pf);
    if (v > res.value) {  // lexicographic enumeration: first max kept
      res.value = v;
      res.set = s;
    }
  });
  res.value = rev_cost(inst, res.set, pf);
  return res;
}

OracleResult oracle_dispatch(const Instance& inst, const ZMatrix& z,
                             const OracleSpec& spec,
                             const OracleOptions& opt) {
  OracleMethod method = spec.method;
  if (method == OracleMethod::Auto) {
    if (inst.revenue_marketshare_fair())
      method = OracleMethod::Exact;
    else if (inst.visibility_fair() && inst.uniform_revenue())
      method = OracleMethod::Fptas;
    else
      method = OracleMethod::Half;
  }
  switch (method) {
    case OracleMethod::Exact:
      return exact_oracle(inst, z);
    case OracleMethod::Half:
      return half_approx(inst, z, opt);
    case OracleMethod::UniformHalf:
      return uniform_half_approx(inst, z, opt);
    case OracleMethod::Ptas:
      return ptas(inst, z, spec.epsilon, opt);
    case OracleMethod::Fptas:
      return fptas(inst, z, spec.fptas_epsilon, opt);
    case OracleMethod::Brute:
      return brute_force_subdual(inst, z, spec.brute_cap);
    case OracleMethod::Auto:
      break;
  }
  throw InputError("unknown oracle method");
}

}  // namespace fairplan
