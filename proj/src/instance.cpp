#include "fairplan/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fairplan/errors.hpp"

namespace fairplan {

void Instance::validate() const {
  if (n <= 0) throw InputError("instance needs at least one item");
  auto check_len = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != n)
      throw InputError(std::string(name) + " has length " +
                       std::to_string(v.size()) + ", expected " +
                       std::to_string(n));
  };
  check_len(a, "a");
  check_len(b, "b");
  check_len(r, "r");
  check_len(w, "w");
  check_len(q, "q");
  if (!ids.empty() && static_cast<int>(ids.size()) != n)
    throw InputError("ids length mismatch");
  if (K < 1 || K > n)
    throw InputError("K must lie in {1, ..., n}, got " + std::to_string(K));
  if (!(delta >= 0.0)) throw InputError("delta must be >= 0");
  for (int i = 0; i < n; ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw InputError("w[" + std::to_string(i) + "] must be > 0");
    if (!(r[i] > 0.0) || !std::isfinite(r[i]))
      throw InputError("r[" + std::to_string(i) + "] must be > 0");
    if (!(q[i] > 0.0) || !std::isfinite(q[i]))
      throw InputError("q[" + std::to_string(i) + "] must be > 0");
    if (!(a[i] >= 0.0) || !std::isfinite(a[i]))
      throw InputError("a[" + std::to_string(i) + "] must be >= 0");
    if (!(b[i] >= 0.0) || !std::isfinite(b[i]))
      throw InputError("b[" + std::to_string(i) + "] must be >= 0");
  }
}

bool Instance::revenue_marketshare_fair() const {
  return std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
}

bool Instance::visibility_fair() const {
  return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
}

bool Instance::uniform_revenue() const {
  return std::all_of(r.begin(), r.end(),
                     [&](double v) { return v == r.front(); });
}

double Instance::total_weight() const {
  double s = 0.0;
  for (double wi : w) s += wi;
  return s;
}

double Instance::max_revenue() const {
  return *std::max_element(r.begin(), r.end());
}

namespace {

double weight_of(const Instance& inst, const Assortment& s) {
  double total = 0.0;
  for (int i : s) total += inst.w[i];
  return total;
}

void check_indices(const Instance& inst, const Assortment& s) {
  int prev = -1;
  for (int i : s) {
    if (i < 0 || i >= inst.n)
      throw InputError("item index " + std::to_string(i) + " out of range");
    if (i <= prev) throw InputError("assortment must be strictly increasing");
    prev = i;
  }
}

}  // namespace

double rev(const Instance& inst, const Assortment& s) {
  check_indices(inst, s);
  if (s.empty()) return 0.0;
  double num = 0.0;
  for (int i : s) num += inst.r[i] * inst.w[i];
  return num / (1.0 + weight_of(inst, s));
}

double outcome(const Instance& inst, int i, const Assortment& s) {
  check_indices(inst, s);
  if (!std::binary_search(s.begin(), s.end(), i))
    throw InputError("outcome requested for item not in the assortment");
  return inst.a[i] * inst.w[i] / (1.0 + weight_of(inst, s)) + inst.b[i];
}

std::vector<double> expected_outcomes(const Instance& inst,
                                      const DistributionSolution& p) {
  std::vector<double> o(inst.n, 0.0);
  for (const auto& [s, prob] : p.support) {
    if (s.empty()) continue;
    const double denom = 1.0 + weight_of(inst, s);
    for (int i : s) o[i] += prob * (inst.a[i] * inst.w[i] / denom + inst.b[i]);
  }
  return o;
}

FairnessVerdict fairness_check(const Instance& inst,
                               const DistributionSolution& p, double tol) {
  const std::vector<double> o = expected_outcomes(inst, p);
  FairnessVerdict v;
  v.slack = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      const double gap = o[i] / inst.q[i] - o[j] / inst.q[j] - inst.delta;
      if (gap > v.slack) {
        v.slack = gap;
        v.i = i;
        v.j = j;
      }
    }
  }
  if (inst.n <= 1) v.slack = 0.0;
  v.pass = v.slack <= tol;
  return v;
}

PostFairness post_fairness(const Instance& inst, const ZMatrix& z) {
  PostFairness pf;
  pf.cost.assign(inst.n, 0.0);
  pf.revenue.assign(inst.n, 0.0);
  pf.fixed_cost.assign(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    double c = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (j == i) continue;
      c += (z(i, j) - z(j, i)) * inst.q[j];
    }
    pf.cost[i] = c;
    pf.revenue[i] = inst.r[i] - inst.a[i] * c;
    pf.fixed_cost[i] = inst.b[i] * c;
  }
  return pf;
}

double rev_cost(const Instance& inst, const Assortment& s,
                const PostFairness& pf) {
  check_indices(inst, s);
  if (s.empty()) return 0.0;
  double num = 0.0;
  double fixed = 0.0;
  for (int i : s) {
    num += pf.revenue[i] * inst.w[i];
    fixed += pf.fixed_cost[i];
  }
  return num / (1.0 + weight_of(inst, s)) - fixed;
}

double rev_cost(const Instance& inst, const Assortment& s, const ZMatrix& z) {
  return rev_cost(inst, s, post_fairness(inst, z));
}

std::int64_t count_assortments(int n, int K, std::int64_t cap) {
  std::int64_t total = 1;  // empty set
  std::int64_t binom = 1;
  for (int k = 1; k <= K; ++k) {
    // binom = C(n, k), computed incrementally with overflow saturation
    if (binom > cap) return cap + 1;
    binom = binom * (n - k + 1) / k;
    total += binom;
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace fairplan
