#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairplan/errors.hpp"
#include "fairplan/instance.hpp"
#include "fairplan/knapsack.hpp"
#include "fairplan/solver.hpp"
#include "test_support.hpp"

using namespace fairplan;
using namespace fairplan::testing;

namespace {

Instance unit_instance(int n, double w = 1.0, double r = 1.0) {
  Instance inst;
  inst.n = n;
  inst.K = n;
  inst.a.assign(n, 0.0);
  inst.b.assign(n, 1.0);
  inst.r.assign(n, r);
  inst.w.assign(n, w);
  inst.q.assign(n, 1.0);
  return inst;
}

}  // namespace

TEST_CASE("rev: empty, symmetric and single-item values") {
  Instance two = unit_instance(2);
  CHECK(rev(two, {}) == 0.0);
  CHECK(rev(two, {0, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // One movie-style item: w = 4.09/20, r = 1.
  Instance one = unit_instance(1, 4.09 / 20.0);
  CHECK(rev(one, {0}) == doctest::Approx(0.2045 / 1.2045).epsilon(1e-12));
  CHECK(rev(one, {0}) == doctest::Approx(0.16978).epsilon(1e-4));

  CHECK_THROWS_AS(rev(two, {0, 5}), InputError);
}

TEST_CASE("outcome: visibility, market share and revenue forms") {
  Instance vis = unit_instance(3);
  CHECK(outcome(vis, 1, {0, 1, 2}) == 1.0);  // a=0, b=1

  Instance ms = unit_instance(2);
  ms.a.assign(2, 1.0);
  ms.b.assign(2, 0.0);
  CHECK(outcome(ms, 0, {0, 1}) == doctest::Approx(1.0 / 3.0));

  Instance rev_inst = unit_instance(1);
  rev_inst.r = {2.0};
  rev_inst.a = {2.0};
  rev_inst.b = {0.0};
  CHECK(outcome(rev_inst, 0, {0}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(outcome(vis, 1, {0, 2}), InputError);
}

TEST_CASE("expected_outcomes over a distribution") {
  Instance vis = unit_instance(2);
  DistributionSolution p;
  p.support[{}] = 1.0;
  CHECK(expected_outcomes(vis, p) == std::vector<double>{0.0, 0.0});

  DistributionSolution mix;
  mix.support[{0}] = 0.4;
  mix.support[{0, 1}] = 0.6;
  const auto o = expected_outcomes(vis, mix);
  CHECK(o[0] == doctest::Approx(1.0));
  CHECK(o[1] == doctest::Approx(0.6));

  DistributionSolution split;
  split.support[{0}] = 0.5;
  split.support[{1}] = 0.5;
  const auto o2 = expected_outcomes(vis, split);
  CHECK(o2[0] == doctest::Approx(0.5));
  CHECK(o2[1] == doctest::Approx(0.5));
}

TEST_CASE("fairness_check: symmetric pass, singleton fallback, missing item") {
  Instance vis = unit_instance(2);
  vis.delta = 0.0;
  DistributionSolution split;
  split.support[{0}] = 0.5;
  split.support[{1}] = 0.5;
  CHECK(fairness_check(vis, split, 1e-9).pass);

  // The proportional singleton mix is feasible at any delta >= 0.
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = random_instance(rng, 5, 3, InstanceClass::General, 0.0);
    DistributionSolution fallback;
    double norm = 0.0;
    std::vector<double> weights(inst.n);
    for (int i = 0; i < inst.n; ++i) {
      const double oi = outcome(inst, i, {i});
      weights[i] = inst.q[i] / oi;
      norm += weights[i];
    }
    for (int i = 0; i < inst.n; ++i)
      fallback.support[{i}] = weights[i] / norm;
    const auto verdict = fairness_check(inst, fallback, 1e-9);
    CHECK(verdict.pass);
  }

  DistributionSolution lopsided;
  lopsided.support[{0}] = 1.0;
  const auto verdict = fairness_check(vis, lopsided, 1e-9);
  CHECK_FALSE(verdict.pass);
  CHECK(verdict.i == 0);
  CHECK(verdict.j == 1);
  CHECK(verdict.slack == doctest::Approx(1.0));  // O_0 = 1, O_1 = 0
}

TEST_CASE("post_fairness cost algebra") {
  Instance inst = unit_instance(2);
  inst.q = {1.0, 2.0};

  SUBCASE("zero dual leaves revenues untouched") {
    const PostFairness pf = post_fairness(inst, ZMatrix::zero(2));
    CHECK(pf.cost == std::vector<double>{0.0, 0.0});
    CHECK(pf.revenue == inst.r);
    CHECK(pf.fixed_cost == std::vector<double>{0.0, 0.0});
  }

  SUBCASE("one-sided dual entry") {
    ZMatrix z(2);
    z(0, 1) = 0.5;
    const PostFairness pf = post_fairness(inst, z);
    CHECK(pf.cost[0] == doctest::Approx(1.0));   // (0.5 - 0) * q_1
    CHECK(pf.cost[1] == doctest::Approx(-0.5));  // (0 - 0.5) * q_0
    // Visibility instance: adjusted revenue untouched, fixed cost = b * c.
    CHECK(pf.revenue == inst.r);
    CHECK(pf.fixed_cost[0] == doctest::Approx(1.0));
    CHECK(pf.fixed_cost[1] == doctest::Approx(-0.5));
  }
}

TEST_CASE("rev_cost: zero dual reduction and a hand-computed value") {
  Instance inst = unit_instance(2);
  inst.q = {1.0, 2.0};
  ZMatrix z(2);
  z(0, 1) = 0.5;
  // fixed costs (1.0, -0.5): set {1} earns 1/2 - (-0.5) = 1.
  CHECK(rev_cost(inst, {1}, z) == doctest::Approx(1.0));
  CHECK(rev_cost(inst, {}, z) == 0.0);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Instance rnd = random_instance(rng, 6, 3, InstanceClass::General);
    const ZMatrix zr = random_z(rng, 6);
    const PostFairness pf = post_fairness(rnd, zr);
    CHECK(rev_cost(rnd, {}, zr) == rev(rnd, {}));
    for_each_assortment(rnd.n, rnd.K, [&](const Assortment& s) {
      CHECK(rev_cost(rnd, s, ZMatrix::zero(rnd.n)) ==
            doctest::Approx(rev(rnd, s)).epsilon(1e-14));
      // Two algebraic routes agree to 1e-12 relative.
      const double direct = rev_cost(rnd, s, pf);
      const double via = rev_cost_via_outcomes(rnd, s, zr);
      CHECK(direct ==
            doctest::Approx(via).epsilon(1e-12).scale(std::abs(via) + 1.0));
    });
  }
}

TEST_CASE("brute_force_subdual: enumeration, ties and caps") {
  Instance inst = unit_instance(3);
  inst.r = {1.0, 0.6, 0.2};
  inst.K = 2;
  const OracleResult res = brute_force_subdual(inst, ZMatrix::zero(3));
  CHECK(res.set == Assortment{0, 1});
  CHECK(res.value == doctest::Approx(1.6 / 3.0));

  // With any dual point the empty set keeps the value nonnegative.
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Instance rnd = random_instance(rng, 5, 2, InstanceClass::General);
    const OracleResult r2 = brute_force_subdual(rnd, random_z(rng, 5, 2.0));
    CHECK(r2.value >= 0.0);
    CHECK(static_cast<int>(r2.set.size()) <= rnd.K);
  }

  CHECK_THROWS_AS(brute_force_subdual(unit_instance(30), ZMatrix::zero(30), 100),
                  CapacityError);
}

TEST_CASE("items with nonpositive adjusted revenue and nonnegative fixed "
          "cost are dropped from the oracle view") {
  Instance inst = unit_instance(2);
  inst.a = {5.0, 0.0};
  inst.b = {0.1, 1.0};
  inst.q = {1.0, 1.0};
  ZMatrix z(2);
  z(0, 1) = 3.0;  // c_0 = 3 (rt_0 = 1 - 15 < 0), c_1 = -3 (rt_1 = 1)
  const PostFairness pf = post_fairness(inst, z);
  REQUIRE(pf.revenue[0] <= 0.0);
  REQUIRE(pf.fixed_cost[0] >= 0.0);
  const KnapsackView view = make_knapsack_view(inst, pf);
  CHECK(view.size() == 1);
  CHECK(view.orig == std::vector<int>{1});

  // A hand-built view where everything drops: only the empty set remains.
  PostFairness all_bad;
  all_bad.cost = {1.0, 1.0};
  all_bad.revenue = {-0.5, 0.0};
  all_bad.fixed_cost = {0.2, 0.0};
  const KnapsackView empty_view = make_knapsack_view(inst, all_bad);
  CHECK(empty_view.size() == 0);
}

TEST_CASE("count_assortments saturates at the cap") {
  CHECK(count_assortments(3, 2, 1000) == 7);   // {}, 3 singletons, 3 pairs
  CHECK(count_assortments(30, 15, 1000) == 1001);
}

TEST_CASE("instance validation rejects bad data") {
  Instance inst = unit_instance(2);
  inst.K = 3;
  CHECK_THROWS_AS(inst.validate(), InputError);
  inst.K = 2;
  inst.w[0] = 0.0;
  CHECK_THROWS_AS(inst.validate(), InputError);
  inst.w[0] = 1.0;
  inst.delta = -0.5;
  CHECK_THROWS_AS(inst.validate(), InputError);
}

TEST_CASE("instance classification") {
  Instance inst = unit_instance(3);
  CHECK(inst.visibility_fair());
  CHECK_FALSE(inst.revenue_marketshare_fair());
  CHECK(inst.uniform_revenue());
  inst.a[1] = 0.5;
  CHECK_FALSE(inst.visibility_fair());
  inst.b.assign(3, 0.0);
  CHECK(inst.revenue_marketshare_fair());
}
