#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairplan/errors.hpp"
#include "fairplan/lp.hpp"
#include "fairplan/solver.hpp"
#include "test_support.hpp"

using namespace fairplan;
using namespace fairplan::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int fractional_count(const LpSolution& sol, double lo = 0.0, double hi = 1.0) {
  int count = 0;
  for (double v : sol.x)
    if (v > lo + 1e-7 && v < hi - 1e-7) ++count;
  return count;
}

}  // namespace

TEST_CASE("one-variable LP: primal and dual") {
  LpProblem p;
  p.num_vars = 1;
  p.num_rows = 1;
  p.c = {1.0};
  p.a = {1.0};
  p.sense = {LpProblem::Sense::LE};
  p.b = {1.0};
  p.lower = {0.0};
  p.upper = {2.0};
  const LpSolution sol = lp_solve(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.duals[0] == doctest::Approx(1.0));
  CHECK(lp_optimality_gap(p, sol) <= 1e-8);
}

TEST_CASE("infeasible and unbounded statuses") {
  LpProblem p;
  p.num_vars = 1;
  p.num_rows = 2;
  p.c = {1.0};
  p.a = {1.0, 1.0};
  p.sense = {LpProblem::Sense::LE, LpProblem::Sense::GE};
  p.b = {1.0, 2.0};  // x <= 1 and x >= 2
  p.lower = {0.0};
  p.upper = {kInf};
  CHECK(lp_solve(p).status == LpStatus::Infeasible);

  LpProblem u;
  u.num_vars = 1;
  u.num_rows = 1;
  u.c = {1.0};
  u.a = {-1.0};
  u.sense = {LpProblem::Sense::LE};
  u.b = {0.0};  // -x <= 0
  u.lower = {0.0};
  u.upper = {kInf};
  CHECK(lp_solve(u).status == LpStatus::Unbounded);
}

TEST_CASE("equality rows and GE duals") {
  // max x + y s.t. x + y = 1, x - y >= -0.5, 0 <= x, y <= 1
  LpProblem p;
  p.num_vars = 2;
  p.num_rows = 2;
  p.c = {1.0, 1.0};
  p.a = {1.0, 1.0, 1.0, -1.0};
  p.sense = {LpProblem::Sense::EQ, LpProblem::Sense::GE};
  p.b = {1.0, -0.5};
  p.lower = {0.0, 0.0};
  p.upper = {1.0, 1.0};
  const LpSolution sol = lp_solve(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(lp_optimality_gap(p, sol) <= 1e-8);
}

TEST_CASE("kp_relax hand-computed optima") {
  // Greedy ratio fill when cardinality is slack.
  LpSolution s1 = kp_relax_solve({3.0, 2.0}, {1.0, 1.0}, 1.5, 2);
  REQUIRE(s1.status == LpStatus::Optimal);
  CHECK(s1.x[0] == doctest::Approx(1.0));
  CHECK(s1.x[1] == doctest::Approx(0.5));
  CHECK(s1.objective == doctest::Approx(4.0));

  // Binding cardinality prefers the high-utility item outright.
  LpSolution s2 = kp_relax_solve({3.0, 2.0}, {1.0, 2.0}, 3.0, 1);
  REQUIRE(s2.status == LpStatus::Optimal);
  CHECK(s2.x[0] == doctest::Approx(1.0));
  CHECK(s2.x[1] == doctest::Approx(0.0));
  CHECK(s2.objective == doctest::Approx(3.0));

  // Zero capacity forces the zero vector.
  LpSolution s3 = kp_relax_solve({3.0, 2.0}, {1.0, 1.0}, 0.0, 2);
  CHECK(s3.objective == doctest::Approx(0.0));

  CHECK_THROWS_AS(kp_relax_solve({1.0}, {1.0}, -1.0, 1), InputError);
}

TEST_CASE("kp_relax basic optima have at most two fractional variables") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(2, 9);
    std::vector<double> u(n), w(n);
    for (int i = 0; i < n; ++i) {
      u[i] = rng.uniform(-1.0, 3.0);
      w[i] = 0.05 + rng.uniform() * 2.0;
    }
    const double W = rng.uniform() * 6.0;
    const int K = rng.uniform_int(1, n);
    const LpSolution sol = kp_relax_solve(u, w, W, K);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(fractional_count(sol) <= 2);

    // Cross-check against exhaustive vertex enumeration on tiny cases.
    if (n <= 5) {
      std::vector<std::vector<double>> rows;
      std::vector<double> rhs;
      rows.push_back(w);
      rhs.push_back(W);
      rows.push_back(std::vector<double>(n, 1.0));
      rhs.push_back(static_cast<double>(K));
      for (int i = 0; i < n; ++i) {  // x_i <= 1
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        rows.push_back(e);
        rhs.push_back(1.0);
      }
      const double ref = vertex_enumeration_lp(u, rows, rhs);
      CHECK(sol.objective == doctest::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("strong duality and determinism on random bounded LPs") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const int m = rng.uniform_int(1, 6);
    LpProblem p;
    p.num_vars = n;
    p.num_rows = m;
    p.c.resize(n);
    p.lower.assign(n, 0.0);
    p.upper.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      p.c[j] = rng.uniform(-2.0, 2.0);
      p.upper[j] = rng.uniform() < 0.3 ? kInf : rng.uniform(0.5, 3.0);
    }
    p.a.resize(static_cast<size_t>(m) * n);
    p.b.resize(m);
    p.sense.assign(m, LpProblem::Sense::LE);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.at(i, j) = rng.uniform(0.0, 1.0);
      p.b[i] = rng.uniform(0.5, 4.0);
    }
    const LpSolution sol = lp_solve(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(lp_optimality_gap(p, sol) <= 1e-8);

    const LpSolution again = lp_solve(p);
    CHECK(again.basis == sol.basis);
    CHECK(again.x == sol.x);
  }
}

TEST_CASE("full fairness LP on a tiny instance matches vertex enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 2; ++trial) {
    const Instance inst =
        random_instance(rng, 4, 2, InstanceClass::General, 0.05);
    const DistributionSolution sol = brute_force_fair(inst);

    // Rebuild the same LP rows naively.
    std::vector<Assortment> cols;
    for_each_assortment(inst.n, inst.K, [&](const Assortment& s) {
      if (!s.empty()) cols.push_back(s);
    });
    const int d = static_cast<int>(cols.size());
    std::vector<double> obj(d);
    for (int col = 0; col < d; ++col) obj[col] = rev(inst, cols[col]);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.n; ++j) {
        if (i == j) continue;
        std::vector<double> row(d, 0.0);
        for (int col = 0; col < d; ++col) {
          const Assortment& s = cols[col];
          const bool has_i = std::binary_search(s.begin(), s.end(), i);
          const bool has_j = std::binary_search(s.begin(), s.end(), j);
          if (has_i) row[col] += inst.q[j] * outcome(inst, i, s);
          if (has_j) row[col] -= inst.q[i] * outcome(inst, j, s);
        }
        rows.push_back(std::move(row));
        rhs.push_back(inst.delta * inst.q[i] * inst.q[j]);
      }
    }
    rows.push_back(std::vector<double>(d, 1.0));
    rhs.push_back(1.0);

    const double ref = vertex_enumeration_lp(obj, rows, rhs);
    CHECK(sol.objective == doctest::Approx(ref).epsilon(1e-6));
  }
}
