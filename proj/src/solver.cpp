#include "fairplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>

#include "fairplan/errors.hpp"
#include "fairplan/lp.hpp"

namespace fairplan {

namespace {

// Variable layout of the restricted dual: one z variable per ordered pair
// (i, j), i != j, in row-major order, then rho.
int pair_var(int n, int i, int j) { return i * (n - 1) + (j < i ? j : j - 1); }

// The master is solved through its dual, whose right-hand sides are the
// column revenues: at delta = 0 the primal form has an all-zero rhs and
// stalls the simplex in degenerate cycles, while the dual stays well posed.
// In <=-form (maximization):
//   max  -(sum_{i!=j} delta q_i q_j z_ij + rho)
//   s.t. -sum_{i in S} O_i(S) c_i(z) - rho <= -rev(S)   for each column S
//        z, rho >= 0.
// The primal distribution p(S) is the optimal dual of row S.
LpProblem build_restricted_dual(const Instance& inst,
                                const std::vector<Assortment>& columns) {
  const int n = inst.n;
  const int nv = n * (n - 1) + 1;
  const int rho = nv - 1;
  const int d = static_cast<int>(columns.size());
  LpProblem p;
  p.num_vars = nv;
  p.num_rows = d;
  p.c.assign(nv, 0.0);
  p.a.assign(static_cast<size_t>(d) * nv, 0.0);
  p.sense.assign(d, LpProblem::Sense::LE);
  p.b.assign(d, 0.0);
  p.lower.assign(nv, 0.0);
  p.upper.assign(nv, std::numeric_limits<double>::infinity());

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        p.c[pair_var(n, i, j)] = -inst.delta * inst.q[i] * inst.q[j];
  p.c[rho] = -1.0;

  for (int row = 0; row < d; ++row) {
    const Assortment& s = columns[row];
    p.b[row] = -rev(inst, s);
    p.at(row, rho) = -1.0;
    for (int i : s) {
      const double oi = outcome(inst, i, s);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        // c_i(z) contributes +z_ij q_j and -z_ji q_j for each partner j.
        p.at(row, pair_var(n, i, j)) -= inst.q[j] * oi;
        p.at(row, pair_var(n, j, i)) += inst.q[j] * oi;
      }
    }
  }
  return p;
}

MasterResult master_from_solution(const Instance& inst,
                                  const std::vector<Assortment>& columns,
                                  const LpSolution& sol) {
  const int n = inst.n;
  MasterResult out;
  double objective = 0.0;
  for (size_t row = 0; row < columns.size(); ++row) {
    const double p = std::max(0.0, sol.duals[row]);
    if (p > 1e-9) {
      out.primal.support[columns[row]] = p;
      objective += p * rev(inst, columns[row]);
    }
  }
  out.primal.objective = objective;
  out.dual.z = ZMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.dual.z(i, j) = sol.x[pair_var(n, i, j)];
  out.dual.rho = sol.x[static_cast<size_t>(n) * (n - 1)];
  return out;
}

}  // namespace

MasterResult restricted_master(const Instance& inst,
                               const std::vector<Assortment>& columns) {
  if (columns.empty()) throw InputError("master problem needs columns");
  for (const auto& s : columns)
    if (static_cast<int>(s.size()) > inst.K)
      throw InputError("master column larger than K");
  const LpProblem p = build_restricted_dual(inst, columns);
  const LpSolution sol = lp_solve(p);
  if (sol.status != LpStatus::Optimal)
    throw InternalError(
        "restricted dual not optimal; it is always feasible and bounded");
  return master_from_solution(inst, columns, sol);
}

DistributionSolution brute_force_fair(const Instance& inst, std::int64_t cap) {
  if (count_assortments(inst.n, inst.K, cap) > cap)
    throw CapacityError("assortment count exceeds enumeration cap " +
                        std::to_string(cap));
  std::vector<Assortment> columns;
  for_each_assortment(inst.n, inst.K, [&](const Assortment& s) {
    if (!s.empty()) columns.push_back(s);
  });
  return restricted_master(inst, columns).primal;
}

SolveReport column_generation(const Instance& inst, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  std::set<Assortment> column_set;
  std::vector<Assortment> columns;
  for (int i = 0; i < inst.n; ++i) {
    columns.push_back({i});
    column_set.insert({i});
  }

  const int cap = cfg.colgen_iter_cap > 0 ? cfg.colgen_iter_cap
                                          : 10 * inst.n * inst.n;
  MasterResult master;
  double best_obj = -std::numeric_limits<double>::infinity();
  int stalled = 0;
  int iter = 0;
  while (true) {
    if (++iter > cap)
      throw ConvergenceError("column generation exceeded iteration cap " +
                             std::to_string(cap));
    master = restricted_master(inst, columns);
    const OracleResult res =
        oracle_dispatch(inst, master.dual.z, cfg.oracle, {});
    ++report.oracle_calls;

    if (master.primal.objective > best_obj + cfg.stall_tol) {
      best_obj = master.primal.objective;
      stalled = 0;
    } else if (++stalled >= cfg.stall_window) {
      break;  // degeneracy guard
    }
    if (res.value <= master.dual.rho + cfg.red_cost_tol) break;
    if (res.set.empty() || column_set.count(res.set)) break;
    column_set.insert(res.set);
    columns.push_back(res.set);
    report.generated_columns.push_back(res.set);
  }
  report.iterations = iter;
  report.solution = master.primal;
  report.dual = master.dual;
  report.objective = master.primal.objective;
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

SolveReport ellipsoid_solve(const Instance& inst, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = inst.n;
  const int N = n * n + 1;  // z flattened row-major, then rho
  const int rho_ix = N - 1;

  std::vector<double> dvec(N, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) dvec[i * n + j] = inst.delta * inst.q[i] * inst.q[j];
  dvec[rho_ix] = 1.0;

  const double rbar = inst.max_revenue();
  double qmax2 = 0.0;
  for (double qi : inst.q) qmax2 = std::max(qmax2, qi * qi);
  const double radius =
      cfg.ellipsoid.initial_radius > 0.0
          ? cfg.ellipsoid.initial_radius
          : n * std::max({rbar, inst.delta * qmax2, 1.0});

  std::vector<double> center(N, 0.0);
  center[rho_ix] = rbar;
  std::vector<double> shape(static_cast<size_t>(N) * N, 0.0);
  for (int i = 0; i < N; ++i)
    shape[static_cast<size_t>(i) * N + i] = radius * radius;

  std::vector<double> best = center;  // (0, rbar) is always dual-feasible
  double best_obj = rbar;

  SolveReport report;
  std::set<Assortment> violated;
  std::vector<double> cut(N), da(N);

  for (int t = 0; t < cfg.ellipsoid.t_max; ++t) {
    // Classify the center: objective cut, nonnegativity cut, or a fairness
    // cut from the oracle; a feasible improving center updates the incumbent
    // and is then cut along the objective.
    double obj = 0.0;
    for (int k = 0; k < N; ++k) obj += dvec[k] * center[k];

    bool have_cut = false;
    if (obj >= best_obj) {
      for (int k = 0; k < N; ++k) cut[k] = -dvec[k];
      have_cut = true;
    }
    if (!have_cut) {
      if (center[rho_ix] < 0.0) {
        std::fill(cut.begin(), cut.end(), 0.0);
        cut[rho_ix] = 1.0;
        have_cut = true;
      } else {
        for (int k = 0; k < N - 1 && !have_cut; ++k) {
          if (center[k] < 0.0) {
            std::fill(cut.begin(), cut.end(), 0.0);
            cut[k] = 1.0;
            have_cut = true;
          }
        }
      }
    }
    if (!have_cut) {
      ZMatrix z(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) z(i, j) = center[i * n + j];
      const OracleResult res = oracle_dispatch(inst, z, cfg.oracle, {});
      ++report.oracle_calls;
      if (res.value > center[rho_ix]) {
        violated.insert(res.set);
        std::fill(cut.begin(), cut.end(), 0.0);
        cut[rho_ix] = 1.0;
        for (int u : res.set) {
          const double ou = outcome(inst, u, res.set);
          for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            cut[u * n + v] += ou * inst.q[v];
            cut[v * n + u] -= ou * inst.q[v];
          }
        }
      } else {
        best = center;
        best_obj = obj;
        for (int k = 0; k < N; ++k) cut[k] = -dvec[k];
      }
    }

    // Shrink: center += D a / ((N+1) sqrt(a'Da));
    // D <- N^2/(N^2-1) (D - 2/(N+1) (Da)(Da)'/a'Da).
    double ada = 0.0, cut_norm2 = 0.0, trace = 0.0;
    for (int i = 0; i < N; ++i) {
      double acc = 0.0;
      const double* row = &shape[static_cast<size_t>(i) * N];
      for (int j = 0; j < N; ++j) acc += row[j] * cut[j];
      da[i] = acc;
      ada += cut[i] * acc;
      cut_norm2 += cut[i] * cut[i];
      trace += row[i];
    }
    const double mag = cut_norm2 * std::max(trace / N, 1e-300);
    if (!std::isfinite(ada) || ada < -1e-6 * mag)
      throw NumericalError(
          "ellipsoid shape matrix lost positive-definiteness (a'Da = " +
          std::to_string(ada) + " at iteration " + std::to_string(t) + ")");
    if (ada <= 1e-14 * mag) break;  // numerically flat: nothing left to cut
    const double step = 1.0 / ((N + 1) * std::sqrt(ada));
    for (int i = 0; i < N; ++i) center[i] += step * da[i];
    const double scale = double(N) * N / (double(N) * N - 1.0);
    const double inner = 2.0 / ((N + 1) * ada);
    for (int i = 0; i < N; ++i) {
      double* row = &shape[static_cast<size_t>(i) * N];
      for (int j = 0; j < N; ++j)
        row[j] = scale * (row[j] - inner * da[i] * da[j]);
    }
    for (int i = 0; i < N; ++i)  // re-symmetrize against drift
      for (int j = i + 1; j < N; ++j) {
        const double avg = 0.5 * (shape[static_cast<size_t>(i) * N + j] +
                                  shape[static_cast<size_t>(j) * N + i]);
        shape[static_cast<size_t>(i) * N + j] = avg;
        shape[static_cast<size_t>(j) * N + i] = avg;
      }
    ++report.iterations;
    if (cfg.ellipsoid.trace != nullptr) {
      // Cholesky log-determinant; fails only if PD is already lost.
      std::vector<double> chol = shape;
      double log_det = 0.0;
      bool pd = true;
      for (int i = 0; i < N && pd; ++i) {
        double diag = chol[static_cast<size_t>(i) * N + i];
        for (int k = 0; k < i; ++k) {
          const double lik = chol[static_cast<size_t>(i) * N + k];
          diag -= lik * lik;
        }
        if (diag <= 0.0) {
          pd = false;
          break;
        }
        const double li = std::sqrt(diag);
        log_det += 2.0 * std::log(li);
        chol[static_cast<size_t>(i) * N + i] = li;
        for (int r = i + 1; r < N; ++r) {
          double v = chol[static_cast<size_t>(r) * N + i];
          for (int k = 0; k < i; ++k)
            v -= chol[static_cast<size_t>(r) * N + k] *
                 chol[static_cast<size_t>(i) * N + k];
          chol[static_cast<size_t>(r) * N + i] = v / li;
        }
      }
      cfg.ellipsoid.trace->log_det.push_back(
          pd ? log_det : -std::numeric_limits<double>::infinity());
      cfg.ellipsoid.trace->incumbent_obj.push_back(best_obj);
    }
  }

  // Restricted primal over the violated sets plus singletons, which keeps
  // the master feasible even when no fairness cut ever fired.
  std::vector<Assortment> columns;
  for (int i = 0; i < n; ++i) {
    Assortment s{i};
    if (!violated.count(s)) columns.push_back(s);
  }
  for (const auto& s : violated)
    if (!s.empty()) columns.push_back(s);
  report.generated_columns.assign(violated.begin(), violated.end());

  MasterResult master = restricted_master(inst, columns);
  report.solution = master.primal;
  report.objective = master.primal.objective;
  report.dual.z = ZMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) report.dual.z(i, j) = std::max(0.0, best[i * n + j]);
  report.dual.rho = std::max(0.0, best[rho_ix]);
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

SolveReport solve(const Instance& inst, const SolverConfig& cfg) {
  inst.validate();
  SolveReport report = cfg.method == SolveMethod::ColumnGeneration
                           ? column_generation(inst, cfg)
                           : ellipsoid_solve(inst, cfg);
  const FairnessVerdict verdict =
      fairness_check(inst, report.solution, cfg.feas_tol);
  if (!verdict.pass)
    throw InternalError("solver emitted an unfair solution: pair (" +
                        std::to_string(verdict.i) + ", " +
                        std::to_string(verdict.j) + ") exceeds delta by " +
                        std::to_string(verdict.slack));
  if (cfg.self_check_enum_cap > 0 &&
      count_assortments(inst.n, inst.K, cfg.self_check_enum_cap) <=
          cfg.self_check_enum_cap) {
    const DistributionSolution exact =
        brute_force_fair(inst, cfg.self_check_enum_cap);
    double beta = 1.0;
    switch (cfg.oracle.method) {
      case OracleMethod::Half:
      case OracleMethod::UniformHalf:
        beta = 0.5;
        break;
      case OracleMethod::Ptas:
        beta = 1.0 - cfg.oracle.epsilon;
        break;
      case OracleMethod::Fptas:
        beta = 1.0 - cfg.oracle.fptas_epsilon;
        break;
      case OracleMethod::Auto:
        beta = 0.5;  // weakest oracle auto can select
        break;
      default:
        beta = 1.0;
    }
    if (report.objective < beta * exact.objective - 1e-6)
      throw InternalError("approximation contract violated: objective " +
                          std::to_string(report.objective) + " < " +
                          std::to_string(beta) + " * " +
                          std::to_string(exact.objective));
  }
  return report;
}

double unconstrained_optimum(const Instance& inst, Assortment* argmax) {
  // With the fairness constraints dropped the best distribution offers one
  // set; at z = 0 the exact capacitated-MNL path maximizes plain revenue.
  const auto [set, value] = capacitated_mnl_optimum(inst.r, inst.w, inst.K);
  if (argmax) *argmax = set;
  return value;
}

int pruned_support_size(const DistributionSolution& sol, double threshold) {
  int count = 0;
  for (const auto& [s, p] : sol.support)
    if (p > threshold) ++count;
  return count;
}

}  // namespace fairplan
