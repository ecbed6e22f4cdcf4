#include "fairplan/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fairplan/errors.hpp"

namespace fairplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { Basic, AtLower, AtUpper };

// Bounded-variable tableau simplex over the augmented column set
// [structural | slacks | artificials]. GE rows are negated to LE up front;
// EQ rows keep a [0,0] slack. Every variable needs a finite lower bound,
// which all callers in this project satisfy.
class Simplex {
 public:
  Simplex(const LpProblem& p, double tol) : p_(p), tol_(tol) {
    m_ = p.num_rows;
    d_ = p.num_vars;
    build();
  }

  LpSolution run() {
    LpSolution sol;
    if (needs_phase1_) {
      set_phase1_objective();
      optimize();
      double infeas = 0.0;
      for (int j : art_cols_) infeas += value_of(j);
      if (infeas > 1e-7) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iters_;
        return sol;
      }
      for (int j : art_cols_) {
        lb_[j] = ub_[j] = 0.0;  // pin; may stay basic at zero
      }
    }
    set_phase2_objective();
    const bool bounded = optimize();
    if (!bounded) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = iters_;
      return sol;
    }
    refine();
    extract(sol);
    return sol;
  }

 private:
  const LpProblem& p_;
  double tol_;
  int m_ = 0, d_ = 0, ncols_ = 0;

  std::vector<double> orig_;   // augmented matrix, row-major m x ncols
  std::vector<double> tab_;    // B^{-1} * orig_, row-major
  std::vector<double> rhs_;    // effective b (after GE flips)
  std::vector<double> lb_, ub_;
  std::vector<VarState> state_;
  std::vector<int> basis_;     // column basic in each row
  std::vector<double> xb_;     // values of basic variables
  std::vector<double> cobj_;   // current-phase objective
  std::vector<double> dvec_;   // reduced costs for current phase
  std::vector<bool> flipped_;  // rows negated from GE to LE
  std::vector<int> art_cols_;
  bool needs_phase1_ = false;
  bool bland_ = false;
  int iters_ = 0;
  int degenerate_streak_ = 0;

  double& tab(int i, int j) { return tab_[static_cast<size_t>(i) * ncols_ + j]; }
  double& orig(int i, int j) {
    return orig_[static_cast<size_t>(i) * ncols_ + j];
  }

  double value_of(int j) const {
    if (state_[j] == VarState::AtLower) return lb_[j];
    if (state_[j] == VarState::AtUpper) return ub_[j];
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == j) return xb_[i];
    return 0.0;
  }

  void build() {
    // Column layout first pass: structural + one slack per row; artificials
    // are appended after the starting point is known.
    flipped_.assign(m_, false);
    rhs_ = p_.b;
    const int slack0 = d_;
    int ncols_nominal = d_ + m_;

    lb_ = p_.lower;
    ub_ = p_.upper;
    for (int j = 0; j < d_; ++j) {
      if (!std::isfinite(lb_[j]))
        throw InputError("lp_solve requires finite lower bounds");
    }

    std::vector<double> dense(static_cast<size_t>(m_) * ncols_nominal, 0.0);
    for (int i = 0; i < m_; ++i) {
      double sgn = 1.0;
      if (p_.sense[i] == LpProblem::Sense::GE) {
        sgn = -1.0;
        flipped_[i] = true;
        rhs_[i] = -rhs_[i];
      }
      for (int j = 0; j < d_; ++j)
        dense[static_cast<size_t>(i) * ncols_nominal + j] = sgn * p_.at(i, j);
      dense[static_cast<size_t>(i) * ncols_nominal + slack0 + i] = 1.0;
      lb_.push_back(0.0);
      ub_.push_back(p_.sense[i] == LpProblem::Sense::EQ ? 0.0 : kInf);
    }

    // Starting point: structural nonbasic at the lower bound, slack basic.
    state_.assign(ncols_nominal, VarState::AtLower);
    std::vector<double> resid = rhs_;
    for (int j = 0; j < d_; ++j) {
      const double v = lb_[j];
      if (v != 0.0)
        for (int i = 0; i < m_; ++i)
          resid[i] -= dense[static_cast<size_t>(i) * ncols_nominal + j] * v;
    }

    basis_.assign(m_, -1);
    xb_.assign(m_, 0.0);
    std::vector<double> art_sign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const bool eq = p_.sense[i] == LpProblem::Sense::EQ;
      const bool slack_ok = eq ? std::abs(resid[i]) <= tol_ : resid[i] >= 0.0;
      if (slack_ok) {
        basis_[i] = slack0 + i;
        xb_[i] = eq ? 0.0 : resid[i];
        state_[slack0 + i] = VarState::Basic;
      } else {
        art_sign[i] = resid[i] < 0.0 ? -1.0 : 1.0;
      }
    }

    int n_art = 0;
    for (int i = 0; i < m_; ++i)
      if (art_sign[i] != 0.0) ++n_art;
    needs_phase1_ = n_art > 0;
    ncols_ = ncols_nominal + n_art;

    orig_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < ncols_nominal; ++j)
        orig(i, j) = dense[static_cast<size_t>(i) * ncols_nominal + j];

    int art = ncols_nominal;
    for (int i = 0; i < m_; ++i) {
      if (art_sign[i] == 0.0) continue;
      orig(i, art) = art_sign[i];
      lb_.push_back(0.0);
      ub_.push_back(kInf);
      state_.push_back(VarState::Basic);
      basis_[i] = art;
      xb_[i] = std::abs(resid[i]);
      art_cols_.push_back(art);
      ++art;
    }

    // The starting basis is (a permutation of) the identity, so the tableau
    // starts as a copy of the original matrix.
    tab_ = orig_;
    // Normalize artificial rows so the basic column has coefficient +1.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= ncols_nominal && orig(i, basis_[i]) < 0.0)
        for (int j = 0; j < ncols_; ++j) tab(i, j) = -tab(i, j);
    }
  }

  void set_phase1_objective() {
    cobj_.assign(ncols_, 0.0);
    for (int j : art_cols_) cobj_[j] = -1.0;
    recompute_reduced_costs();
  }

  void set_phase2_objective() {
    cobj_.assign(ncols_, 0.0);
    for (int j = 0; j < d_; ++j) cobj_[j] = p_.c[j];
    recompute_reduced_costs();
  }

  void recompute_reduced_costs() {
    dvec_ = cobj_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cobj_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) dvec_[j] -= cb * tab(i, j);
    }
    for (int i = 0; i < m_; ++i) dvec_[basis_[i]] = 0.0;
  }

  bool improving(int j) const {
    if (state_[j] == VarState::Basic) return false;
    if (lb_[j] == ub_[j]) return false;
    if (state_[j] == VarState::AtLower) return dvec_[j] > tol_;
    return dvec_[j] < -tol_;
  }

  int pick_entering() const {
    int best = -1;
    if (bland_) {
      for (int j = 0; j < ncols_; ++j)
        if (improving(j)) return j;
      return -1;
    }
    double best_score = tol_;
    for (int j = 0; j < ncols_; ++j) {
      if (!improving(j)) continue;
      const double score = std::abs(dvec_[j]);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Returns false on unboundedness.
  bool optimize() {
    const long long cap = 20000LL + 200LL * (m_ + ncols_);
    while (true) {
      const int jq = pick_entering();
      if (jq < 0) return true;
      if (++iters_ > cap)
        throw NumericalError("simplex pivot cap exceeded (" +
                             std::to_string(cap) + " pivots)");

      const double dir = state_[jq] == VarState::AtLower ? 1.0 : -1.0;
      double t_best = ub_[jq] - lb_[jq];  // bound-flip distance, may be inf
      int leave_row = -1;
      double leave_rate = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * tab(i, jq);  // d(xb_i)/dt
        double ti = kInf;
        if (rate < -tol_) {
          if (std::isfinite(lb_[basis_[i]]))
            ti = (xb_[i] - lb_[basis_[i]]) / (-rate);
        } else if (rate > tol_) {
          if (std::isfinite(ub_[basis_[i]]))
            ti = (ub_[basis_[i]] - xb_[i]) / rate;
        }
        if (ti < t_best - 1e-13 ||
            (ti <= t_best + 1e-13 && leave_row >= 0 && ti < kInf &&
             basis_[i] < basis_[leave_row])) {
          t_best = std::max(ti, 0.0);
          leave_row = i;
          leave_rate = rate;
        }
      }

      if (!std::isfinite(t_best)) return false;  // unbounded ray

      if (t_best <= 1e-12) {
        if (++degenerate_streak_ > m_ + ncols_) bland_ = true;
      } else {
        degenerate_streak_ = 0;
      }

      if (leave_row < 0) {
        // Pure bound flip: entering travels to its opposite bound.
        for (int i = 0; i < m_; ++i) xb_[i] -= dir * t_best * tab(i, jq);
        state_[jq] = state_[jq] == VarState::AtLower ? VarState::AtUpper
                                                     : VarState::AtLower;
        continue;
      }

      const double enter_val =
          (state_[jq] == VarState::AtLower ? lb_[jq] : ub_[jq]) + dir * t_best;
      for (int i = 0; i < m_; ++i)
        if (i != leave_row) xb_[i] -= dir * t_best * tab(i, jq);

      const int jl = basis_[leave_row];
      state_[jl] = leave_rate < 0.0 ? VarState::AtLower : VarState::AtUpper;
      if (lb_[jl] == ub_[jl]) state_[jl] = VarState::AtLower;

      pivot(leave_row, jq);
      basis_[leave_row] = jq;
      state_[jq] = VarState::Basic;
      xb_[leave_row] = enter_val;
    }
  }

  void pivot(int rp, int jq) {
    const double piv = tab(rp, jq);
    const double inv = 1.0 / piv;
    for (int j = 0; j < ncols_; ++j) tab(rp, j) *= inv;
    tab(rp, jq) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == rp) continue;
      const double f = tab(i, jq);
      if (f == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) tab(i, j) -= f * tab(rp, j);
      tab(i, jq) = 0.0;
    }
    const double fd = dvec_[jq];
    if (fd != 0.0) {
      for (int j = 0; j < ncols_; ++j) dvec_[j] -= fd * tab(rp, j);
      dvec_[jq] = 0.0;
    }
  }

  // Re-derives basic values and reduced costs from the original data and the
  // final basis, erasing accumulated tableau drift.
  void refine() {
    std::vector<double> bmat(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (int k = 0; k < m_; ++k) bmat[static_cast<size_t>(i) * m_ + k] = orig(i, basis_[k]);

    std::vector<double> beff = rhs_;
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      const double v = state_[j] == VarState::AtLower ? lb_[j] : ub_[j];
      if (v == 0.0) continue;
      for (int i = 0; i < m_; ++i) beff[i] -= orig(i, j) * v;
    }
    std::vector<double> cb(m_);
    for (int k = 0; k < m_; ++k) cb[k] = cobj_[basis_[k]];

    std::vector<double> xb_new = beff, y = cb;
    if (solve_dense(bmat, xb_new, /*transpose=*/false) &&
        solve_dense(bmat, y, /*transpose=*/true)) {
      xb_ = xb_new;
      dvec_ = cobj_;
      for (int j = 0; j < ncols_; ++j) {
        double dot = 0.0;
        for (int i = 0; i < m_; ++i) dot += y[i] * orig(i, j);
        dvec_[j] -= dot;
      }
      for (int i = 0; i < m_; ++i) dvec_[basis_[i]] = 0.0;
    }
  }

  // Gaussian elimination with partial pivoting; solves B x = rhs in place.
  // Returns false when the basis matrix is numerically singular.
  bool solve_dense(std::vector<double> mat, std::vector<double>& rhs,
                   bool transpose) const {
    const int n = m_;
    if (transpose) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          std::swap(mat[static_cast<size_t>(i) * n + j],
                    mat[static_cast<size_t>(j) * n + i]);
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::abs(mat[static_cast<size_t>(perm[col]) * n + col]);
      for (int i = col + 1; i < n; ++i) {
        const double v = std::abs(mat[static_cast<size_t>(perm[i]) * n + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-13) return false;
      std::swap(perm[col], perm[piv]);
      const int pr = perm[col];
      const double pval = mat[static_cast<size_t>(pr) * n + col];
      for (int i = col + 1; i < n; ++i) {
        const int ri = perm[i];
        const double f = mat[static_cast<size_t>(ri) * n + col] / pval;
        if (f == 0.0) continue;
        for (int j = col; j < n; ++j)
          mat[static_cast<size_t>(ri) * n + j] -=
              f * mat[static_cast<size_t>(pr) * n + j];
        rhs[ri] -= f * rhs[pr];
      }
    }
    std::vector<double> x(n, 0.0);
    for (int col = n - 1; col >= 0; --col) {
      const int pr = perm[col];
      double acc = rhs[pr];
      for (int j = col + 1; j < n; ++j)
        acc -= mat[static_cast<size_t>(pr) * n + j] * x[j];
      x[col] = acc / mat[static_cast<size_t>(pr) * n + col];
    }
    rhs = x;
    return true;
  }

  void extract(LpSolution& sol) const {
    sol.status = LpStatus::Optimal;
    sol.iterations = iters_;
    sol.x.assign(d_, 0.0);
    for (int j = 0; j < d_; ++j) {
      if (state_[j] == VarState::AtLower)
        sol.x[j] = lb_[j];
      else if (state_[j] == VarState::AtUpper)
        sol.x[j] = ub_[j];
    }
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < d_) sol.x[basis_[i]] = xb_[i];

    sol.objective = 0.0;
    for (int j = 0; j < d_; ++j) sol.objective += p_.c[j] * sol.x[j];

    sol.duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double y = -dvec_[d_ + i];  // slack columns carry B^{-1}
      sol.duals[i] = flipped_[i] ? -y : y;
    }
    sol.reduced_costs.assign(dvec_.begin(), dvec_.begin() + d_);
    sol.basis.assign(m_, -1);
    for (int i = 0; i < m_; ++i)
      sol.basis[i] = basis_[i] < d_ + m_ ? basis_[i] : d_ + i;
  }
};

}  // namespace

void LpProblem::validate() const {
  if (num_vars < 0 || num_rows < 0) throw InputError("negative LP dimension");
  if (static_cast<int>(c.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars ||
      static_cast<int>(upper.size()) != num_vars)
    throw InputError("LP column vectors have inconsistent length");
  if (static_cast<int>(b.size()) != num_rows ||
      static_cast<int>(sense.size()) != num_rows ||
      a.size() != static_cast<size_t>(num_rows) * num_vars)
    throw InputError("LP row data has inconsistent length");
  for (int j = 0; j < num_vars; ++j)
    if (lower[j] > upper[j]) throw InputError("LP bounds cross (l > u)");
  for (double v : a)
    if (!std::isfinite(v)) throw InputError("LP matrix entry not finite");
  for (double v : b)
    if (!std::isfinite(v)) throw InputError("LP rhs entry not finite");
}

LpSolution lp_solve(const LpProblem& problem, double tol) {
  problem.validate();
  if (problem.num_rows == 0) {
    // Bound-only problem; each variable moves to its preferred bound.
    LpSolution sol;
    sol.x.assign(problem.num_vars, 0.0);
    sol.reduced_costs = problem.c;
    for (int j = 0; j < problem.num_vars; ++j) {
      if (problem.c[j] > 0.0) {
        if (!std::isfinite(problem.upper[j])) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.x[j] = problem.upper[j];
      } else {
        sol.x[j] = problem.lower[j];
      }
      sol.objective += problem.c[j] * sol.x[j];
    }
    return sol;
  }
  Simplex s(problem, tol);
  return s.run();
}

double lp_optimality_gap(const LpProblem& p, const LpSolution& sol) {
  if (sol.status != LpStatus::Optimal) return 0.0;
  double gap = 0.0;
  // Primal feasibility.
  for (int j = 0; j < p.num_vars; ++j) {
    gap = std::max(gap, p.lower[j] - sol.x[j]);
    if (std::isfinite(p.upper[j])) gap = std::max(gap, sol.x[j] - p.upper[j]);
  }
  std::vector<double> row_slack(p.num_rows, 0.0);
  for (int i = 0; i < p.num_rows; ++i) {
    double ax = 0.0;
    for (int j = 0; j < p.num_vars; ++j) ax += p.at(i, j) * sol.x[j];
    const double resid = p.b[i] - ax;
    row_slack[i] = resid;
    switch (p.sense[i]) {
      case LpProblem::Sense::LE:
        gap = std::max(gap, -resid);
        break;
      case LpProblem::Sense::GE:
        gap = std::max(gap, resid);
        break;
      case LpProblem::Sense::EQ:
        gap = std::max(gap, std::abs(resid));
        break;
    }
  }
  // Dual sign consistency and complementary slackness on rows.
  for (int i = 0; i < p.num_rows; ++i) {
    const double y = sol.duals[i];
    if (p.sense[i] == LpProblem::Sense::LE) gap = std::max(gap, -y);
    if (p.sense[i] == LpProblem::Sense::GE) gap = std::max(gap, y);
    if (p.sense[i] != LpProblem::Sense::EQ)
      gap = std::max(gap, std::abs(y * row_slack[i]));
  }
  // Reduced-cost consistency with variable position, and strong duality.
  double dual_obj = 0.0;
  for (int i = 0; i < p.num_rows; ++i) dual_obj += sol.duals[i] * p.b[i];
  for (int j = 0; j < p.num_vars; ++j) {
    const double dj = sol.reduced_costs[j];
    const bool at_lower = std::abs(sol.x[j] - p.lower[j]) <= 1e-7;
    const bool at_upper =
        std::isfinite(p.upper[j]) && std::abs(sol.x[j] - p.upper[j]) <= 1e-7;
    if (!at_lower && !at_upper) gap = std::max(gap, std::abs(dj));
    if (at_lower && !at_upper) gap = std::max(gap, dj);
    if (at_upper && !at_lower) gap = std::max(gap, -dj);
    dual_obj += dj * sol.x[j];
  }
  gap = std::max(gap, std::abs(sol.objective - dual_obj));
  return gap;
}

LpSolution kp_relax_solve(const std::vector<double>& utilities,
                          const std::vector<double>& weights, double W,
                          int K) {
  if (W < 0.0) throw InputError("knapsack capacity must be >= 0");
  if (K < 1) throw InputError("cardinality bound must be >= 1");
  if (utilities.size() != weights.size())
    throw InputError("utility/weight size mismatch");
  const int n = static_cast<int>(utilities.size());
  LpProblem p;
  p.num_vars = n;
  p.num_rows = 2;
  p.c = utilities;
  p.a.assign(static_cast<size_t>(2) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    p.at(0, j) = weights[j];
    p.at(1, j) = 1.0;
  }
  p.sense = {LpProblem::Sense::LE, LpProblem::Sense::LE};
  p.b = {W, static_cast<double>(K)};
  p.lower.assign(n, 0.0);
  p.upper.assign(n, 1.0);
  return lp_solve(p);
}

}  // namespace fairplan
