#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskquad/lp.hpp"

// Two-phase bounded-variable simplex with a dense explicit basis inverse.
// Columns are the structural variables, then one slack per row (encoding the
// row sense through its bounds), then one artificial per row (phase 1 only).
// Pricing is Dantzig with smallest-index tie-breaks; a stall switches the
// whole method to Bland's rule, which cannot cycle.  Everything is ordered
// and deterministic: the same model bytes produce the same solution bytes.

namespace riskquad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;

enum class VarState : unsigned char { basic, at_lower, at_upper, free_at_zero };

struct SparseCol {
  std::vector<int> row;
  std::vector<double> val;
};

struct Tableau {
  int nrows = 0;
  int ncols = 0;  // structural + slack + artificial
  int nstruct = 0;
  std::vector<SparseCol> cols;
  std::vector<double> lower, upper, cost, phase1_cost;
  std::vector<double> rhs;

  std::vector<int> basic;          // row -> column
  std::vector<VarState> state;     // column -> state
  std::vector<double> value;       // column -> current value
  std::vector<double> binv;        // dense nrows x nrows, row-major

  double& bi(int r, int c) { return binv[static_cast<std::size_t>(r) * nrows + c]; }
  double bi(int r, int c) const { return binv[static_cast<std::size_t>(r) * nrows + c]; }
};

double start_value(double lo, double hi) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(hi)) return hi;
  return 0.0;
}

VarState start_state(double lo, double hi) {
  if (std::isfinite(lo)) return VarState::at_lower;
  if (std::isfinite(hi)) return VarState::at_upper;
  return VarState::free_at_zero;
}

// x_B = B^{-1} (rhs - N x_N); recomputed at refactorization points.
void recompute_basics(Tableau& t) {
  std::vector<double> resid = t.rhs;
  for (int j = 0; j < t.ncols; ++j) {
    if (t.state[j] == VarState::basic || t.value[j] == 0.0) continue;
    const auto& col = t.cols[j];
    for (std::size_t k = 0; k < col.row.size(); ++k) resid[col.row[k]] -= col.val[k] * t.value[j];
  }
  for (int r = 0; r < t.nrows; ++r) {
    double v = 0.0;
    for (int c = 0; c < t.nrows; ++c) v += t.bi(r, c) * resid[c];
    t.value[t.basic[r]] = v;
  }
}

// Rebuild the dense inverse of the current basis by Gauss-Jordan with partial
// pivoting.  Returns false on a numerically singular basis.
bool refactorize(Tableau& t) {
  const int n = t.nrows;
  std::vector<double> bmat(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    const auto& col = t.cols[t.basic[r]];
    for (std::size_t k = 0; k < col.row.size(); ++k)
      bmat[static_cast<std::size_t>(col.row[k]) * n + r] = col.val[k];
  }
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;

  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(bmat[static_cast<std::size_t>(c) * n + c]);
    for (int r = c + 1; r < n; ++r) {
      const double cand = std::abs(bmat[static_cast<std::size_t>(r) * n + c]);
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best < 1e-12) return false;
    if (piv != c) {
      for (int k = 0; k < n; ++k) {
        std::swap(bmat[static_cast<std::size_t>(piv) * n + k], bmat[static_cast<std::size_t>(c) * n + k]);
        std::swap(inv[static_cast<std::size_t>(piv) * n + k], inv[static_cast<std::size_t>(c) * n + k]);
      }
    }
    const double d = 1.0 / bmat[static_cast<std::size_t>(c) * n + c];
    for (int k = 0; k < n; ++k) {
      bmat[static_cast<std::size_t>(c) * n + k] *= d;
      inv[static_cast<std::size_t>(c) * n + k] *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = bmat[static_cast<std::size_t>(r) * n + c];
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        bmat[static_cast<std::size_t>(r) * n + k] -= f * bmat[static_cast<std::size_t>(c) * n + k];
        inv[static_cast<std::size_t>(r) * n + k] -= f * inv[static_cast<std::size_t>(c) * n + k];
      }
    }
  }
  t.binv = std::move(inv);
  recompute_basics(t);
  return true;
}

enum class IterResult { step, optimal, unbounded, singular };

IterResult iterate(Tableau& t, const std::vector<double>& cost, bool bland) {
  const int n = t.nrows;

  // Duals y = c_B B^{-1}.
  std::vector<double> y(n, 0.0);
  for (int r = 0; r < n; ++r) {
    const double cb = cost[t.basic[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < n; ++c) y[c] += cb * t.bi(r, c);
  }

  // Price: entering column with the most violating reduced cost (Dantzig) or
  // the first violating index (Bland).
  int enter = -1;
  int direction = 0;  // +1 increase, -1 decrease
  double best_violation = 1e-9;
  for (int j = 0; j < t.ncols; ++j) {
    const VarState s = t.state[j];
    if (s == VarState::basic) continue;
    if (t.lower[j] == t.upper[j] && s != VarState::free_at_zero) continue;  // fixed
    const auto& col = t.cols[j];
    double d = cost[j];
    for (std::size_t k = 0; k < col.row.size(); ++k) d -= y[col.row[k]] * col.val[k];

    int dir = 0;
    double viol = 0.0;
    if (s == VarState::at_lower && d < -1e-9) {
      dir = 1;
      viol = -d;
    } else if (s == VarState::at_upper && d > 1e-9) {
      dir = -1;
      viol = d;
    } else if (s == VarState::free_at_zero && std::abs(d) > 1e-9) {
      dir = d < 0.0 ? 1 : -1;
      viol = std::abs(d);
    }
    if (dir == 0) continue;
    if (bland) {
      enter = j;
      direction = dir;
      break;
    }
    if (viol > best_violation) {
      best_violation = viol;
      enter = j;
      direction = dir;
    }
  }
  if (enter < 0) return IterResult::optimal;

  // w = B^{-1} A_enter.
  std::vector<double> w(n, 0.0);
  {
    const auto& col = t.cols[enter];
    for (std::size_t k = 0; k < col.row.size(); ++k) {
      const double v = col.val[k];
      const int rr = col.row[k];
      for (int r = 0; r < n; ++r) w[r] += t.bi(r, rr) * v;
    }
  }

  // Ratio test.  The entering variable moves by step >= 0 in `direction`;
  // basic variable r changes at rate -direction * w[r].
  double limit = kInf;
  int leave_row = -1;     // -1 with finite limit means a bound flip
  double leave_bound = 0.0;
  if (std::isfinite(t.lower[enter]) && std::isfinite(t.upper[enter]))
    limit = t.upper[enter] - t.lower[enter];

  for (int r = 0; r < n; ++r) {
    const double rate = -static_cast<double>(direction) * w[r];
    if (std::abs(rate) <= kPivotTol) continue;
    const int bcol = t.basic[r];
    const double xv = t.value[bcol];
    double cand = kInf, bound = 0.0;
    if (rate < 0.0) {
      if (std::isfinite(t.lower[bcol])) {
        cand = (t.lower[bcol] - xv) / rate;
        bound = t.lower[bcol];
      }
    } else {
      if (std::isfinite(t.upper[bcol])) {
        cand = (t.upper[bcol] - xv) / rate;
        bound = t.upper[bcol];
      }
    }
    if (cand == kInf) continue;
    cand = std::max(cand, 0.0);
    const bool tie =
        std::isfinite(limit) && std::abs(cand - limit) <= 1e-10 * (1.0 + std::abs(limit));
    bool take = cand < limit && !tie;
    if (tie && leave_row >= 0) {
      // Deterministic tie-break: larger pivot magnitude, then smaller column.
      const double cur = std::abs(w[leave_row]);
      if (bland) {
        take = t.basic[r] < t.basic[leave_row];
      } else {
        take = std::abs(w[r]) > cur + 1e-12 ||
               (std::abs(std::abs(w[r]) - cur) <= 1e-12 && t.basic[r] < t.basic[leave_row]);
      }
    } else if (tie && leave_row < 0 && cand <= limit) {
      take = true;  // prefer a pivot over a bound flip at equal step
    }
    if (take) {
      limit = std::min(cand, limit);
      leave_row = r;
      leave_bound = bound;
    }
  }

  if (limit == kInf) return IterResult::unbounded;

  // Move everything by `limit` along the edge.
  for (int r = 0; r < n; ++r) {
    const double rate = -static_cast<double>(direction) * w[r];
    if (rate == 0.0) continue;
    t.value[t.basic[r]] += rate * limit;
  }
  t.value[enter] += static_cast<double>(direction) * limit;

  if (leave_row < 0) {
    // Bound flip; basis unchanged.
    t.state[enter] = direction > 0 ? VarState::at_upper : VarState::at_lower;
    t.value[enter] = direction > 0 ? t.upper[enter] : t.lower[enter];
    return IterResult::step;
  }

  const int leave_col = t.basic[leave_row];
  if (std::abs(w[leave_row]) <= kPivotTol) return IterResult::singular;

  t.value[leave_col] = leave_bound;
  t.state[leave_col] = (std::isfinite(t.lower[leave_col]) && leave_bound == t.lower[leave_col])
                           ? VarState::at_lower
                           : VarState::at_upper;
  t.state[enter] = VarState::basic;
  t.basic[leave_row] = enter;

  // Product-form update of the dense inverse.
  const double piv = w[leave_row];
  double* prow = &t.bi(leave_row, 0);
  for (int c = 0; c < n; ++c) prow[c] /= piv;
  for (int r = 0; r < n; ++r) {
    if (r == leave_row) continue;
    const double f = w[r];
    if (f == 0.0) continue;
    double* row = &t.bi(r, 0);
    for (int c = 0; c < n; ++c) row[c] -= f * prow[c];
  }
  return IterResult::step;
}

double objective_of(const Tableau& t, const std::vector<double>& cost) {
  double z = 0.0;
  for (int j = 0; j < t.ncols; ++j) {
    if (cost[j] != 0.0) z += cost[j] * t.value[j];
  }
  return z;
}

// Runs one simplex phase.  Returns optimal/unbounded/failure-ish via status.
enum class PhaseStatus { optimal, unbounded, failure };

PhaseStatus run_phase(Tableau& t, const std::vector<double>& cost, int max_iter, int& iters,
                      std::string& diag) {
  bool bland = false;
  int stall = 0;
  double best = kInf;
  int since_refactor = 0;
  for (; iters < max_iter; ++iters) {
    const IterResult res = iterate(t, cost, bland);
    if (res == IterResult::optimal) return PhaseStatus::optimal;
    if (res == IterResult::unbounded) return PhaseStatus::unbounded;
    if (res == IterResult::singular) {
      if (!refactorize(t)) {
        diag = "singular basis after pivot rejection";
        return PhaseStatus::failure;
      }
      continue;
    }
    if (++since_refactor >= 64) {
      since_refactor = 0;
      if (!refactorize(t)) {
        diag = "singular basis at refactorization";
        return PhaseStatus::failure;
      }
    }
    const double z = objective_of(t, cost);
    if (z < best - 1e-12 * (1.0 + std::abs(best))) {
      best = z;
      stall = 0;
    } else if (++stall >= 400 && !bland) {
      bland = true;  // anti-cycling fallback
      stall = 0;
    }
  }
  diag = "iteration limit reached";
  return PhaseStatus::failure;
}

}  // namespace

LpSolution solve(const LpModel& model, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  model.validate();

  LpSolution sol;
  const int nstruct = static_cast<int>(model.num_vars());
  const int nrows = static_cast<int>(model.rows.size());

  Tableau t;
  t.nrows = nrows;
  t.nstruct = nstruct;
  t.ncols = nstruct + 2 * nrows;
  t.cols.resize(t.ncols);
  t.lower.assign(t.ncols, 0.0);
  t.upper.assign(t.ncols, 0.0);
  t.cost.assign(t.ncols, 0.0);
  t.phase1_cost.assign(t.ncols, 0.0);
  t.rhs.resize(nrows);

  for (int j = 0; j < nstruct; ++j) {
    t.lower[j] = model.lower[j];
    t.upper[j] = model.upper[j];
    t.cost[j] = model.objective[j];
  }
  for (int r = 0; r < nrows; ++r) {
    const auto& row = model.rows[r];
    t.rhs[r] = row.rhs;
    for (const auto& [col, val] : row.coeffs) {
      t.cols[col].row.push_back(r);
      t.cols[col].val.push_back(val);
    }
    const int slack = nstruct + r;
    t.cols[slack].row.push_back(r);
    t.cols[slack].val.push_back(1.0);
    switch (row.sense) {
      case LpModel::Sense::le:
        t.lower[slack] = 0.0;
        t.upper[slack] = kInf;
        break;
      case LpModel::Sense::eq:
        t.lower[slack] = 0.0;
        t.upper[slack] = 0.0;
        break;
      case LpModel::Sense::ge:
        t.lower[slack] = -kInf;
        t.upper[slack] = 0.0;
        break;
    }
  }

  // Nonbasic start for structurals and slacks, artificial basis carrying the
  // residuals.
  t.state.assign(t.ncols, VarState::at_lower);
  t.value.assign(t.ncols, 0.0);
  std::vector<double> resid = t.rhs;
  for (int j = 0; j < nstruct + nrows; ++j) {
    t.state[j] = start_state(t.lower[j], t.upper[j]);
    t.value[j] = start_value(t.lower[j], t.upper[j]);
    if (t.value[j] != 0.0) {
      const auto& col = t.cols[j];
      for (std::size_t k = 0; k < col.row.size(); ++k) resid[col.row[k]] -= col.val[k] * t.value[j];
    }
  }
  t.basic.resize(nrows);
  for (int r = 0; r < nrows; ++r) {
    const int art = nstruct + nrows + r;
    t.cols[art].row.push_back(r);
    t.cols[art].val.push_back(1.0);
    if (resid[r] >= 0.0) {
      t.lower[art] = 0.0;
      t.upper[art] = kInf;
      t.phase1_cost[art] = 1.0;
    } else {
      t.lower[art] = -kInf;
      t.upper[art] = 0.0;
      t.phase1_cost[art] = -1.0;
    }
    t.basic[r] = art;
    t.state[art] = VarState::basic;
    t.value[art] = resid[r];
  }
  t.binv.assign(static_cast<std::size_t>(nrows) * nrows, 0.0);
  for (int r = 0; r < nrows; ++r) t.bi(r, r) = 1.0;

  double scale = 1.0;
  for (int r = 0; r < nrows; ++r) scale = std::max(scale, std::abs(t.rhs[r]));
  const double feas_tol = tol * scale;
  const int max_iter = 20000 + 200 * (nrows + nstruct);
  int iters = 0;
  std::string diag;

  // Phase 1: drive sum |artificial| to zero.
  const PhaseStatus p1 = run_phase(t, t.phase1_cost, max_iter, iters, diag);
  sol.iterations = iters;
  if (p1 == PhaseStatus::failure) {
    sol.status = LpStatus::failure;
    sol.diagnostics = "phase 1: " + diag;
    return sol;
  }
  if (p1 == PhaseStatus::unbounded) {
    sol.status = LpStatus::failure;
    sol.diagnostics = "phase 1 reported unbounded (should be impossible)";
    return sol;
  }
  if (objective_of(t, t.phase1_cost) > feas_tol) {
    sol.status = LpStatus::infeasible;
    sol.diagnostics = "phase 1 infeasibility " + std::to_string(objective_of(t, t.phase1_cost));
    return sol;
  }

  // Phase 2: pin artificials to zero, restore the real objective.
  for (int r = 0; r < nrows; ++r) {
    const int art = nstruct + nrows + r;
    t.lower[art] = 0.0;
    t.upper[art] = 0.0;
    if (t.state[art] != VarState::basic) {
      t.state[art] = VarState::at_lower;
      t.value[art] = 0.0;
    }
  }
  if (!refactorize(t)) {
    sol.status = LpStatus::failure;
    sol.diagnostics = "singular basis entering phase 2";
    return sol;
  }
  const PhaseStatus p2 = run_phase(t, t.cost, max_iter, iters, diag);
  sol.iterations = iters;
  if (p2 == PhaseStatus::failure) {
    sol.status = LpStatus::failure;
    sol.diagnostics = "phase 2: " + diag;
    return sol;
  }
  if (p2 == PhaseStatus::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.x.assign(t.value.begin(), t.value.begin() + nstruct);
  double z = 0.0;
  for (int j = 0; j < nstruct; ++j) z += model.objective[j] * sol.x[j];
  sol.objective = z;

  // Primal residuals against the original rows and bounds.
  double worst = 0.0;
  for (int r = 0; r < nrows; ++r) {
    const auto& row = model.rows[r];
    double lhs = 0.0;
    for (const auto& [col, val] : row.coeffs) lhs += val * sol.x[col];
    switch (row.sense) {
      case LpModel::Sense::le:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case LpModel::Sense::eq:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
      case LpModel::Sense::ge:
        worst = std::max(worst, row.rhs - lhs);
        break;
    }
  }
  for (int j = 0; j < nstruct; ++j) {
    if (std::isfinite(model.lower[j])) worst = std::max(worst, model.lower[j] - sol.x[j]);
    if (std::isfinite(model.upper[j])) worst = std::max(worst, sol.x[j] - model.upper[j]);
  }
  sol.max_primal_residual = worst;
  if (worst > feas_tol * 10.0) {
    sol.status = LpStatus::failure;
    sol.diagnostics = "optimal basis violates feasibility tolerance: residual " +
                      std::to_string(worst);
  }
  return sol;
}

}  // namespace riskquad
