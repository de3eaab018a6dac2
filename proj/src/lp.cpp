#include "riskquad/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace riskquad {

namespace {

std::string tag(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
  return buf;
}

std::string tag2(const char* prefix, std::size_t i, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%02zu_%04zu", prefix, i, k);
  return buf;
}

// Piece rows: P + scenario(2) + sample(4) + piece(1), 8 chars total.
std::string piece_tag(std::size_t i, std::size_t k, std::size_t q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "P%02zu%04zu%1zu", i, k, q);
  return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int LpModel::add_var(std::string vname, double lo, double hi, double cost) {
  var_names.push_back(std::move(vname));
  lower.push_back(lo);
  upper.push_back(hi);
  objective.push_back(cost);
  return static_cast<int>(var_names.size()) - 1;
}

void LpModel::add_row(std::string rname, std::vector<std::pair<int, double>> coeffs, Sense sense,
                      double rhs) {
  Row r;
  r.name = std::move(rname);
  r.coeffs = std::move(coeffs);
  std::stable_sort(r.coeffs.begin(), r.coeffs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  r.sense = sense;
  r.rhs = rhs;
  rows.push_back(std::move(r));
}

void LpModel::validate() const {
  const auto n = static_cast<int>(num_vars());
  if (objective.size() != num_vars() || lower.size() != num_vars() || upper.size() != num_vars())
    throw std::invalid_argument("LpModel: per-variable arrays out of sync");
  for (std::size_t j = 0; j < num_vars(); ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || !std::isfinite(objective[j]))
      throw std::invalid_argument("LpModel: bad bound/objective on " + var_names[j]);
    if (lower[j] > upper[j])
      throw std::invalid_argument("LpModel: crossed bounds on " + var_names[j]);
  }
  for (const auto& r : rows) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("LpModel: non-finite rhs in " + r.name);
    for (const auto& [col, val] : r.coeffs) {
      if (col < 0 || col >= n) throw std::invalid_argument("LpModel: column out of range in " + r.name);
      if (!std::isfinite(val))
        throw std::invalid_argument("LpModel: non-finite coefficient in " + r.name);
    }
  }
}

void PortfolioProblem::validate() const {
  const std::size_t n = returns.size();
  const std::size_t m = num_assets();
  if (n == 0 || m == 0) throw std::invalid_argument("PortfolioProblem: empty");
  if (theta.size() != n || mu.size() != n)
    throw std::invalid_argument("PortfolioProblem: scenario counts disagree");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("PortfolioProblem: alpha outside (0,1)");
  double wsum = 0.0;
  for (double w : mu) {
    if (!(w >= 0.0)) throw std::invalid_argument("PortfolioProblem: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("PortfolioProblem: weights do not sum to 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (theta[i].size() != m) throw std::invalid_argument("PortfolioProblem: theta length");
    if (returns[i].empty()) throw std::invalid_argument("PortfolioProblem: scenario without days");
    for (const auto& day : returns[i]) {
      if (day.size() != m) throw std::invalid_argument("PortfolioProblem: return row length");
      for (double r : day) {
        if (!std::isfinite(r)) throw std::invalid_argument("PortfolioProblem: non-finite return");
      }
    }
  }
}

namespace {

// Shared tail of the three builders: target-return row, budget row.
void add_portfolio_rows(LpModel& lp, const std::vector<double>& theta, double theta0,
                        LpModel::Sense target_sense, std::size_t m) {
  std::vector<std::pair<int, double>> target;
  for (std::size_t j = 0; j < m; ++j) target.emplace_back(static_cast<int>(j), theta[j]);
  lp.add_row("TARGET", std::move(target), target_sense, theta0);

  std::vector<std::pair<int, double>> budget;
  for (std::size_t j = 0; j < m; ++j) budget.emplace_back(static_cast<int>(j), 1.0);
  lp.add_row("BUDGET", std::move(budget), LpModel::Sense::eq, 1.0);
}

LpModel::Sense resolve_sense(TargetSense s, LpModel::Sense program_form) {
  switch (s) {
    case TargetSense::equality:
      return LpModel::Sense::eq;
    case TargetSense::at_least:
      return LpModel::Sense::ge;
    case TargetSense::program_default:
      break;
  }
  return program_form;
}

}  // namespace

LpModel build_manager_lp(const PortfolioProblem& p) {
  p.validate();
  const std::size_t n = p.num_scenarios();
  const std::size_t m = p.num_assets();

  LpModel lp;
  lp.name = "WESMGR";
  for (std::size_t j = 0; j < m; ++j) lp.add_var(tag("X", j + 1), 0.0, 1.0, 0.0);
  const int col_c = lp.add_var("C", -kInf, kInf, 1.0);
  std::vector<int> col_b(n);
  for (std::size_t i = 0; i < n; ++i) col_b[i] = lp.add_var(tag("B", i + 1), -kInf, kInf, 0.0);
  const double scale = 1.0 / (1.0 - p.alpha);
  std::vector<std::vector<int>> col_t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(p.returns[i].size());
    col_t[i].resize(p.returns[i].size());
    for (std::size_t k = 0; k < p.returns[i].size(); ++k)
      col_t[i][k] = lp.add_var(tag2("T", i + 1, k + 1), 0.0, kInf, scale * p.mu[i] / ti);
  }

  // t_ik >= -sum_j x_j r_jk - c - b_i, written sum_j r_jk x_j + c + b_i + t_ik >= 0.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p.returns[i].size(); ++k) {
      std::vector<std::pair<int, double>> coeffs;
      coeffs.reserve(m + 3);
      for (std::size_t j = 0; j < m; ++j)
        coeffs.emplace_back(static_cast<int>(j), p.returns[i][k][j]);
      coeffs.emplace_back(col_c, 1.0);
      coeffs.emplace_back(col_b[i], 1.0);
      coeffs.emplace_back(col_t[i][k], 1.0);
      lp.add_row(tag2("L", i + 1, k + 1), std::move(coeffs), LpModel::Sense::ge, 0.0);
    }
  }

  std::vector<std::pair<int, double>> bzero;
  for (std::size_t i = 0; i < n; ++i) bzero.emplace_back(col_b[i], p.mu[i]);
  lp.add_row("BZERO", std::move(bzero), LpModel::Sense::eq, 0.0);

  std::vector<double> theta_mgr(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) theta_mgr[j] += p.mu[i] * p.theta[i][j];
  }
  add_portfolio_rows(lp, theta_mgr, p.theta0,
                     resolve_sense(p.target_sense, LpModel::Sense::eq), m);
  return lp;
}

LpModel build_analyst_lp(const PortfolioProblem& p, std::size_t scenario) {
  p.validate();
  if (scenario >= p.num_scenarios())
    throw std::invalid_argument("build_analyst_lp: scenario index out of range");
  const std::size_t m = p.num_assets();
  const auto& days = p.returns[scenario];

  LpModel lp;
  lp.name = "WESANL";
  for (std::size_t j = 0; j < m; ++j) lp.add_var(tag("X", j + 1), 0.0, 1.0, 0.0);
  const int col_c = lp.add_var("C", -kInf, kInf, 1.0);
  const double scale = 1.0 / ((1.0 - p.alpha) * static_cast<double>(days.size()));
  std::vector<int> col_t(days.size());
  for (std::size_t k = 0; k < days.size(); ++k)
    col_t[k] = lp.add_var(tag2("T", scenario + 1, k + 1), 0.0, kInf, scale);

  for (std::size_t k = 0; k < days.size(); ++k) {
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(m + 2);
    for (std::size_t j = 0; j < m; ++j) coeffs.emplace_back(static_cast<int>(j), days[k][j]);
    coeffs.emplace_back(col_c, 1.0);
    coeffs.emplace_back(col_t[k], 1.0);
    lp.add_row(tag2("L", scenario + 1, k + 1), std::move(coeffs), LpModel::Sense::ge, 0.0);
  }

  add_portfolio_rows(lp, p.theta[scenario], p.theta0,
                     resolve_sense(p.target_sense, LpModel::Sense::ge), m);
  return lp;
}

LpModel build_generic_regret_lp(const std::vector<std::vector<AffinePiece>>& pieces,
                                const PortfolioProblem& p) {
  p.validate();
  if (pieces.size() != p.num_scenarios())
    throw std::invalid_argument("build_generic_regret_lp: one piece list per scenario required");
  for (const auto& list : pieces) {
    if (list.empty())
      throw std::invalid_argument("build_generic_regret_lp: empty piece list");
    for (const auto& piece : list) {
      if (!std::isfinite(piece.slope) || !std::isfinite(piece.intercept))
        throw std::invalid_argument("build_generic_regret_lp: non-affine piece description");
    }
  }
  const std::size_t n = p.num_scenarios();
  const std::size_t m = p.num_assets();

  LpModel lp;
  lp.name = "WESGEN";
  for (std::size_t j = 0; j < m; ++j) lp.add_var(tag("X", j + 1), 0.0, 1.0, 0.0);
  const int col_c = lp.add_var("C", -kInf, kInf, 1.0);
  std::vector<int> col_b(n);
  for (std::size_t i = 0; i < n; ++i) col_b[i] = lp.add_var(tag("B", i + 1), -kInf, kInf, 0.0);
  std::vector<std::vector<int>> col_t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(p.returns[i].size());
    col_t[i].resize(p.returns[i].size());
    for (std::size_t k = 0; k < p.returns[i].size(); ++k)
      col_t[i][k] = lp.add_var(tag2("T", i + 1, k + 1), -kInf, kInf, p.mu[i] / ti);
  }

  // t_ik >= a*(-sum_j x_j r_jk - c - b_i) + d  for every piece (a, d):
  //   t_ik + a*sum_j r_jk x_j + a*c + a*b_i >= d.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p.returns[i].size(); ++k) {
      for (std::size_t q = 0; q < pieces[i].size(); ++q) {
        const AffinePiece& piece = pieces[i][q];
        std::vector<std::pair<int, double>> coeffs;
        coeffs.reserve(m + 3);
        if (piece.slope != 0.0) {
          for (std::size_t j = 0; j < m; ++j)
            coeffs.emplace_back(static_cast<int>(j), piece.slope * p.returns[i][k][j]);
          coeffs.emplace_back(col_c, piece.slope);
          coeffs.emplace_back(col_b[i], piece.slope);
        }
        coeffs.emplace_back(col_t[i][k], 1.0);
        lp.add_row(piece_tag(i + 1, k + 1, q + 1), std::move(coeffs), LpModel::Sense::ge,
                   piece.intercept);
      }
    }
  }

  std::vector<std::pair<int, double>> bzero;
  for (std::size_t i = 0; i < n; ++i) bzero.emplace_back(col_b[i], p.mu[i]);
  lp.add_row("BZERO", std::move(bzero), LpModel::Sense::eq, 0.0);

  std::vector<double> theta_mgr(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) theta_mgr[j] += p.mu[i] * p.theta[i][j];
  }
  add_portfolio_rows(lp, theta_mgr, p.theta0,
                     resolve_sense(p.target_sense, LpModel::Sense::eq), m);
  return lp;
}

double es_of_portfolio(const std::vector<double>& x,
                       const std::vector<std::vector<double>>& returns, Level a) {
  if (returns.empty()) throw std::invalid_argument("es_of_portfolio: no return days");
  std::vector<double> losses(returns.size());
  for (std::size_t k = 0; k < returns.size(); ++k) {
    if (returns[k].size() != x.size())
      throw std::invalid_argument("es_of_portfolio: weight/return length mismatch");
    double r = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) r += x[j] * returns[k][j];
    losses[k] = -r;
  }
  return detail::es_alpha(losses, a.alpha());
}

}  // namespace riskquad
