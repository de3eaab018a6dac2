#ifndef RISKQUAD_LP_HPP
#define RISKQUAD_LP_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "riskquad/core.hpp"

namespace riskquad {

/// Deterministic sparse minimization LP.  Variable and row ordering is part
/// of the value; builders emit x_1..x_m, c, b_1..b_n, then t_{ik} grouped by
/// scenario then time.
struct LpModel {
  enum class Sense { le, eq, ge };

  struct Row {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;  // (column, value), column-sorted
    Sense sense = Sense::eq;
    double rhs = 0.0;

    bool operator==(const Row&) const = default;
  };

  std::string name = "RISKQUAD";
  std::vector<std::string> var_names;
  std::vector<double> objective;  // one per variable
  std::vector<double> lower;      // -inf allowed
  std::vector<double> upper;      // +inf allowed
  std::vector<Row> rows;

  std::size_t num_vars() const { return var_names.size(); }

  int add_var(std::string vname, double lo, double hi, double cost);
  void add_row(std::string rname, std::vector<std::pair<int, double>> coeffs, Sense sense,
               double rhs);
  void validate() const;  // throws on inconsistent sizes or non-finite coefficients

  bool operator==(const LpModel&) const = default;
};

enum class LpStatus { optimal, infeasible, unbounded, failure };

struct LpSolution {
  LpStatus status = LpStatus::failure;
  double objective = 0.0;
  std::vector<double> x;
  double max_primal_residual = 0.0;
  int iterations = 0;
  std::string diagnostics;
};

/// Deterministic bounded-variable simplex (two-phase, dense basis inverse,
/// Dantzig pricing with a Bland fallback against cycling).  Same model in,
/// same solution out.
LpSolution solve(const LpModel& model, double tol = 1e-8);

/// How the target-return row is written.  `program_default` keeps each
/// program's customary form: equality for the aggregated problem, at-least
/// for a single-analyst problem.
enum class TargetSense { program_default, equality, at_least };

/// Data for the weighted-ES portfolio programs.  Scenario i carries its own
/// selected history: returns[i] is T_i x m (day-major), theta[i] the
/// scenario's expected-return estimates.
struct PortfolioProblem {
  std::vector<std::vector<std::vector<double>>> returns;  // [scenario][day][asset]
  std::vector<std::vector<double>> theta;                 // [scenario][asset]
  double theta0 = 0.0;
  double alpha = 0.95;
  std::vector<double> mu;  // simplex weights over scenarios
  TargetSense target_sense = TargetSense::program_default;

  std::size_t num_assets() const { return theta.empty() ? 0 : theta.front().size(); }
  std::size_t num_scenarios() const { return returns.size(); }
  void validate() const;
};

/// The weighted-ES epigraph LP over all scenarios:
///   min  c + (1/(1-alpha)) sum_i mu_i (1/T_i) sum_k t_ik
///   s.t. t_ik >= -sum_j x_j r_jk - c - b_i,  t_ik >= 0
///        sum_i mu_i b_i = 0
///        sum_j x_j theta_j {=,>=} theta0   with theta_j = sum_i mu_i theta^i_j
///        sum_j x_j = 1,  0 <= x_j <= 1,  c and b free.
LpModel build_manager_lp(const PortfolioProblem& p);

/// Single-scenario version: no b variables, target row uses theta^i.
LpModel build_analyst_lp(const PortfolioProblem& p, std::size_t scenario);

/// One linear piece phi(y) = slope*y + intercept of a regret's sup-of-affine
/// representation.
struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const AffinePiece&) const = default;
};

/// Generic epigraph reformulation: every scenario's piece list is instantiated
/// at each of its sample days (aux variable t_ik, free), bounded below by each
/// piece applied to the day's loss shifted by c and b_i.  Objective averages
/// the aux variables with the empirical 1/T_i weights under mu.
/// Pieces {0, y/(1-alpha)} reproduce build_manager_lp's optimum.
LpModel build_generic_regret_lp(const std::vector<std::vector<AffinePiece>>& pieces,
                                const PortfolioProblem& p);

/// ES of the portfolio loss series -sum_j x_j r_jk.
double es_of_portfolio(const std::vector<double>& x,
                       const std::vector<std::vector<double>>& returns, Level a);

}  // namespace riskquad

#endif
