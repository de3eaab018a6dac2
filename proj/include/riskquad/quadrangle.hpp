#ifndef RISKQUAD_QUADRANGLE_HPP
#define RISKQUAD_QUADRANGLE_HPP

#include <vector>

#include "riskquad/core.hpp"

namespace riskquad {

/// Multi-scenario quartet.  risk/deviation/statistic are the mu-weighted sums
/// of the per-scenario quantities; regret/error are evaluated at the
/// closed-form offsets b_i = S_i - S_Q, which satisfy sum(b_i mu_i) = 0 and
/// attain the quadrangle minimum jointly with the shift c = S_Q.
struct WeightedQuartet {
  double risk = 0.0;                 // R_Q
  double deviation = 0.0;            // D_Q
  double regret = 0.0;               // V_Q
  double error = 0.0;                // E_Q
  double statistic = 0.0;            // S_Q
  std::vector<double> offsets;       // b, one per scenario
  double weighted_expectation = 0.0; // E_Q[X]
};

double weighted_expectation(const std::vector<LossSample>& samples, const WeightVector& mu);

/// Centers per-scenario statistics by their mu-weighted mean:
/// b_i = S_i - sum_j S_j mu_j, so sum_i b_i mu_i = 0 up to rounding.
std::vector<double> offsets_b(const std::vector<double>& statistics, const WeightVector& mu);

WeightedQuartet mix_quartet(const std::vector<LossSample>& samples, Level a,
                            const WeightVector& mu);

/// Residuals of the quadrangle relations on one instance:
///   linear:   R_Q = E_Q[X] + D_Q  and  V_Q = E_Q[X] + E_Q
///   variational: min_c { c + V_Q(X - c) } = R_Q with the offsets re-solved
///   from the shifted statistics at every c (golden-section over
///   [min sample - 1, max sample + 1]), and S_Q a member of the argmin set.
struct IdentityReport {
  double residual_risk_identity = 0.0;      // |R - (E[X] + D)|
  double residual_regret_identity = 0.0;    // |V - (E[X] + E)|
  double residual_min_c = 0.0;              // |min_c objective - R|
  double residual_argmin_membership = 0.0;  // objective(S_Q) - min_c objective
  double minimizing_c = 0.0;
  bool passed = false;
};

IdentityReport verify_identities(const std::vector<LossSample>& samples, Level a,
                                 const WeightVector& mu, double tol);

/// The objective c + V_Q(X - c) with the offsets re-solved from the shifted
/// per-scenario statistics; exposed for the variational tests.
double shifted_regret_objective(const std::vector<LossSample>& samples, Level a,
                                const WeightVector& mu, double c);

}  // namespace riskquad

#endif
