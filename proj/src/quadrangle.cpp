#include "riskquad/quadrangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskquad {

namespace {

void require_aligned(std::size_t samples, std::size_t weights, const char* what) {
  if (samples != weights)
    throw std::invalid_argument(std::string(what) + ": samples and weights differ in length");
}

std::vector<double> shifted(const std::vector<double>& x, double delta) {
  std::vector<double> out = x;
  for (double& v : out) v -= delta;
  return out;
}

}  // namespace

double weighted_expectation(const std::vector<LossSample>& samples, const WeightVector& mu) {
  require_aligned(samples.size(), mu.size(), "weighted_expectation");
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += expectation(samples[i]) * mu[i];
  return s;
}

std::vector<double> offsets_b(const std::vector<double>& statistics, const WeightVector& mu) {
  require_aligned(statistics.size(), mu.size(), "offsets_b");
  double center = 0.0;
  for (std::size_t i = 0; i < statistics.size(); ++i) center += statistics[i] * mu[i];
  std::vector<double> b(statistics.size());
  for (std::size_t i = 0; i < statistics.size(); ++i) b[i] = statistics[i] - center;
  return b;
}

WeightedQuartet mix_quartet(const std::vector<LossSample>& samples, Level a,
                            const WeightVector& mu) {
  require_aligned(samples.size(), mu.size(), "mix_quartet");
  const std::size_t n = samples.size();

  std::vector<double> stats(n);
  for (std::size_t i = 0; i < n; ++i) stats[i] = var_alpha(samples[i], a);

  WeightedQuartet q;
  q.offsets = offsets_b(stats, mu);
  q.weighted_expectation = weighted_expectation(samples, mu);
  for (std::size_t i = 0; i < n; ++i) {
    q.statistic += stats[i] * mu[i];
    q.risk += es_alpha(samples[i], a) * mu[i];
    q.deviation += deviation_es(samples[i], a) * mu[i];
    const std::vector<double> moved = shifted(samples[i].losses(), q.offsets[i]);
    q.regret += detail::regret_es(moved, a.alpha()) * mu[i];
    q.error += detail::error_kb(moved, a.alpha()) * mu[i];
  }
  return q;
}

double shifted_regret_objective(const std::vector<LossSample>& samples, Level a,
                                const WeightVector& mu, double c) {
  require_aligned(samples.size(), mu.size(), "shifted_regret_objective");
  const std::size_t n = samples.size();
  // Statistics of the shifted samples; the offsets come out c-invariant
  // because the empirical quantile is translation-equivariant.
  std::vector<double> stats(n);
  std::vector<std::vector<double>> moved(n);
  for (std::size_t i = 0; i < n; ++i) {
    moved[i] = shifted(samples[i].losses(), c);
    stats[i] = detail::var_alpha(moved[i], a.alpha());
  }
  const std::vector<double> b = offsets_b(stats, mu);
  double regret = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : moved[i]) v -= b[i];
    regret += detail::regret_es(moved[i], a.alpha()) * mu[i];
  }
  return c + regret;
}

IdentityReport verify_identities(const std::vector<LossSample>& samples, Level a,
                                 const WeightVector& mu, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("verify_identities: tol must be positive");
  const WeightedQuartet q = mix_quartet(samples, a, mu);

  IdentityReport rep;
  rep.residual_risk_identity = std::abs(q.risk - (q.weighted_expectation + q.deviation));
  rep.residual_regret_identity = std::abs(q.regret - (q.weighted_expectation + q.error));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    for (double v : s.losses()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  lo -= 1.0;
  hi += 1.0;

  // Golden-section on the convex objective; 200 iterations shrink the bracket
  // far below any tolerance of interest.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = shifted_regret_objective(samples, a, mu, x1);
  double f2 = shifted_regret_objective(samples, a, mu, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = shifted_regret_objective(samples, a, mu, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = shifted_regret_objective(samples, a, mu, x2);
    }
  }
  rep.minimizing_c = f1 <= f2 ? x1 : x2;
  const double min_value = std::min(f1, f2);

  rep.residual_min_c = std::abs(min_value - q.risk);
  rep.residual_argmin_membership =
      shifted_regret_objective(samples, a, mu, q.statistic) - min_value;
  rep.passed = rep.residual_risk_identity <= tol && rep.residual_regret_identity <= tol &&
               rep.residual_min_c <= tol && rep.residual_argmin_membership <= tol;
  return rep;
}

}  // namespace riskquad
