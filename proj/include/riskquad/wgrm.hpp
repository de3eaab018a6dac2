#ifndef RISKQUAD_WGRM_HPP
#define RISKQUAD_WGRM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "riskquad/core.hpp"

namespace riskquad {

/// Finite candidate weight set, interpreted as the vertex list of a polytope;
/// the sup of a linear objective over the convex hull equals the max over the
/// vertices, so this representation is exact for the aggregation sup.
class WeightSet {
 public:
  WeightSet(std::vector<WeightVector> members, bool monotone_required = false);

  std::size_t size() const { return members_.size(); }
  const WeightVector& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<WeightVector>& members() const { return members_; }
  bool monotone_required() const { return monotone_required_; }

 private:
  std::vector<WeightVector> members_;
  bool monotone_required_;
};

/// Piecewise-constant density on [0,1]: value `values[k]` on
/// (breakpoints[k], breakpoints[k+1]].  Must integrate to 1 within 1e-10.
class DensityWeighting {
 public:
  static constexpr double kIntegralTol = 1e-10;

  DensityWeighting(std::vector<double> breakpoints, std::vector<double> values,
                   bool require_non_decreasing = false);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  /// Density value at an interior point t of (0,1).
  double at(double t) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Black-box aggregation functional on R^n.
using Functional = std::function<double(const std::vector<double>&)>;

struct AxiomCheck {
  std::string axiom;           // "B1", "B2", "B3", "B3'", "B4", "B6", "B6'"
  bool passed = false;
  std::size_t trials = 0;
  // First violating probe, kept replayable: the input vector(s) and the
  // residual that exceeded tolerance.  Empty when passed.
  std::vector<double> witness_x;
  std::vector<double> witness_y;
  double residual = 0.0;
};

struct AxiomReport {
  int dimension = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<AxiomCheck> checks;

  const AxiomCheck& check(const std::string& axiom) const;
  bool passed(const std::string& axiom) const { return check(axiom).passed; }
};

/// Discrete weighted aggregation ⟨mu, v⟩.  Throws on length mismatch.
double aggregate(const RiskVector& v, const WeightVector& mu);

/// sup over the vertex list of ⟨mu, sort_ascending(v)⟩.
double aggregate_sup(const RiskVector& v, const WeightSet& w);

/// Inverts a comonotonically additive functional on the monotone cone using
/// the cumulative indicator probes u_k = (0,...,0,1,...,1):
///   f(u_k) - f(u_{k-1}) recovers the weight of coordinate n-k+1.
/// Throws (diagnostic "axioms violated") when the recovered vector is not a
/// simplex point within 1e-8.
WeightVector recover_weights(const Functional& f, std::size_t n);

/// Randomized check of the B-axiom battery on f at dimension n; deterministic
/// given the seed.  Tolerance 1e-8 absolute.  The probes run on the calling
/// thread; a functional evaluated concurrently elsewhere must be safe for
/// that itself (not enforced here).
AxiomReport check_axioms(const Functional& f, std::size_t n, std::size_t trials,
                         std::uint64_t seed);

/// Uncertainty aversion probe: true iff the aggregate under the smaller
/// scenario family does not exceed the aggregate under the larger one.
bool a3_check(const RiskVector& risk_q, const WeightVector& mu_q, const RiskVector& risk_r,
              const WeightVector& mu_r);

/// Density-weighted aggregation of grid samples: sorts the samples into the
/// empirical quantile staircase on the uniform grid and integrates against nu
/// by the midpoint rule on the common refinement (exact for two staircases).
double aggregate_density(const std::vector<double>& grid_values, const DensityWeighting& nu);

}  // namespace riskquad

#endif
