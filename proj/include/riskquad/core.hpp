#ifndef RISKQUAD_CORE_HPP
#define RISKQUAD_CORE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace riskquad {

/// One analyst view: an identifier plus the size of its empirical sample.
struct Scenario {
  std::string id;
  std::string label;
  std::size_t sample_count = 0;
};

/// Ordered, duplicate-free family of scenarios.  The ordering is part of the
/// value: weight vectors and risk vectors are aligned to it by index.
class ScenarioSet {
 public:
  explicit ScenarioSet(std::vector<Scenario> scenarios);

  std::size_t size() const { return scenarios_.size(); }
  const Scenario& operator[](std::size_t i) const { return scenarios_[i]; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

 private:
  std::vector<Scenario> scenarios_;
};

/// Point on the probability simplex: nonnegative weights summing to 1
/// (within 1e-12).  `require_monotone` additionally asserts non-decreasing
/// components (the monotone cone intersected with the simplex).
class WeightVector {
 public:
  static constexpr double kSimplexTol = 1e-12;

  explicit WeightVector(std::vector<double> weights, bool require_monotone = false);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  bool monotone() const { return monotone_; }

 private:
  std::vector<double> w_;
  bool monotone_ = false;
};

/// Per-scenario risk evaluations; all entries finite.
class RiskVector {
 public:
  explicit RiskVector(std::vector<double> values);

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
};

/// Nonempty, finite, equally weighted empirical loss observations.
class LossSample {
 public:
  explicit LossSample(std::vector<double> losses);

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& losses() const { return x_; }

 private:
  std::vector<double> x_;
};

/// Tail level for VaR/ES, strictly inside (0,1).
class Level {
 public:
  explicit Level(double alpha);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// Stable non-decreasing rearrangement (ties keep original order).
RiskVector sort_ascending(const RiskVector& v);

double expectation(const LossSample& s);

/// Left-continuous empirical quantile: the smallest sample value q with
/// #{x <= q} / T >= alpha.
double var_alpha(const LossSample& s, Level a);

/// Expected Shortfall by the shift-minimization form
///   min_c { c + mean((x - c)_+) / (1 - alpha) },
/// scanned over the distinct sample values (the minimum is attained at one).
/// When alpha*T is an integer this equals the mean of the top (1-alpha)*T
/// losses.
double es_alpha(const LossSample& s, Level a);

/// Regret paired with ES: mean(x_+) / (1 - alpha).
double regret_es(const LossSample& s, Level a);

/// Pinball-type error: mean( alpha/(1-alpha) * x_+  +  x_- ).
double error_kb(const LossSample& s, Level a);

/// ES of the mean-centered sample.
double deviation_es(const LossSample& s, Level a);

/// The five single-scenario quantities bundled.
struct EsQuartet {
  double risk;        // es_alpha
  double deviation;   // deviation_es
  double regret;      // regret_es
  double error;       // error_kb
  double statistic;   // var_alpha
};

EsQuartet es_quartet(const LossSample& s, Level a);

namespace detail {
// Span-based kernels shared by the higher modules; preconditions are the
// callers' responsibility here.
double mean(std::span<const double> x);
double var_alpha(std::span<const double> x, double alpha);
double es_alpha(std::span<const double> x, double alpha);
double regret_es(std::span<const double> x, double alpha);
double error_kb(std::span<const double> x, double alpha);
}  // namespace detail

}  // namespace riskquad

#endif
