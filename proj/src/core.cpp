#include "riskquad/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace riskquad {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

ScenarioSet::ScenarioSet(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
  if (scenarios_.empty()) throw std::invalid_argument("ScenarioSet: empty");
  std::unordered_set<std::string> seen;
  for (const auto& s : scenarios_) {
    if (s.sample_count < 1) throw std::invalid_argument("Scenario: sample_count must be >= 1");
    if (!seen.insert(s.id).second)
      throw std::invalid_argument("ScenarioSet: duplicate id '" + s.id + "'");
  }
}

WeightVector::WeightVector(std::vector<double> weights, bool require_monotone)
    : w_(std::move(weights)), monotone_(require_monotone) {
  if (w_.empty()) throw std::invalid_argument("WeightVector: empty");
  double sum = 0.0;
  for (double wi : w_) {
    if (!(wi >= 0.0)) throw std::invalid_argument("WeightVector: negative weight");
    sum += wi;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("WeightVector: weights sum to " + std::to_string(sum) +
                                ", not 1");
  if (monotone_) {
    for (std::size_t i = 1; i < w_.size(); ++i) {
      if (w_[i] < w_[i - 1])
        throw std::invalid_argument("WeightVector: monotone flag set but weights decrease");
    }
  }
}

RiskVector::RiskVector(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) throw std::invalid_argument("RiskVector: empty");
  require_finite(v_, "RiskVector");
}

LossSample::LossSample(std::vector<double> losses) : x_(std::move(losses)) {
  if (x_.empty()) throw std::invalid_argument("LossSample: empty");
  require_finite(x_, "LossSample");
}

Level::Level(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("Level: alpha must lie strictly in (0,1)");
}

RiskVector sort_ascending(const RiskVector& v) {
  std::vector<double> out = v.values();
  std::stable_sort(out.begin(), out.end());
  return RiskVector(std::move(out));
}

namespace detail {

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double var_alpha(std::span<const double> x, double alpha) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double t = static_cast<double>(sorted.size());
  // Guard against alpha*T landing one ulp above an integer mass point.
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (static_cast<double>(k + 1) + 1e-9 >= alpha * t) return sorted[k];
  }
  return sorted.back();
}

double es_alpha(std::span<const double> x, double alpha) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t t = sorted.size();
  // suffix[k] = sum of sorted[k..t-1]
  std::vector<double> suffix(t + 1, 0.0);
  for (std::size_t k = t; k-- > 0;) suffix[k] = suffix[k + 1] + sorted[k];
  const double inv = 1.0 / ((1.0 - alpha) * static_cast<double>(t));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t; ++k) {
    if (k > 0 && sorted[k] == sorted[k - 1]) continue;  // distinct values only
    const double c = sorted[k];
    // mean((x-c)_+) = (suffix[k+1] - (t-1-k)*c) / t; entries below index k are <= c.
    const double tail = suffix[k + 1] - static_cast<double>(t - 1 - k) * c;
    const double obj = c + tail * inv;
    if (obj < best) best = obj;
  }
  return best;
}

double regret_es(std::span<const double> x, double alpha) {
  double s = 0.0;
  for (double v : x) s += std::max(v, 0.0);
  return s / ((1.0 - alpha) * static_cast<double>(x.size()));
}

double error_kb(std::span<const double> x, double alpha) {
  const double w = alpha / (1.0 - alpha);
  double s = 0.0;
  for (double v : x) s += w * std::max(v, 0.0) + std::max(-v, 0.0);
  return s / static_cast<double>(x.size());
}

}  // namespace detail

double expectation(const LossSample& s) { return detail::mean(s.losses()); }

double var_alpha(const LossSample& s, Level a) {
  return detail::var_alpha(s.losses(), a.alpha());
}

double es_alpha(const LossSample& s, Level a) {
  return detail::es_alpha(s.losses(), a.alpha());
}

double regret_es(const LossSample& s, Level a) {
  return detail::regret_es(s.losses(), a.alpha());
}

double error_kb(const LossSample& s, Level a) {
  return detail::error_kb(s.losses(), a.alpha());
}

double deviation_es(const LossSample& s, Level a) {
  const double m = expectation(s);
  std::vector<double> centered = s.losses();
  for (double& v : centered) v -= m;
  return detail::es_alpha(centered, a.alpha());
}

EsQuartet es_quartet(const LossSample& s, Level a) {
  return EsQuartet{es_alpha(s, a), deviation_es(s, a), regret_es(s, a), error_kb(s, a),
                   var_alpha(s, a)};
}

}  // namespace riskquad
