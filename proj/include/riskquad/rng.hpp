#ifndef RISKQUAD_RNG_HPP
#define RISKQUAD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace riskquad {

/// Seeded generator with portable derived distributions.  std::mt19937_64 is
/// bit-reproducible across platforms; the uniform/gauss transforms below avoid
/// the implementation-defined std distributions so that seeded runs byte-match
/// everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  /// Standard normal via Box-Muller (one value per call; the mate is cached).
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Random point in the interior of the probability simplex.
  std::vector<double> simplex_point(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& wi : w) {
      wi = -std::log(1.0 - uniform());  // Exp(1)
      total += wi;
    }
    for (auto& wi : w) wi /= total;
    return w;
  }

  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace riskquad

#endif
