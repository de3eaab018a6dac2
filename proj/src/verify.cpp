#include "riskquad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskquad/csv.hpp"
#include "riskquad/quadrangle.hpp"
#include "riskquad/rng.hpp"

namespace riskquad {

namespace {

const char* kAxioms[] = {"B1", "B2", "B3", "B3'", "B4", "B6", "B6'"};

std::map<std::string, bool> all_pass() {
  std::map<std::string, bool> m;
  for (const char* a : kAxioms) m[a] = true;
  return m;
}

Functional weighted_mean(std::vector<double> mu) {
  return [mu = std::move(mu)](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += mu[i] * v[i];
    return s;
  };
}

}  // namespace

std::vector<ZooEntry> functional_zoo() {
  std::vector<ZooEntry> zoo;

  {
    ZooEntry e;
    e.name = "linear (equal weights)";
    e.dimension = 4;
    e.functional = weighted_mean({0.25, 0.25, 0.25, 0.25});
    e.expected = all_pass();
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e;
    e.name = "linear (weights 0.2/0.3/0.5)";
    e.dimension = 3;
    e.functional = weighted_mean({0.2, 0.3, 0.5});
    e.expected = all_pass();
    e.expected["B4"] = false;  // order-sensitive weights
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e;
    e.name = "max component";
    e.dimension = 3;
    e.functional = [](const std::vector<double>& v) {
      return *std::max_element(v.begin(), v.end());
    };
    e.expected = all_pass();
    e.expected["B6'"] = false;  // additive only on comonotone pairs
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e;
    e.name = "first coordinate";
    e.dimension = 3;
    e.functional = [](const std::vector<double>& v) { return v.front(); };
    e.expected = all_pass();
    e.expected["B4"] = false;
    zoo.push_back(std::move(e));
  }
  {
    // Sup over two monotone weight vertices, neither of which dominates the
    // other on the sorted cone, so the sup is a genuine max of two spectrals.
    ZooEntry e;
    e.name = "sup over weight set";
    e.dimension = 3;
    std::vector<WeightVector> members;
    members.emplace_back(std::vector<double>{0.1, 0.2, 0.7}, true);
    members.emplace_back(std::vector<double>{0.0, 0.5, 0.5}, true);
    const WeightSet w(members, true);
    e.functional = [w](const std::vector<double>& v) {
      return aggregate_sup(RiskVector(v), w);
    };
    e.expected = all_pass();
    e.expected["B6"] = false;   // different vertices attain on comonotone pairs
    e.expected["B6'"] = false;
    zoo.push_back(std::move(e));
  }
  return zoo;
}

VerifyResult run_verification(const std::vector<ZooEntry>& zoo, std::size_t trials,
                              std::uint64_t seed) {
  std::ostringstream out;
  bool ok = true;

  out << "== axiom catalog (" << trials << " trials per axiom, seed " << seed << ") ==\n";
  for (const auto& entry : zoo) {
    const AxiomReport rep = check_axioms(entry.functional, entry.dimension, trials, seed);
    out << entry.name << " (n=" << entry.dimension << "):";
    for (const char* ax : kAxioms) {
      const bool passed = rep.passed(ax);
      const auto it = entry.expected.find(ax);
      const bool expected = it != entry.expected.end() && it->second;
      const bool match = passed == expected;
      ok = ok && match;
      out << "  " << ax << (passed ? "+" : "-") << (match ? "" : "(MISMATCH)");
    }
    out << "\n";
    for (const char* ax : kAxioms) {
      const AxiomCheck& c = rep.check(ax);
      if (!c.passed && !c.witness_x.empty()) {
        out << "    " << ax << " counterexample: x=(";
        for (std::size_t i = 0; i < c.witness_x.size(); ++i)
          out << (i ? "," : "") << format_double(c.witness_x[i]);
        out << ") y=(";
        for (std::size_t i = 0; i < c.witness_y.size(); ++i)
          out << (i ? "," : "") << format_double(c.witness_y[i]);
        out << ") residual " << format_double(c.residual) << "\n";
      }
    }
  }

  out << "== weight recovery round-trips ==\n";
  {
    Rng rng(seed ^ 0xfeedface12345678ull);
    std::size_t checked = 0, failed = 0;
    double worst = 0.0;
    for (std::size_t n = 2; n <= 8; ++n) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto mu = rng.simplex_point(n);
        const auto rec = recover_weights(weighted_mean(mu), n).weights();
        for (std::size_t i = 0; i < n; ++i) {
          worst = std::max(worst, std::abs(rec[i] - mu[i]));
          if (std::abs(rec[i] - mu[i]) > 1e-12) ++failed;
        }
        ++checked;
      }
    }
    ok = ok && failed == 0;
    out << checked << " vectors over n=2..8, worst coordinate error " << format_double(worst)
        << (failed == 0 ? " (pass)" : " (FAIL)") << "\n";
  }

  out << "== quadrangle identities on random instances ==\n";
  {
    Rng rng(seed ^ 0x5ca1ab1edeadbeefull);
    std::size_t failed = 0;
    double worst = 0.0;
    const int instances = 50;
    for (int trial = 0; trial < instances; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
      std::vector<LossSample> samples;
      for (std::size_t i = 0; i < n; ++i)
        samples.emplace_back(
            rng.uniform_vector(static_cast<std::size_t>(rng.uniform_int(2, 30)), -4, 4));
      const auto rep = verify_identities(samples, Level(rng.uniform(0.1, 0.9)),
                                         WeightVector(rng.simplex_point(n)), 1e-6);
      worst = std::max({worst, rep.residual_risk_identity, rep.residual_regret_identity,
                        rep.residual_min_c, rep.residual_argmin_membership});
      if (!rep.passed) ++failed;
    }
    ok = ok && failed == 0;
    out << instances << " instances, worst residual " << format_double(worst)
        << (failed == 0 ? " (pass)" : " (FAIL)") << "\n";
  }

  out << "== uncertainty aversion counterexample ==\n";
  {
    // Adding a milder scenario pulls the weighted aggregate down, so the
    // nested-family monotonicity fails by construction.
    const RiskVector small({5.0});
    const WeightVector mu_small({1.0});
    const RiskVector large({5.0, 1.0});
    const WeightVector mu_large({0.5, 0.5});
    const double before = aggregate(small, mu_small);
    const double after = aggregate(large, mu_large);
    const bool violated = !a3_check(small, mu_small, large, mu_large);
    ok = ok && violated;
    out << "family {P1}: aggregate " << format_double(before) << "; family {P1,P2}: aggregate "
        << format_double(after) << " -> uncertainty aversion "
        << (violated ? "violated as expected (pass)" : "unexpectedly satisfied (FAIL)") << "\n";
  }

  VerifyResult result;
  result.ok = ok;
  result.text = out.str();
  return result;
}

}  // namespace riskquad
