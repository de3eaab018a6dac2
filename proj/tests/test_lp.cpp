#include <cmath>
#include <limits>

#include "doctest.h"
#include "riskquad/lp.hpp"
#include "riskquad/rng.hpp"

using namespace riskquad;

namespace {

PortfolioProblem random_problem(Rng& rng, std::size_t n, std::size_t m, int max_t) {
  PortfolioProblem p;
  p.alpha = rng.uniform(0.5, 0.95);
  p.mu = rng.simplex_point(n);
  p.returns.resize(n);
  p.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = static_cast<std::size_t>(rng.uniform_int(2, max_t));
    p.returns[i].resize(t);
    for (auto& day : p.returns[i]) day = rng.uniform_vector(m, -0.05, 0.05);
    p.theta[i].resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (const auto& day : p.returns[i]) s += day[j];
      p.theta[i][j] = s / static_cast<double>(t);
    }
  }
  // an attainable target: the mean of the manager thetas
  double tbar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) tbar += p.mu[i] * p.theta[i][j];
  }
  p.theta0 = tbar / static_cast<double>(m);
  return p;
}

// Brute force for the inner shift problem at fixed weights: per scenario,
// scan every sample value as the combined shift and keep the best objective.
double decoupled_oracle(const PortfolioProblem& p, const std::vector<double>& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.num_scenarios(); ++i) {
    std::vector<double> loss(p.returns[i].size());
    for (std::size_t k = 0; k < loss.size(); ++k) {
      double r = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) r += x[j] * p.returns[i][k][j];
      loss[k] = -r;
    }
    double best = std::numeric_limits<double>::infinity();
    for (double d : loss) {
      double acc = 0.0;
      for (double v : loss) acc += std::max(v - d, 0.0);
      best = std::min(best, d + acc / ((1.0 - p.alpha) * static_cast<double>(loss.size())));
    }
    total += p.mu[i] * best;
  }
  return total;
}

}  // namespace

TEST_CASE("manager LP basics") {
  SUBCASE("single asset, single scenario equals the ES of its loss series") {
    PortfolioProblem p;
    p.alpha = 2.0 / 3.0;
    p.mu = {1.0};
    p.returns = {{{0.01}, {-0.02}, {0.03}}};
    p.theta = {{0.02 / 3.0}};
    p.theta0 = p.theta[0][0];
    const auto sol = solve(build_manager_lp(p));
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(sol.x[0] == doctest::Approx(1.0));
  }

  SUBCASE("unattainable equality target is infeasible") {
    Rng rng(401);
    PortfolioProblem p = random_problem(rng, 2, 3, 10);
    double worst = -1.0;
    for (std::size_t i = 0; i < p.num_scenarios(); ++i) {
      for (std::size_t j = 0; j < p.num_assets(); ++j) worst = std::max(worst, p.theta[i][j]);
    }
    p.theta0 = worst + 1.0;  // beyond any convex combination
    p.target_sense = TargetSense::equality;
    CHECK(solve(build_manager_lp(p)).status == LpStatus::infeasible);
  }

  SUBCASE("variable and row ordering is the documented one") {
    Rng rng(402);
    const PortfolioProblem p = random_problem(rng, 2, 2, 3);
    const auto lp = build_manager_lp(p);
    REQUIRE(lp.var_names.size() >= 5);
    CHECK(lp.var_names[0] == "X0001");
    CHECK(lp.var_names[1] == "X0002");
    CHECK(lp.var_names[2] == "C");
    CHECK(lp.var_names[3] == "B0001");
    CHECK(lp.var_names[4] == "B0002");
    CHECK(lp.var_names[5].substr(0, 1) == "T");
    CHECK(lp.rows.back().name == "BUDGET");
    CHECK(lp.rows[lp.rows.size() - 2].name == "TARGET");
    CHECK(lp.rows[lp.rows.size() - 3].name == "BZERO");
  }
}

TEST_CASE("analyst LP") {
  Rng rng(411);
  PortfolioProblem p = random_problem(rng, 2, 1, 12);
  // single-asset programs force x=1, so the target must clear both scenarios
  p.theta0 = std::min(p.theta[0][0], p.theta[1][0]) - 0.001;

  SUBCASE("single asset objective is the ES of that scenario's losses") {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto sol = solve(build_analyst_lp(p, i));
      REQUIRE(sol.status == LpStatus::optimal);
      CHECK(sol.objective ==
            doctest::Approx(es_of_portfolio({1.0}, p.returns[i], Level(p.alpha))).epsilon(1e-9));
    }
  }

  SUBCASE("objective is non-decreasing in alpha") {
    PortfolioProblem q = p;
    q.alpha = 0.6;
    const double lo = solve(build_analyst_lp(q, 0)).objective;
    q.alpha = 0.9;
    const double hi = solve(build_analyst_lp(q, 0)).objective;
    CHECK(hi >= lo - 1e-10);
  }

  SUBCASE("invalid scenario index") {
    CHECK_THROWS(build_analyst_lp(p, 5));
  }

  SUBCASE("unattainable target is infeasible") {
    PortfolioProblem q = p;
    q.theta0 = 1.0;  // daily returns live in [-0.05, 0.05]
    CHECK(solve(build_analyst_lp(q, 0)).status == LpStatus::infeasible);
  }

  SUBCASE("n=1 manager model matches the analyst model apart from the b machinery") {
    Rng rng2(412);
    PortfolioProblem q = random_problem(rng2, 1, 3, 8);
    q.target_sense = TargetSense::at_least;  // same sense on both programs
    const auto mgr = build_manager_lp(q);
    const auto anl = build_analyst_lp(q, 0);
    // same variables except the manager's single b column
    REQUIRE(mgr.var_names.size() == anl.var_names.size() + 1);
    CHECK(mgr.var_names[4] == "B0001");  // after X0001..X0003 and C
    // identical optima: mu = (1) forces b_1 = 0
    const auto sm = solve(mgr);
    const auto sa = solve(anl);
    REQUIRE(sm.status == LpStatus::optimal);
    REQUIRE(sa.status == LpStatus::optimal);
    CHECK(sm.objective == doctest::Approx(sa.objective).epsilon(1e-9));
    // the manager has exactly one extra row (BZERO) and it pins b to zero
    REQUIRE(mgr.rows.size() == anl.rows.size() + 1);
  }
}

TEST_CASE("RU equivalence and weighted decoupling on random instances") {
  Rng rng(421);

  SUBCASE("n=1: LP optimum equals es_of_portfolio at the optimal weights") {
    for (int trial = 0; trial < 30; ++trial) {
      const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
      PortfolioProblem p = random_problem(rng, 1, m, 25);
      p.target_sense = TargetSense::at_least;
      const auto sol = solve(build_manager_lp(p));
      REQUIRE(sol.status == LpStatus::optimal);
      std::vector<double> x(sol.x.begin(), sol.x.begin() + static_cast<long>(m));
      CHECK(sol.objective ==
            doctest::Approx(es_of_portfolio(x, p.returns[0], Level(p.alpha))).epsilon(1e-7));
    }
  }

  SUBCASE("general n: optimum equals the weighted per-scenario ES at x*") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
      const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
      PortfolioProblem p = random_problem(rng, n, m, 15);
      p.target_sense = TargetSense::at_least;
      const auto sol = solve(build_manager_lp(p));
      REQUIRE(sol.status == LpStatus::optimal);
      std::vector<double> x(sol.x.begin(), sol.x.begin() + static_cast<long>(m));
      double weighted = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        weighted += p.mu[i] * es_of_portfolio(x, p.returns[i], Level(p.alpha));
      CHECK(sol.objective == doctest::Approx(weighted).epsilon(1e-6));
      CHECK(sol.objective == doctest::Approx(decoupled_oracle(p, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("program-level monotonicity and homogeneity") {
  Rng rng(431);
  for (int trial = 0; trial < 12; ++trial) {
    PortfolioProblem p = random_problem(rng, 2, 3, 12);

    p.target_sense = TargetSense::equality;
    const auto eq = solve(build_manager_lp(p));
    p.target_sense = TargetSense::at_least;
    const auto ge = solve(build_manager_lp(p));
    if (eq.status == LpStatus::optimal) {
      REQUIRE(ge.status == LpStatus::optimal);
      CHECK(ge.objective <= eq.objective + 1e-8);
    }

    PortfolioProblem relaxed = p;
    relaxed.theta0 = p.theta0 - 0.01;
    const auto rel = solve(build_manager_lp(relaxed));
    if (ge.status == LpStatus::optimal) {
      REQUIRE(rel.status == LpStatus::optimal);
      CHECK(rel.objective <= ge.objective + 1e-8);
    }

    // positive homogeneity: scale returns, thetas and target together
    const double a = rng.uniform(0.5, 3.0);
    PortfolioProblem scaled = p;
    for (auto& scen : scaled.returns) {
      for (auto& day : scen) {
        for (double& r : day) r *= a;
      }
    }
    for (auto& th : scaled.theta) {
      for (double& v : th) v *= a;
    }
    scaled.theta0 *= a;
    const auto s0 = solve(build_manager_lp(p));
    const auto s1 = solve(build_manager_lp(scaled));
    REQUIRE(s0.status == LpStatus::optimal);
    REQUIRE(s1.status == LpStatus::optimal);
    CHECK(s1.objective == doctest::Approx(a * s0.objective).epsilon(1e-7));
  }
}

TEST_CASE("generic regret epigraph builder") {
  Rng rng(441);

  SUBCASE("ES pieces reproduce the manager optimum") {
    PortfolioProblem p = random_problem(rng, 2, 2, 10);
    p.target_sense = TargetSense::at_least;
    const double scale = 1.0 / (1.0 - p.alpha);
    std::vector<std::vector<AffinePiece>> pieces(2, {{0.0, 0.0}, {scale, 0.0}});
    const auto generic = solve(build_generic_regret_lp(pieces, p));
    const auto manager = solve(build_manager_lp(p));
    REQUIRE(generic.status == LpStatus::optimal);
    REQUIRE(manager.status == LpStatus::optimal);
    CHECK(generic.objective == doctest::Approx(manager.objective).epsilon(1e-7));
  }

  SUBCASE("single linear piece: the shift cancels and the optimum is the weighted mean loss") {
    PortfolioProblem p = random_problem(rng, 2, 2, 8);
    p.target_sense = TargetSense::at_least;
    std::vector<std::vector<AffinePiece>> pieces(2, {{1.0, 0.0}});
    const auto sol = solve(build_generic_regret_lp(pieces, p));
    REQUIRE(sol.status == LpStatus::optimal);
    // Closed form: picking x from the optimal point, objective must equal
    // sum_i mu_i * mean_k(loss_ik(x)) regardless of c.
    double expect = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      double mean = 0.0;
      for (const auto& day : p.returns[i]) {
        double r = 0.0;
        for (std::size_t j = 0; j < 2; ++j) r += sol.x[j] * day[j];
        mean += -r;
      }
      expect += p.mu[i] * mean / static_cast<double>(p.returns[i].size());
    }
    CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-7));
  }

  SUBCASE("all-zero pieces leave c unbounded below") {
    PortfolioProblem p = random_problem(rng, 2, 2, 6);
    std::vector<std::vector<AffinePiece>> pieces(2, {{0.0, 0.0}});
    CHECK(solve(build_generic_regret_lp(pieces, p)).status == LpStatus::unbounded);
  }

  SUBCASE("non-finite piece descriptions are rejected") {
    PortfolioProblem p = random_problem(rng, 1, 2, 5);
    std::vector<std::vector<AffinePiece>> pieces(
        1, {{std::numeric_limits<double>::quiet_NaN(), 0.0}});
    CHECK_THROWS(build_generic_regret_lp(pieces, p));
    CHECK_THROWS(build_generic_regret_lp({}, p));
  }
}

TEST_CASE("degenerate data: one-day scenarios and zero-variance assets") {
  PortfolioProblem p;
  p.alpha = 0.75;
  p.mu = {0.5, 0.5};
  // scenario 1 has a single day; asset 2 never moves
  p.returns = {{{0.02, 0.0}}, {{-0.01, 0.0}, {0.03, 0.0}}};
  p.theta = {{0.02, 0.0}, {0.01, 0.0}};
  p.theta0 = 0.0;
  p.target_sense = TargetSense::at_least;
  const auto lp = build_manager_lp(p);
  // one t variable for scenario 1, two for scenario 2
  CHECK(lp.num_vars() == 2 + 1 + 2 + 3);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  std::vector<double> x{sol.x[0], sol.x[1]};
  double weighted = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    weighted += p.mu[i] * es_of_portfolio(x, p.returns[i], Level(p.alpha));
  CHECK(sol.objective == doctest::Approx(weighted).epsilon(1e-9));
}

TEST_CASE("es_of_portfolio") {
  const std::vector<std::vector<double>> returns{{0.01, -0.02}, {-0.03, 0.01}, {0.02, 0.0}};
  SUBCASE("unit vector selects a single asset") {
    std::vector<double> loss;
    for (const auto& day : returns) loss.push_back(-day[1]);
    CHECK(es_of_portfolio({0.0, 1.0}, returns, Level(0.5)) ==
          doctest::Approx(detail::es_alpha(loss, 0.5)));
  }
  SUBCASE("identical assets make weights irrelevant") {
    const std::vector<std::vector<double>> same{{0.01, 0.01}, {-0.02, -0.02}};
    CHECK(es_of_portfolio({0.5, 0.5}, same, Level(0.5)) ==
          doctest::Approx(es_of_portfolio({1.0, 0.0}, same, Level(0.5))));
  }
  SUBCASE("length mismatch throws") {
    CHECK_THROWS(es_of_portfolio({1.0}, returns, Level(0.5)));
  }
}
