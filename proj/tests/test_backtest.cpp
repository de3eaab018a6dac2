#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "riskquad/backtest.hpp"
#include "riskquad/config.hpp"
#include "riskquad/report.hpp"
#include "riskquad/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace riskquad;

namespace {

const std::string kFixtureDir = std::string(RISKQUAD_SOURCE_DIR) + "/data/synthetic";

RunConfig fixture_config() { return load_config(kFixtureDir + "/fixture.json"); }

MarketData fixture_data(const RunConfig& cfg) { return load_market_data(cfg); }

ReturnTable synthetic_returns(std::size_t days) {
  ReturnTable t;
  t.tickers = {"A", "B"};
  Rng rng(701);
  for (std::size_t d = 0; d < days; ++d) {
    t.dates.push_back(Date::parse("2024-01-01").plus_days(static_cast<int>(d)));
    t.returns.push_back({rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)});
  }
  return t;
}

}  // namespace

TEST_CASE("split") {
  const ReturnTable r = synthetic_returns(150);

  SUBCASE("clean partition") {
    const Date cutoff = r.dates[100];
    const auto [train, test] = split(r, cutoff, 150);
    CHECK(train.num_days() == 100);
    CHECK(test.num_days() == 50);
    CHECK(train.dates.back() < cutoff);
    CHECK(!(test.dates.front() < cutoff));
  }
  SUBCASE("window shorter than the data uses the most recent days") {
    const Date cutoff = r.dates[120];
    const auto [train, test] = split(r, cutoff, 60);
    CHECK(train.num_days() + test.num_days() == 60);
    CHECK(train.dates.front() == r.dates[90]);
  }
  SUBCASE("cutoff before the window start is an error") {
    CHECK_THROWS(split(r, r.dates[10], 60));
  }
  SUBCASE("cutoff at the first window day leaves no training data") {
    CHECK_THROWS(split(r, r.dates[90], 60));
  }
  SUBCASE("cutoff past the window end is an error") {
    CHECK_THROWS(split(r, r.dates.back().plus_days(10), 60));
  }
  SUBCASE("window larger than the data is an error") {
    CHECK_THROWS(split(r, r.dates[100], 151));
  }
  SUBCASE("a window must cover at least two days") {
    CHECK_THROWS(split(r, r.dates[100], 1));
  }
}

TEST_CASE("resolve_theta0") {
  SUBCASE("explicit value passes through") {
    Theta0Spec spec;
    spec.explicit_value = 0.00082;
    CHECK(resolve_theta0(spec, {}, {}) == 0.00082);
  }
  SUBCASE("month with cumulative 1.64% over 20 days") {
    std::vector<Date> dates;
    std::vector<double> daily(20, 0.0);
    for (int d = 0; d < 20; ++d) dates.push_back(Date::parse("2025-01-02").plus_days(d));
    daily[19] = 0.0164;  // single jump: compounded month return exactly 1.64%
    Theta0Spec spec;
    spec.month = "2025-01";
    CHECK(resolve_theta0(spec, dates, daily) == 0.0164 / 20.0);
  }
  SUBCASE("month with cumulative 3.90% over 21 days") {
    std::vector<Date> dates;
    std::vector<double> daily(21, 0.0);
    for (int d = 0; d < 21; ++d) dates.push_back(Date::parse("2025-08-01").plus_days(d));
    daily[0] = 0.039;
    Theta0Spec spec;
    spec.month = "2025-08";
    CHECK(resolve_theta0(spec, dates, daily) == 0.039 / 21.0);
  }
  SUBCASE("absent month") {
    Theta0Spec spec;
    spec.month = "2030-01";
    CHECK_THROWS(resolve_theta0(spec, {Date::parse("2025-01-02")}, {0.01}));
  }
}

TEST_CASE("sharpe") {
  SUBCASE("documented example") {
    const auto s = sharpe({0.01, -0.01, 0.02, 0.00}, 0.0);
    REQUIRE(s);
    // direct-formula oracle
    const double mean = 0.005;
    const double sd = std::sqrt((0.000025 + 0.000225 + 0.000225 + 0.000025) / 3.0);
    CHECK(*s == doctest::Approx(mean / sd * std::sqrt(252.0)));
    CHECK(*s == doctest::Approx(6.148).epsilon(1e-3));
  }
  SUBCASE("zero excess mean is about zero") {
    const double rf = 0.0365;
    const double rf_daily = rf / 252.0;
    const auto s = sharpe({rf_daily + 0.01, rf_daily - 0.01, rf_daily + 0.005, rf_daily - 0.005}, rf);
    REQUIRE(s);
    CHECK(*s == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("constant series is undefined") {
    CHECK_FALSE(sharpe({0.01, 0.01, 0.01}, 0.0));
    CHECK_FALSE(sharpe({0.01}, 0.0));
  }
}

TEST_CASE("sortino") {
  SUBCASE("no shortfall is undefined") {
    CHECK_FALSE(sortino({0.01, 0.02}, 0.0));
  }
  SUBCASE("zero excess mean gives zero") {
    const auto s = sortino({0.02, -0.02}, 0.0);
    REQUIRE(s);
    CHECK(*s == doctest::Approx(0.0));
  }
  SUBCASE("symmetric series: denominator relation to sharpe") {
    // equal-magnitude up and down moves around rf: sample stdev carries the
    // n/(n-1) factor, the full-sample downside deviation is d/sqrt(2)
    const double d = 0.01;
    const std::vector<double> daily{d, -d, d, -d, d, -d};
    const double n = 6.0;
    const auto sh = sharpe(daily, 0.0);
    const auto so = sortino(daily, 0.0);
    REQUIRE(sh);
    REQUIRE(so);
    // both are zero here (zero mean), so compare the deviations directly
    const double sd = d * std::sqrt(n / (n - 1.0));
    const double dd = d / std::sqrt(2.0);
    CHECK(sd / dd == doctest::Approx(std::sqrt(2.0 * n / (n - 1.0))));
    // a shifted copy with positive mean exposes the ratio numerically
    std::vector<double> shifted = daily;
    for (double& v : shifted) v += 0.001;
    const auto sh2 = sharpe(shifted, 0.0);
    const auto so2 = sortino(shifted, 0.0);
    REQUIRE(sh2);
    REQUIRE(so2);
    double mean = 0.001;
    double ss = 0.0, down = 0.0;
    for (double v : shifted) {
      ss += (v - mean) * (v - mean);
      down += std::min(v, 0.0) * std::min(v, 0.0);
    }
    CHECK(*sh2 == doctest::Approx(mean / std::sqrt(ss / (n - 1.0)) * std::sqrt(252.0)));
    CHECK(*so2 == doctest::Approx(mean / std::sqrt(down / n) * std::sqrt(252.0)));
  }
  SUBCASE("loss-days-only convention is selectable") {
    const std::vector<double> daily{0.02, -0.01, 0.03, -0.01};
    const auto full = sortino(daily, 0.0, 252.0, true);
    const auto partial = sortino(daily, 0.0, 252.0, false);
    REQUIRE(full);
    REQUIRE(partial);
    CHECK(*full > *partial);  // smaller averaging set -> larger denominator
  }
}

TEST_CASE("run_backtest on the bundled fixture") {
  const RunConfig cfg = fixture_config();
  const MarketData data = fixture_data(cfg);
  const BacktestReport rep = run_backtest(cfg.backtest, data);

  REQUIRE(rep.portfolios.size() == 5);  // four analysts + manager
  CHECK(rep.portfolios.back().name == "Manager");
  CHECK(rep.error.empty());

  for (const auto& p : rep.portfolios) {
    REQUIRE(p.status == LpStatus::optimal);

    // weights on the simplex within solver tolerance
    double sum = 0.0;
    for (double w : p.weights) {
      CHECK(w >= -1e-8);
      CHECK(w <= 1.0 + 1e-8);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));

    // cumulative return compounds the daily series
    double acc = 1.0;
    for (double r : p.daily) acc *= 1.0 + r;
    CHECK(p.cumulative == doctest::Approx(acc - 1.0).epsilon(1e-12));
  }

  SUBCASE("manager daily series recomputes from its own weights") {
    const auto& mgr = rep.portfolios.back();
    const PriceTable assets = data.prices.select(cfg.backtest.universe);
    const ReturnTable all = compute_returns(assets);
    const auto [train, test] = split(all, cfg.backtest.cutoff, cfg.backtest.window);
    REQUIRE(test.num_days() == mgr.daily.size());
    for (std::size_t d = 0; d < test.num_days(); ++d) {
      double r = 0.0;
      for (std::size_t j = 0; j < mgr.weights.size(); ++j)
        r += mgr.weights[j] * test.returns[d][j];
      CHECK(mgr.daily[d] == doctest::Approx(r).epsilon(1e-12));
    }
  }

  SUBCASE("degenerate aggregation: one analyst with full weight") {
    BacktestConfig solo = cfg.backtest;
    solo.analysts = {cfg.backtest.analysts[0]};
    solo.analysts[0].weight = 1.0;
    solo.manager_sense = TargetSense::at_least;  // align with the analyst form
    const BacktestReport r2 = run_backtest(solo, data);
    REQUIRE(r2.portfolios.size() == 2);
    REQUIRE(r2.portfolios[0].status == LpStatus::optimal);
    REQUIRE(r2.portfolios[1].status == LpStatus::optimal);
    CHECK(r2.portfolios[1].objective == doctest::Approx(r2.portfolios[0].objective).epsilon(1e-9));
    CHECK(r2.portfolios[1].cumulative == doctest::Approx(r2.portfolios[0].cumulative).epsilon(1e-7));
  }

  SUBCASE("infeasible target is reported per portfolio, run continues") {
    BacktestConfig hard = cfg.backtest;
    hard.theta0 = Theta0Spec{0.5, ""};  // 50% daily target
    const BacktestReport r2 = run_backtest(hard, data);
    REQUIRE(r2.portfolios.size() == 5);
    for (const auto& p : r2.portfolios) CHECK(p.status == LpStatus::infeasible);
  }
}

TEST_CASE("dominant asset concentrates every portfolio") {
  // one asset strictly dominates daily; ES optimization must go all-in
  MarketData data;
  data.prices.tickers = {"WIN", "LOSE"};
  Rng rng(711);
  double w = 100.0, l = 100.0;
  for (int d = 0; d < 80; ++d) {
    data.prices.dates.push_back(Date::parse("2024-01-01").plus_days(d));
    data.prices.prices.push_back({w, l});
    w *= 1.0 + 0.004 + rng.uniform(0.0, 0.002);
    l *= 1.0 + rng.uniform(-0.004, 0.0);
  }
  data.rate.dates = data.prices.dates;
  for (int d = 0; d < 80; ++d) data.rate.values.push_back(rng.uniform(3.0, 5.0));
  data.cpi = data.rate;

  BacktestConfig cfg;
  cfg.cutoff = data.prices.dates[60];
  cfg.window = 70;
  cfg.alpha = 0.9;
  cfg.theta0 = Theta0Spec{0.0, ""};
  cfg.analysts = {{"Rates up", {IndicatorRule::rate_above_median, {}}, 0.5},
                  {"Rates down", {IndicatorRule::rate_below_median, {}}, 0.5}};
  cfg.manager_sense = TargetSense::at_least;  // an equality target would pin the mix
  cfg.universe = {"WIN", "LOSE"};
  const BacktestReport rep = run_backtest(cfg, data);
  for (const auto& p : rep.portfolios) {
    REQUIRE(p.status == LpStatus::optimal);
    CHECK(p.weights[0] == doctest::Approx(1.0).epsilon(1e-6));
    // the degenerate one-asset optimum trips the upper-bound flag
    CHECK(p.diagnostics.find("upper bound") != std::string::npos);
  }
}

TEST_CASE("sensitivity grid") {
  const RunConfig cfg = fixture_config();
  const MarketData data = fixture_data(cfg);

  SUBCASE("empty overrides give a single base cell") {
    const auto reports = sensitivity_grid(cfg.backtest, {}, data);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].window == cfg.backtest.window);
    CHECK(reports[0].universe_tag == "base");
  }

  SUBCASE("window-only override") {
    GridOverrides o;
    o.windows = {120, 180};
    const auto reports = sensitivity_grid(cfg.backtest, o, data);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].window == 120);
    CHECK(reports[1].window == 180);
  }

  SUBCASE("three-axis grid has 27 cells per universe") {
    GridOverrides o = cfg.grid;
    o.universes.clear();
    const auto reports = sensitivity_grid(cfg.backtest, o, data);
    CHECK(reports.size() == 27);
  }

  SUBCASE("bad cells carry errors; the grid completes") {
    GridOverrides o;
    o.windows = {120, 100000};  // second cell cannot fit the data
    const auto reports = sensitivity_grid(cfg.backtest, o, data);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].error.empty());
    CHECK(!reports[1].error.empty());
  }

  SUBCASE("parallel and serial grids serialize identically") {
    GridOverrides o;
    o.windows = {120, 150};
    o.alphas = {0.9, 0.95};
    const auto par = sensitivity_grid(cfg.backtest, o, data, true);
    const auto ser = sensitivity_grid_serial(cfg.backtest, o, data);
    CHECK(sensitivity_csv(par) == sensitivity_csv(ser));
    CHECK(sensitivity_json(par) == sensitivity_json(ser));
  }
}

TEST_CASE("reports serialize deterministically") {
  const RunConfig cfg = fixture_config();
  const MarketData data = fixture_data(cfg);

  const BacktestReport a = run_backtest(cfg.backtest, data);
  const BacktestReport b = run_backtest(cfg.backtest, data);
  CHECK(backtest_csv(a) == backtest_csv(b));
  CHECK(backtest_json(a) == backtest_json(b));

  const std::string csv = backtest_csv(a);
  CHECK(csv.substr(0, csv.find('\n')) == "portfolio,two_month_return,sharpe,sortino");
  CHECK(csv.find("Manager,") != std::string::npos);
  CHECK(csv.find("Index,") != std::string::npos);

#ifdef _OPENMP
  SUBCASE("grid output is identical across thread counts") {
    GridOverrides o;
    o.alphas = {0.9, 0.95, 0.99};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = sensitivity_grid(cfg.backtest, o, data, true);
    omp_set_num_threads(4);
    const auto four = sensitivity_grid(cfg.backtest, o, data, true);
    omp_set_num_threads(saved);
    CHECK(sensitivity_csv(one) == sensitivity_csv(four));
    CHECK(sensitivity_json(one) == sensitivity_json(four));
  }
#endif
}
