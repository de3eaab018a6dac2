#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "riskquad/csv.hpp"
#include "riskquad/data.hpp"
#include "riskquad/rng.hpp"

using namespace riskquad;

namespace {

PriceTable small_prices() {
  PriceTable p;
  p.dates = {Date::parse("2024-01-02"), Date::parse("2024-01-03"), Date::parse("2024-01-04")};
  p.tickers = {"AAA", "BBB"};
  p.prices = {{100.0, 50.0}, {90.0, 55.0}, {99.0, 55.0}};
  return p;
}

MacroSeries series(std::initializer_list<std::pair<const char*, double>> obs) {
  MacroSeries m;
  for (const auto& [d, v] : obs) {
    m.dates.push_back(Date::parse(d));
    m.values.push_back(v);
  }
  return m;
}

}  // namespace

TEST_CASE("date parsing and arithmetic") {
  const Date d = Date::parse("2025-02-01");
  CHECK(d.to_string() == "2025-02-01");
  CHECK(d.year() == 2025);
  CHECK(d.month() == 2);
  CHECK(d.day() == 1);
  CHECK(d.plus_days(28).to_string() == "2025-03-01");
  CHECK(Date::parse("2024-02-28").plus_days(1).to_string() == "2024-02-29");  // leap year
  CHECK(Date::parse("2024-01-05") < Date::parse("2024-01-06"));
  CHECK_THROWS(Date::parse("2024/01/05"));
  CHECK_THROWS(Date::parse("2024-13-05"));
  CHECK_THROWS(Date::parse("not-a-date"));
}

TEST_CASE("compute_returns") {
  SUBCASE("two dates give the simple return") {
    PriceTable p;
    p.dates = {Date::parse("2024-01-02"), Date::parse("2024-01-03")};
    p.tickers = {"AAA"};
    p.prices = {{100.0}, {110.0}};
    const ReturnTable r = compute_returns(p);
    REQUIRE(r.num_days() == 1);
    CHECK(r.returns[0][0] == doctest::Approx(0.10));
  }
  SUBCASE("constant prices give zero returns") {
    PriceTable p;
    p.dates = {Date::parse("2024-01-02"), Date::parse("2024-01-03"), Date::parse("2024-01-04")};
    p.tickers = {"AAA"};
    p.prices = {{42.0}, {42.0}, {42.0}};
    for (const auto& row : compute_returns(p).returns) CHECK(row[0] == doctest::Approx(0.0));
  }
  SUBCASE("hand-computed sequence") {
    const ReturnTable r = compute_returns(small_prices());
    CHECK(r.returns[0][0] == doctest::Approx(-0.10));
    CHECK(r.returns[1][0] == doctest::Approx(0.10));
  }
  SUBCASE("compounding reconstructs the price ratio") {
    Rng rng(601);
    PriceTable p;
    p.tickers = {"AAA"};
    double price = 100.0;
    for (int d = 0; d < 60; ++d) {
      p.dates.push_back(Date::parse("2024-01-01").plus_days(d));
      p.prices.push_back({price});
      price *= 1.0 + rng.uniform(-0.04, 0.04);
    }
    const ReturnTable r = compute_returns(p);
    double acc = 1.0;
    for (const auto& row : r.returns) acc *= 1.0 + row[0];
    CHECK(acc == doctest::Approx(p.prices.back()[0] / p.prices.front()[0]).epsilon(1e-12));
  }
  SUBCASE("nonpositive prices are rejected") {
    PriceTable p = small_prices();
    p.prices[1][0] = -1.0;
    CHECK_THROWS(compute_returns(p));
  }
}

TEST_CASE("select_periods median masks") {
  const std::vector<Date> window = {Date::parse("2024-01-01"), Date::parse("2024-01-02"),
                                    Date::parse("2024-01-03"), Date::parse("2024-01-04")};
  const MacroSeries m = series({{"2024-01-01", 1.0}, {"2024-01-02", 2.0},
                                {"2024-01-03", 3.0}, {"2024-01-04", 4.0}});

  SUBCASE("above-median uses the lower middle value") {
    const auto mask = select_periods(m, {IndicatorRule::rate_above_median, {}}, window);
    CHECK(mask == std::vector<bool>{false, false, true, true});
  }
  SUBCASE("all-equal values leave above empty and below full") {
    const MacroSeries flat = series({{"2024-01-01", 2.0}});
    const auto above = select_periods(flat, {IndicatorRule::rate_above_median, {}}, window);
    const auto below = select_periods(flat, {IndicatorRule::rate_below_median, {}}, window);
    CHECK(above == std::vector<bool>{false, false, false, false});
    CHECK(below == std::vector<bool>{true, true, true, true});
  }
  SUBCASE("custom mask passes through verbatim") {
    AnalystRule rule{IndicatorRule::custom_mask, {true, false, true, false}};
    CHECK(select_periods(m, rule, window) == rule.custom_mask);
    rule.custom_mask.pop_back();
    CHECK_THROWS(select_periods(m, rule, window));
  }
  SUBCASE("above and below partition all days") {
    Rng rng(611);
    for (int trial = 0; trial < 50; ++trial) {
      MacroSeries noisy;
      std::vector<Date> dates;
      for (int d = 0; d < 20; ++d) {
        dates.push_back(Date::parse("2024-02-01").plus_days(d));
        noisy.dates.push_back(dates.back());
        noisy.values.push_back(std::round(rng.uniform(0, 6)));  // force ties
      }
      const auto above = select_periods(noisy, {IndicatorRule::rate_above_median, {}}, dates);
      const auto below = select_periods(noisy, {IndicatorRule::rate_below_median, {}}, dates);
      for (std::size_t d = 0; d < dates.size(); ++d) {
        CHECK((above[d] || below[d]));
        CHECK_FALSE((above[d] && below[d]));
      }
    }
  }
  SUBCASE("macro series must cover the window start") {
    const MacroSeries late = series({{"2024-01-03", 1.0}});
    CHECK_THROWS(select_periods(late, {IndicatorRule::rate_above_median, {}}, window));
  }
  SUBCASE("forward-fill picks the latest prior observation") {
    const MacroSeries sparse = series({{"2023-12-29", 5.0}, {"2024-01-03", 1.0}});
    const auto mask = select_periods(sparse, {IndicatorRule::rate_above_median, {}}, window);
    // values on window: 5,5,1,1; lower-middle median = 1; above -> 5s only
    CHECK(mask == std::vector<bool>{true, true, false, false});
  }
}

TEST_CASE("yoy_change") {
  MacroSeries m;
  // monthly observations over two years, level doubling each year
  for (int k = 0; k < 24; ++k) {
    m.dates.push_back(Date::parse("2023-01-31").plus_days(k * 30));
    m.values.push_back(100.0 * std::pow(2.0, k / 12.0));
  }
  const MacroSeries yoy = m.yoy_change();
  REQUIRE(!yoy.dates.empty());
  // the 30-day cadence makes the lagged lookup span 13 observations:
  // ratio 2^(13/12), i.e. a YoY change near +111.6%, for every date
  for (double v : yoy.values) CHECK(v == doctest::Approx(std::pow(2.0, 13.0 / 12.0) - 1.0));
  CHECK(yoy.dates.front().serial() >= m.dates.front().plus_days(365).serial());
}

TEST_CASE("estimate_theta and manager_theta") {
  const ReturnTable r = compute_returns(small_prices());

  SUBCASE("all-true mask gives column means") {
    const auto theta = estimate_theta(r, {true, true});
    CHECK(theta[0] == doctest::Approx((-0.10 + 0.10) / 2.0));
  }
  SUBCASE("single day selects that day") {
    const auto theta = estimate_theta(r, {false, true});
    CHECK(theta[0] == doctest::Approx(0.10));
    CHECK(theta[1] == doctest::Approx(0.0));
  }
  SUBCASE("documented example") {
    ReturnTable t;
    t.tickers = {"A"};
    t.dates = {Date::parse("2024-01-02"), Date::parse("2024-01-03"), Date::parse("2024-01-04")};
    t.returns = {{0.1}, {-0.1}, {0.3}};
    CHECK(estimate_theta(t, {true, false, true})[0] == doctest::Approx(0.2));
  }
  SUBCASE("empty selection throws") {
    CHECK_THROWS(estimate_theta(r, {false, false}));
  }
  SUBCASE("permutation invariance over selected days") {
    ReturnTable t;
    t.tickers = {"A"};
    Rng rng(621);
    for (int d = 0; d < 10; ++d) {
      t.dates.push_back(Date::parse("2024-03-01").plus_days(d));
      t.returns.push_back({rng.uniform(-0.05, 0.05)});
    }
    const std::vector<bool> mask{true, false, true, true, false, true, false, false, true, true};
    const auto base = estimate_theta(t, mask);
    ReturnTable shuffled = t;
    std::swap(shuffled.returns[0], shuffled.returns[3]);  // both selected
    CHECK(estimate_theta(shuffled, mask)[0] == doctest::Approx(base[0]).epsilon(1e-15));
  }

  SUBCASE("manager_theta combines and stays inside the envelope") {
    const std::vector<std::vector<double>> thetas{{0.0, 1.0}, {0.2, 6.0}};
    const auto even = manager_theta(thetas, {0.5, 0.5});
    CHECK(even[0] == doctest::Approx(0.1));
    CHECK(even[1] == doctest::Approx(3.5));
    const auto vertex = manager_theta(thetas, {0.0, 1.0});
    CHECK(vertex[0] == doctest::Approx(0.2));
    const auto mix = manager_theta({{1.0, 2.0}, {3.0, 6.0}}, {0.25, 0.75});
    CHECK(mix[0] == doctest::Approx(2.5));
    CHECK(mix[1] == doctest::Approx(5.0));
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(even[j] >= std::min(thetas[0][j], thetas[1][j]) - 1e-15);
      CHECK(even[j] <= std::max(thetas[0][j], thetas[1][j]) + 1e-15);
    }
    CHECK_THROWS(manager_theta(thetas, {1.0}));
  }
}

TEST_CASE("price CSV parsing and cleaning") {
  SUBCASE("well-formed wide CSV") {
    const auto p = parse_price_csv("date,AAA,BBB\n2024-01-02,100,50\n2024-01-03,101,51\n");
    CHECK(p.num_days() == 2);
    CHECK(p.tickers == std::vector<std::string>{"AAA", "BBB"});
    CHECK(p.prices[1][1] == doctest::Approx(51.0));
  }
  SUBCASE("interior gaps forward-fill") {
    // one missing day out of 21 is within the 5% drop threshold
    std::string csv = "date,AAA\n";
    for (int d = 0; d < 21; ++d) {
      csv += Date::parse("2024-01-01").plus_days(d).to_string() + "," +
             (d == 7 ? "" : std::to_string(100 + d)) + "\n";
    }
    const auto p = parse_price_csv(csv);
    CHECK(p.prices[7][0] == doctest::Approx(106.0));  // carried from day 6
    CHECK(p.prices[8][0] == doctest::Approx(108.0));
  }
  SUBCASE("a mostly-missing ticker is dropped") {
    std::string csv = "date,AAA,BBB\n";
    for (int d = 0; d < 40; ++d) {
      csv += Date::parse("2024-01-01").plus_days(d).to_string() + ",100,";
      csv += (d < 3 ? "50" : "");  // BBB missing from day 3 on
      csv += "\n";
    }
    std::vector<std::string> warnings;
    PriceTable raw;
    raw.tickers = {"AAA", "BBB"};
    // go through the cleaning entry point to capture the warning
    const auto table = parse_csv(csv);
    raw.dates.clear();
    raw.prices.clear();
    for (const auto& row : table.rows) {
      raw.dates.push_back(Date::parse(row[0]));
      std::vector<double> cells{std::stod(row[1]),
                                row[2].empty() ? std::nan("") : std::stod(row[2])};
      raw.prices.push_back(std::move(cells));
    }
    const auto cleaned = clean_price_table(std::move(raw), 0.05,
                                           [&](const std::string& w) { warnings.push_back(w); });
    CHECK(cleaned.tickers == std::vector<std::string>{"AAA"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("BBB") != std::string::npos);
  }
  SUBCASE("malformed inputs") {
    CHECK_THROWS(parse_price_csv("ticker,AAA\nx,1\n"));
    CHECK_THROWS(parse_price_csv("date,AAA\n2024-01-02,abc\n"));
    CHECK_THROWS(parse_price_csv("date,AAA\n2024-01-02,100\n2024-01-02,101\n"));  // dup date
    CHECK_THROWS(parse_price_csv(""));
  }
}

TEST_CASE("macro CSV parsing") {
  const auto m = parse_macro_csv("date,value\n2024-01-02,4.25\n2024-02-02,4.5\n");
  CHECK(m.values.size() == 2);
  CHECK(m.at(Date::parse("2024-01-15")) == doctest::Approx(4.25));
  CHECK_THROWS(m.at(Date::parse("2023-12-31")));
  CHECK_THROWS(parse_macro_csv("date,close\n2024-01-02,1\n"));
}

TEST_CASE("fetch_prices against a local server") {
  httplib::Server server;
  server.Get("/prices", [](const httplib::Request& req, httplib::Response& res) {
    const std::string ticker = req.get_param_value("ticker");
    if (ticker == "MISSING") {
      res.status = 404;
      return;
    }
    if (ticker == "BROKEN") {
      res.set_content("date,close\n2024-01-02\n", "text/csv");
      return;
    }
    if (ticker == "STALE") {  // data exists, but none inside the request range
      res.set_content("date,close\n2023-06-01,10\n2023-06-02,11\n", "text/csv");
      return;
    }
    std::string body = "date,close\n";
    const double base = ticker == "AAA" ? 100.0 : 50.0;
    for (int d = 0; d < 5; ++d) {
      body += riskquad::Date::parse("2024-01-01").plus_days(d).to_string() + "," +
              std::to_string(base + d) + "\n";
    }
    res.set_content(body, "text/csv");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  FetchOptions opts;
  opts.endpoint_template =
      "http://127.0.0.1:" + std::to_string(port) + "/prices?ticker={ticker}&start={start}&end={end}";
  opts.start = Date::parse("2024-01-01");
  opts.end = Date::parse("2024-01-05");

  SUBCASE("two tickers align on the shared calendar") {
    opts.tickers = {"AAA", "BBB"};
    const PriceTable p = fetch_prices(opts);
    CHECK(p.tickers == std::vector<std::string>{"AAA", "BBB"});
    CHECK(p.num_days() == 5);
    CHECK(p.prices[0][0] == doctest::Approx(100.0));
    CHECK(p.prices[4][1] == doctest::Approx(54.0));
  }
  SUBCASE("HTTP failure names the ticker") {
    opts.tickers = {"AAA", "MISSING"};
    CHECK_THROWS_WITH_AS(fetch_prices(opts), doctest::Contains("MISSING"), std::runtime_error);
  }
  SUBCASE("malformed CSV names the ticker") {
    opts.tickers = {"BROKEN"};
    CHECK_THROWS_WITH_AS(fetch_prices(opts), doctest::Contains("BROKEN"), std::runtime_error);
  }
  SUBCASE("a ticker with no in-range observations is dropped with a warning") {
    opts.tickers = {"AAA", "STALE"};
    std::vector<std::string> warnings;
    const PriceTable p = fetch_prices(opts, [&](const std::string& w) { warnings.push_back(w); });
    CHECK(p.tickers == std::vector<std::string>{"AAA"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("STALE") != std::string::npos);
  }

  server.stop();
  worker.join();
}
