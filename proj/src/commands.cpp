#include "riskquad/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "riskquad/backtest.hpp"
#include "riskquad/csv.hpp"
#include "riskquad/mps.hpp"
#include "riskquad/report.hpp"
#include "riskquad/svg.hpp"
#include "riskquad/verify.hpp"

namespace riskquad {

namespace {

namespace fs = std::filesystem;

struct Loaded {
  RunConfig cfg;
  MarketData data;
};

Loaded load(const CommandOptions& opts) {
  Loaded l;
  l.cfg = load_config(opts.config_path);
  if (!opts.output_dir.empty()) l.cfg.output_dir = opts.output_dir;
  if (opts.seed != 0) l.cfg.seed = opts.seed;
  if (opts.fetch) {
    if (l.cfg.fetch_endpoint.empty())
      throw ConfigError("config: --fetch requires a data.fetch block");
    FetchOptions f;
    f.endpoint_template = l.cfg.fetch_endpoint;
    f.tickers = l.cfg.universe;
    if (l.cfg.index_ticker) f.tickers.push_back(*l.cfg.index_ticker);
    f.start = Date::parse(l.cfg.fetch_start);
    f.end = Date::parse(l.cfg.fetch_end);
    MarketData data;
    data.prices = fetch_prices(f, [](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    data.rate = load_macro_csv(l.cfg.rate_csv);
    if (!l.cfg.cpi_csv.empty()) {
      data.cpi = load_macro_csv(l.cfg.cpi_csv);
    } else {
      const bool needs_cpi =
          std::any_of(l.cfg.backtest.analysts.begin(), l.cfg.backtest.analysts.end(),
                      [](const AnalystSpec& a) {
                        return a.rule.indicator == IndicatorRule::cpi_above_median ||
                               a.rule.indicator == IndicatorRule::cpi_below_median;
                      });
      if (needs_cpi) throw ConfigError("config: cpi_csv required by a cpi_* analyst rule");
      data.cpi = data.rate;  // placeholder, never consulted
    }
    l.data = std::move(data);
  } else {
    l.data = load_market_data(l.cfg);
  }
  return l;
}

std::string file_token(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

int data_error(const std::exception& e) {
  std::cerr << "data error: " << e.what() << "\n";
  return 2;
}

}  // namespace

int cmd_optimize(const CommandOptions& opts) {
  try {
    const Loaded l = load(opts);
    const PreparedRun run = prepare_run(l.cfg.backtest, l.data);
    const PortfolioModels models = build_portfolio_models(l.cfg.backtest, run);
    fs::create_directories(l.cfg.output_dir);

    std::string summary = "portfolio,status,objective\n";
    for (std::size_t k = 0; k < models.names.size(); ++k) {
      const std::string token = file_token(models.names[k]);
      if (!models.available[k]) {
        summary += models.names[k] + ",infeasible,\n";
        continue;
      }
      const LpModel& model = models.models[k];
      write_text_file((fs::path(l.cfg.output_dir) / ("model_" + token + ".mps")).string(),
                      export_lp_file(model));
      const LpSolution sol = solve(model);
      if (sol.status != LpStatus::optimal) {
        summary += models.names[k] + "," +
                   (sol.status == LpStatus::infeasible
                        ? "infeasible"
                        : sol.status == LpStatus::unbounded ? "unbounded" : "failure") +
                   ",\n";
        continue;
      }
      summary += models.names[k] + ",optimal," + format_double(sol.objective) + "\n";
      std::string weights = "ticker,weight\n";
      for (std::size_t j = 0; j < run.assets.size(); ++j) {
        if (run.assets.size() >= 2 && sol.x[j] >= 1.0 - 1e-9)
          std::cerr << "warning: " << models.names[k] << " puts " << run.assets[j]
                    << " at the upper bound 1\n";
        weights += run.assets[j] + "," + format_double(sol.x[j]) + "\n";
      }
      write_text_file((fs::path(l.cfg.output_dir) / ("weights_" + token + ".csv")).string(),
                      weights);
    }
    write_text_file((fs::path(l.cfg.output_dir) / "solutions.csv").string(), summary);
    return 0;
  } catch (const std::exception& e) {
    return data_error(e);
  }
}

int cmd_backtest(const CommandOptions& opts) {
  try {
    const Loaded l = load(opts);
    const BacktestReport rep = run_backtest(l.cfg.backtest, l.data);
    fs::create_directories(l.cfg.output_dir);
    write_text_file((fs::path(l.cfg.output_dir) / "report.csv").string(), backtest_csv(rep));
    write_text_file((fs::path(l.cfg.output_dir) / "report.json").string(), backtest_json(rep));
    if (!opts.no_chart)
      write_text_file((fs::path(l.cfg.output_dir) / "daily_returns.svg").string(),
                      daily_return_chart(rep));
    return 0;
  } catch (const std::exception& e) {
    return data_error(e);
  }
}

int cmd_sensitivity(const CommandOptions& opts) {
  try {
    const Loaded l = load(opts);
    const auto reports = sensitivity_grid(l.cfg.backtest, l.cfg.grid, l.data);
    fs::create_directories(l.cfg.output_dir);
    write_text_file((fs::path(l.cfg.output_dir) / "sensitivity.csv").string(),
                    sensitivity_csv(reports));
    write_text_file((fs::path(l.cfg.output_dir) / "sensitivity.json").string(),
                    sensitivity_json(reports));
    return 0;
  } catch (const std::exception& e) {
    return data_error(e);
  }
}

int cmd_export_lp(const CommandOptions& opts) {
  try {
    const Loaded l = load(opts);
    const PreparedRun run = prepare_run(l.cfg.backtest, l.data);
    const PortfolioModels models = build_portfolio_models(l.cfg.backtest, run);
    fs::create_directories(l.cfg.output_dir);
    for (std::size_t k = 0; k < models.names.size(); ++k) {
      if (!models.available[k]) {
        std::cerr << "skipping " << models.names[k] << ": " << models.errors[k] << "\n";
        continue;
      }
      write_text_file(
          (fs::path(l.cfg.output_dir) / ("model_" + file_token(models.names[k]) + ".mps"))
              .string(),
          export_lp_file(models.models[k]));
    }
    return 0;
  } catch (const std::exception& e) {
    return data_error(e);
  }
}

int cmd_verify(std::uint64_t seed, std::size_t trials) {
  if (trials < 1) {
    std::cerr << "usage error: trials must be >= 1\n";
    return 2;
  }
  const VerifyResult result = run_verification(functional_zoo(), trials, seed);
  std::cout << result.text;
  std::cout << (result.ok ? "VERIFY OK\n" : "VERIFY FAILED\n");
  return result.ok ? 0 : 1;
}

}  // namespace riskquad
