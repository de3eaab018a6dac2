#ifndef RISKQUAD_BACKTEST_HPP
#define RISKQUAD_BACKTEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "riskquad/data.hpp"
#include "riskquad/lp.hpp"

namespace riskquad {

/// Target return: either an explicit daily value or "average daily return of
/// month YYYY-MM", i.e. the index's cumulative return over that month divided
/// by its trading-day count.
struct Theta0Spec {
  std::optional<double> explicit_value;
  std::string month;  // "YYYY-MM" when explicit_value is absent
};

struct AnalystSpec {
  std::string label;
  AnalystRule rule;
  double weight = 0.0;
};

struct BacktestConfig {
  Date cutoff;
  std::size_t window = 150;  // total trading days, training + test
  double alpha = 0.95;
  Theta0Spec theta0;
  double theta0_scale = 1.0;
  double rf_annual = 0.0365;
  std::vector<AnalystSpec> analysts;
  TargetSense manager_sense = TargetSense::program_default;
  TargetSense analyst_sense = TargetSense::program_default;
  double annualization_days = 252.0;
  bool sortino_full_sample = true;  // average squared shortfall over all days
  std::vector<std::string> universe;
  std::optional<std::string> index_ticker;
};

struct MarketData {
  PriceTable prices;
  MacroSeries rate;
  MacroSeries cpi;
};

struct PortfolioResult {
  std::string name;
  LpStatus status = LpStatus::failure;
  std::string diagnostics;
  std::vector<double> weights;
  double objective = 0.0;
  std::vector<double> daily;  // test-period returns
  double cumulative = 0.0;
  std::optional<double> sharpe;
  std::optional<double> sortino;
};

struct BacktestReport {
  // cell tags (echoed into grid outputs)
  std::size_t window = 0;
  double alpha = 0.0;
  double theta0 = 0.0;
  double theta0_scale = 1.0;
  std::string universe_tag;

  std::vector<Date> test_dates;
  std::vector<PortfolioResult> portfolios;  // analysts in config order, then the manager
  std::vector<double> index_daily;
  double index_cumulative = 0.0;
  std::string error;  // whole-cell failure (grid cells only)
};

/// Train/test partition of the last `window` trading days: training strictly
/// before the cutoff, test on or after it.  Throws when either side is empty
/// or the cutoff misses the window.
std::pair<ReturnTable, ReturnTable> split(const ReturnTable& r, const Date& cutoff,
                                          std::size_t window);

/// See Theta0Spec.  `index_dates`/`index_daily` is the reference daily series.
double resolve_theta0(const Theta0Spec& spec, const std::vector<Date>& index_dates,
                      const std::vector<double>& index_daily);

/// Annualized Sharpe: (mean - rf/ann) / sample stdev * sqrt(ann).
/// Undefined (nullopt) for fewer than two observations or zero deviation.
std::optional<double> sharpe(const std::vector<double>& daily, double rf_annual,
                             double annualization_days = 252.0);

/// Annualized Sortino with the full-sample downside convention by default.
/// Undefined when no observation falls below the daily risk-free rate.
std::optional<double> sortino(const std::vector<double>& daily, double rf_annual,
                              double annualization_days = 252.0, bool full_sample = true);

/// Everything run_backtest derives from config and data before any LP solve:
/// the train/test split, per-analyst day selections and estimates, and the
/// resolved target return.  Exposed so `optimize` and `export-lp` can build
/// the same models without running the evaluation.
struct PreparedRun {
  ReturnTable train;
  ReturnTable test;
  std::vector<std::string> assets;
  double theta0 = 0.0;
  std::vector<double> index_daily_test;
  std::vector<ReturnTable> scenario_days;       // one per analyst
  std::vector<std::vector<double>> thetas;      // one per analyst
  std::vector<std::string> scenario_errors;     // nonempty marks a dead scenario
};

PreparedRun prepare_run(const BacktestConfig& cfg, const MarketData& data);

/// The per-portfolio LPs for a prepared run: analyst models in config order,
/// then the manager model.  Dead scenarios yield no model and an error note.
struct PortfolioModels {
  std::vector<std::string> names;
  std::vector<LpModel> models;        // aligned with names; empty slots skipped
  std::vector<bool> available;
  std::vector<std::string> errors;
};

PortfolioModels build_portfolio_models(const BacktestConfig& cfg, const PreparedRun& run);

BacktestReport run_backtest(const BacktestConfig& cfg, const MarketData& data);

struct UniverseSpec {
  std::string tag;
  std::vector<std::string> tickers;
};

struct GridOverrides {
  std::vector<std::size_t> windows;
  std::vector<double> alphas;
  std::vector<double> theta0_scales;
  std::vector<UniverseSpec> universes;
};

/// Cartesian product of the overrides applied to the base config, one report
/// per cell in row-major order (window, alpha, scale, universe).  Cell errors
/// are captured in the report, never thrown.  The parallel path distributes
/// cells over OpenMP threads; assembly order is identical to the serial path.
std::vector<BacktestReport> sensitivity_grid(const BacktestConfig& cfg,
                                             const GridOverrides& overrides,
                                             const MarketData& data, bool parallel = true);

/// Serial reference used by the tests and the benchmark.
std::vector<BacktestReport> sensitivity_grid_serial(const BacktestConfig& cfg,
                                                    const GridOverrides& overrides,
                                                    const MarketData& data);

}  // namespace riskquad

#endif
