#include "riskquad/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskquad {

namespace {

// (1+c)(1+r)-1 accumulated incrementally: zero returns pass through exactly,
// so a month's cumulative return never absorbs a spurious 1+eps rounding.
double compound(const std::vector<double>& daily) {
  double c = 0.0;
  for (double r : daily) c += r + c * r;
  return c;
}

std::vector<double> portfolio_daily(const std::vector<double>& x, const ReturnTable& table) {
  std::vector<double> out(table.num_days(), 0.0);
  for (std::size_t d = 0; d < table.num_days(); ++d) {
    double r = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) r += x[j] * table.returns[d][j];
    out[d] = r;
  }
  return out;
}

void validate_config(const BacktestConfig& cfg) {
  if (cfg.analysts.empty()) throw std::invalid_argument("backtest: no analysts configured");
  if (cfg.universe.empty()) throw std::invalid_argument("backtest: empty universe");
  double wsum = 0.0;
  for (const auto& a : cfg.analysts) wsum += a.weight;
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("backtest: analyst weights must sum to 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("backtest: alpha outside (0,1)");
}

std::vector<double> index_series(const BacktestConfig& cfg, const MarketData& data,
                                 const ReturnTable& segment) {
  if (cfg.index_ticker) {
    const ReturnTable idx = compute_returns(data.prices.select({*cfg.index_ticker}));
    std::vector<double> out;
    out.reserve(segment.num_days());
    for (const Date& d : segment.dates) {
      const auto it = std::lower_bound(idx.dates.begin(), idx.dates.end(), d);
      if (it == idx.dates.end() || !(*it == d))
        throw std::invalid_argument("index series missing date " + d.to_string());
      out.push_back(idx.returns[static_cast<std::size_t>(it - idx.dates.begin())][0]);
    }
    return out;
  }
  // equal-weight basket of the universe as the reference
  std::vector<double> out(segment.num_days(), 0.0);
  for (std::size_t d = 0; d < segment.num_days(); ++d) {
    double s = 0.0;
    for (double r : segment.returns[d]) s += r;
    out[d] = s / static_cast<double>(segment.tickers.size());
  }
  return out;
}

}  // namespace

std::pair<ReturnTable, ReturnTable> split(const ReturnTable& r, const Date& cutoff,
                                          std::size_t window) {
  if (window < 2) throw std::invalid_argument("split: window must cover at least two days");
  if (r.num_days() < window)
    throw std::invalid_argument("split: only " + std::to_string(r.num_days()) +
                                " trading days available for a window of " +
                                std::to_string(window));
  const std::size_t first = r.num_days() - window;
  const ReturnTable win = r.slice(first, window);
  if (cutoff <= win.dates.front())
    throw std::invalid_argument("split: cutoff " + cutoff.to_string() +
                                " leaves an empty training set (window starts " +
                                win.dates.front().to_string() + ")");
  if (win.dates.back() < cutoff)
    throw std::invalid_argument("split: cutoff " + cutoff.to_string() +
                                " lies after the window end " + win.dates.back().to_string());
  std::size_t split_at = 0;
  while (split_at < window && win.dates[split_at] < cutoff) ++split_at;
  return {win.slice(0, split_at), win.slice(split_at, window - split_at)};
}

double resolve_theta0(const Theta0Spec& spec, const std::vector<Date>& index_dates,
                      const std::vector<double>& index_daily) {
  if (spec.explicit_value) return *spec.explicit_value;
  if (spec.month.size() != 7 || spec.month[4] != '-')
    throw std::invalid_argument("theta0: month must be YYYY-MM, got '" + spec.month + "'");
  const int year = std::stoi(spec.month.substr(0, 4));
  const int month = std::stoi(spec.month.substr(5, 2));
  if (index_dates.size() != index_daily.size())
    throw std::invalid_argument("theta0: misaligned index series");
  std::vector<double> in_month;
  for (std::size_t d = 0; d < index_dates.size(); ++d) {
    if (index_dates[d].year() == year && index_dates[d].month() == month)
      in_month.push_back(index_daily[d]);
  }
  if (in_month.empty())
    throw std::invalid_argument("theta0: month " + spec.month + " absent from the index series");
  return compound(in_month) / static_cast<double>(in_month.size());
}

std::optional<double> sharpe(const std::vector<double>& daily, double rf_annual,
                             double annualization_days) {
  if (daily.size() < 2) return std::nullopt;
  const double rf_daily = rf_annual / annualization_days;
  double mean = 0.0;
  for (double r : daily) mean += r;
  mean /= static_cast<double>(daily.size());
  double ss = 0.0;
  for (double r : daily) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(daily.size() - 1));
  if (sd == 0.0) return std::nullopt;
  return (mean - rf_daily) / sd * std::sqrt(annualization_days);
}

std::optional<double> sortino(const std::vector<double>& daily, double rf_annual,
                              double annualization_days, bool full_sample) {
  if (daily.empty()) return std::nullopt;
  const double rf_daily = rf_annual / annualization_days;
  double mean = 0.0, down_ss = 0.0;
  std::size_t down_count = 0;
  for (double r : daily) {
    mean += r;
    const double shortfall = std::min(r - rf_daily, 0.0);
    if (shortfall < 0.0) ++down_count;
    down_ss += shortfall * shortfall;
  }
  mean /= static_cast<double>(daily.size());
  if (down_count == 0) return std::nullopt;
  const double denom_n =
      full_sample ? static_cast<double>(daily.size()) : static_cast<double>(down_count);
  const double dd = std::sqrt(down_ss / denom_n);
  if (dd == 0.0) return std::nullopt;
  return (mean - rf_daily) / dd * std::sqrt(annualization_days);
}

PreparedRun prepare_run(const BacktestConfig& cfg, const MarketData& data) {
  validate_config(cfg);

  const PriceTable assets = data.prices.select(cfg.universe);
  const ReturnTable all_returns = compute_returns(assets);
  auto [train, test] = split(all_returns, cfg.cutoff, cfg.window);

  PreparedRun run;
  run.assets = assets.tickers;
  run.index_daily_test = index_series(cfg, data, test);
  run.theta0 =
      resolve_theta0(cfg.theta0, train.dates, index_series(cfg, data, train)) * cfg.theta0_scale;

  const bool needs_cpi =
      std::any_of(cfg.analysts.begin(), cfg.analysts.end(), [](const AnalystSpec& a) {
        return a.rule.indicator == IndicatorRule::cpi_above_median ||
               a.rule.indicator == IndicatorRule::cpi_below_median;
      });
  MacroSeries cpi_yoy;
  if (needs_cpi) cpi_yoy = data.cpi.yoy_change();

  const std::size_t n = cfg.analysts.size();
  run.scenario_days.resize(n);
  run.thetas.resize(n);
  run.scenario_errors.assign(n, "");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rule = cfg.analysts[i].rule;
    const MacroSeries& src = (rule.indicator == IndicatorRule::cpi_above_median ||
                              rule.indicator == IndicatorRule::cpi_below_median)
                                 ? cpi_yoy
                                 : data.rate;
    const std::vector<bool> mask = select_periods(src, rule, train.dates);
    run.scenario_days[i] = train.select_days(mask);
    if (run.scenario_days[i].num_days() == 0) {
      run.scenario_errors[i] =
          "analyst " + cfg.analysts[i].label + " selects no training days";
      continue;
    }
    run.thetas[i] = estimate_theta(train, mask);
  }
  run.train = std::move(train);
  run.test = std::move(test);
  return run;
}

PortfolioModels build_portfolio_models(const BacktestConfig& cfg, const PreparedRun& run) {
  PortfolioModels out;
  const std::size_t n = cfg.analysts.size();
  std::string dead;
  for (const auto& err : run.scenario_errors) {
    if (!err.empty()) dead = err;
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.names.push_back(cfg.analysts[i].label);
    if (!run.scenario_errors[i].empty()) {
      out.models.emplace_back();
      out.available.push_back(false);
      out.errors.push_back(run.scenario_errors[i]);
      continue;
    }
    PortfolioProblem p;
    p.alpha = cfg.alpha;
    p.mu = {1.0};
    p.theta0 = run.theta0;
    p.target_sense = cfg.analyst_sense;
    p.returns = {run.scenario_days[i].returns};
    p.theta = {run.thetas[i]};
    out.models.push_back(build_analyst_lp(p, 0));
    out.available.push_back(true);
    out.errors.emplace_back();
  }

  out.names.push_back("Manager");
  if (!dead.empty()) {
    // The aggregated program needs every scenario's history.
    out.models.emplace_back();
    out.available.push_back(false);
    out.errors.push_back(dead);
    return out;
  }
  PortfolioProblem p;
  p.alpha = cfg.alpha;
  p.theta0 = run.theta0;
  p.target_sense = cfg.manager_sense;
  for (std::size_t i = 0; i < n; ++i) {
    p.mu.push_back(cfg.analysts[i].weight);
    p.returns.push_back(run.scenario_days[i].returns);
    p.theta.push_back(run.thetas[i]);
  }
  out.models.push_back(build_manager_lp(p));
  out.available.push_back(true);
  out.errors.emplace_back();
  return out;
}

BacktestReport run_backtest(const BacktestConfig& cfg, const MarketData& data) {
  const PreparedRun run = prepare_run(cfg, data);
  const PortfolioModels models = build_portfolio_models(cfg, run);

  BacktestReport rep;
  rep.window = cfg.window;
  rep.alpha = cfg.alpha;
  rep.theta0 = run.theta0;
  rep.theta0_scale = cfg.theta0_scale;
  rep.test_dates = run.test.dates;
  rep.index_daily = run.index_daily_test;
  rep.index_cumulative = compound(rep.index_daily);

  const std::size_t m = run.assets.size();
  for (std::size_t k = 0; k < models.names.size(); ++k) {
    PortfolioResult r;
    r.name = models.names[k];
    if (!models.available[k]) {
      r.status = LpStatus::infeasible;
      r.diagnostics = models.errors[k];
      rep.portfolios.push_back(std::move(r));
      continue;
    }
    const LpSolution sol = solve(models.models[k]);
    r.status = sol.status;
    r.diagnostics = sol.diagnostics;
    if (sol.status == LpStatus::optimal) {
      r.objective = sol.objective;
      r.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(m));
      // The model closes the open bound x_j < 1; flag optima sitting on it.
      if (m >= 2) {
        for (std::size_t j = 0; j < m; ++j) {
          if (r.weights[j] >= 1.0 - 1e-9) {
            r.diagnostics = "weight " + std::to_string(j) + " at the upper bound 1";
            break;
          }
        }
      }
      r.daily = portfolio_daily(r.weights, run.test);
      r.cumulative = compound(r.daily);
      r.sharpe = sharpe(r.daily, cfg.rf_annual, cfg.annualization_days);
      r.sortino =
          sortino(r.daily, cfg.rf_annual, cfg.annualization_days, cfg.sortino_full_sample);
    }
    rep.portfolios.push_back(std::move(r));
  }
  return rep;
}

namespace {

struct GridAxes {
  std::vector<std::size_t> windows;
  std::vector<double> alphas;
  std::vector<double> scales;
  std::vector<UniverseSpec> universes;
};

GridAxes resolve_axes(const BacktestConfig& cfg, const GridOverrides& o) {
  GridAxes axes;
  axes.windows = o.windows.empty() ? std::vector<std::size_t>{cfg.window} : o.windows;
  axes.alphas = o.alphas.empty() ? std::vector<double>{cfg.alpha} : o.alphas;
  axes.scales = o.theta0_scales.empty() ? std::vector<double>{cfg.theta0_scale} : o.theta0_scales;
  if (o.universes.empty()) {
    axes.universes = {UniverseSpec{"base", cfg.universe}};
  } else {
    axes.universes = o.universes;
  }
  return axes;
}

BacktestReport run_cell(const BacktestConfig& base, const MarketData& data, std::size_t window,
                        double alpha, double scale, const UniverseSpec& universe) {
  BacktestConfig cfg = base;
  cfg.window = window;
  cfg.alpha = alpha;
  cfg.theta0_scale = scale;
  cfg.universe = universe.tickers;
  BacktestReport rep;
  try {
    rep = run_backtest(cfg, data);
  } catch (const std::exception& e) {
    rep.window = window;
    rep.alpha = alpha;
    rep.theta0_scale = scale;
    rep.error = e.what();
  }
  rep.universe_tag = universe.tag;
  return rep;
}

std::vector<BacktestReport> run_grid(const BacktestConfig& cfg, const GridOverrides& overrides,
                                     const MarketData& data, bool parallel) {
  const GridAxes axes = resolve_axes(cfg, overrides);
  struct Cell {
    std::size_t window;
    double alpha;
    double scale;
    const UniverseSpec* universe;
  };
  std::vector<Cell> cells;
  for (std::size_t w : axes.windows) {
    for (double a : axes.alphas) {
      for (double s : axes.scales) {
        for (const auto& u : axes.universes) cells.push_back({w, a, s, &u});
      }
    }
  }

  // Cells are independent; results land in their slot, so assembly order is
  // the serial order no matter how the loop is scheduled.
  std::vector<BacktestReport> reports(cells.size());
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells.size()); ++c) {
      const Cell& cell = cells[static_cast<std::size_t>(c)];
      reports[static_cast<std::size_t>(c)] =
          run_cell(cfg, data, cell.window, cell.alpha, cell.scale, *cell.universe);
    }
    return reports;
#endif
  }
  for (std::size_t c = 0; c < cells.size(); ++c)
    reports[c] = run_cell(cfg, data, cells[c].window, cells[c].alpha, cells[c].scale,
                          *cells[c].universe);
  return reports;
}

}  // namespace

std::vector<BacktestReport> sensitivity_grid(const BacktestConfig& cfg,
                                             const GridOverrides& overrides,
                                             const MarketData& data, bool parallel) {
  return run_grid(cfg, overrides, data, parallel);
}

std::vector<BacktestReport> sensitivity_grid_serial(const BacktestConfig& cfg,
                                                    const GridOverrides& overrides,
                                                    const MarketData& data) {
  return run_grid(cfg, overrides, data, false);
}

}  // namespace riskquad
