#ifndef RISKQUAD_REPORT_HPP
#define RISKQUAD_REPORT_HPP

#include <string>
#include <vector>

#include "riskquad/backtest.hpp"

namespace riskquad {

/// CSV with the fixed column set `portfolio,two_month_return,sharpe,sortino`;
/// undefined ratios print as NA, floats as shortest round-trip decimals, so
/// the bytes are reproducible.
std::string backtest_csv(const BacktestReport& rep);

/// Grid CSV: parameter columns (window, alpha, theta0_scale, universe) in
/// front of the same portfolio columns, one row per portfolio per cell.
std::string sensitivity_csv(const std::vector<BacktestReport>& reports);

/// JSON document for one run (object) or a grid (array nested by cell).
std::string backtest_json(const BacktestReport& rep);
std::string sensitivity_json(const std::vector<BacktestReport>& reports);

}  // namespace riskquad

#endif
