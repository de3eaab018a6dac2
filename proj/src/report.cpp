#include "riskquad/report.hpp"

#include "json.hpp"
#include "riskquad/csv.hpp"

namespace riskquad {

namespace {

std::string metric(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::failure: return "failure";
  }
  return "failure";
}

void portfolio_rows(std::string& out, const BacktestReport& rep, const std::string& prefix) {
  for (const auto& p : rep.portfolios) {
    out += prefix + p.name + ",";
    if (p.status == LpStatus::optimal) {
      out += format_double(p.cumulative) + "," + metric(p.sharpe) + "," + metric(p.sortino);
    } else {
      out += std::string(status_name(p.status)) + ",NA,NA";
    }
    out += "\n";
  }
  out += prefix + "Index," + format_double(rep.index_cumulative) + ",NA,NA\n";
}

nlohmann::ordered_json report_json_object(const BacktestReport& rep) {
  nlohmann::ordered_json cell;
  cell["window"] = rep.window;
  cell["alpha"] = rep.alpha;
  cell["theta0"] = rep.theta0;
  cell["theta0_scale"] = rep.theta0_scale;
  cell["universe"] = rep.universe_tag;
  if (!rep.error.empty()) {
    cell["error"] = rep.error;
    return cell;
  }
  nlohmann::ordered_json portfolios = nlohmann::ordered_json::array();
  for (const auto& p : rep.portfolios) {
    nlohmann::ordered_json row;
    row["portfolio"] = p.name;
    row["status"] = status_name(p.status);
    if (p.status == LpStatus::optimal) {
      row["weights"] = p.weights;
      row["objective"] = p.objective;
      row["two_month_return"] = p.cumulative;
      if (p.sharpe) row["sharpe"] = *p.sharpe;
      if (p.sortino) row["sortino"] = *p.sortino;
      row["daily"] = p.daily;
    } else if (!p.diagnostics.empty()) {
      row["diagnostics"] = p.diagnostics;
    }
    portfolios.push_back(std::move(row));
  }
  cell["portfolios"] = std::move(portfolios);
  nlohmann::ordered_json index;
  index["two_month_return"] = rep.index_cumulative;
  index["daily"] = rep.index_daily;
  cell["index"] = std::move(index);
  nlohmann::ordered_json dates = nlohmann::ordered_json::array();
  for (const auto& d : rep.test_dates) dates.push_back(d.to_string());
  cell["test_dates"] = std::move(dates);
  return cell;
}

}  // namespace

std::string backtest_csv(const BacktestReport& rep) {
  std::string out = "portfolio,two_month_return,sharpe,sortino\n";
  portfolio_rows(out, rep, "");
  return out;
}

std::string sensitivity_csv(const std::vector<BacktestReport>& reports) {
  std::string out = "window,alpha,theta0_scale,universe,portfolio,two_month_return,sharpe,sortino\n";
  for (const auto& rep : reports) {
    const std::string prefix = std::to_string(rep.window) + "," + format_double(rep.alpha) + "," +
                               format_double(rep.theta0_scale) + "," + rep.universe_tag + ",";
    if (!rep.error.empty()) {
      std::string reason = rep.error;
      for (char& c : reason) {
        if (c == ',' || c == '\n') c = ';';
      }
      out += prefix + "ERROR," + reason + ",NA,NA\n";
      continue;
    }
    portfolio_rows(out, rep, prefix);
  }
  return out;
}

std::string backtest_json(const BacktestReport& rep) {
  return report_json_object(rep).dump(2) + "\n";
}

std::string sensitivity_json(const std::vector<BacktestReport>& reports) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& rep : reports) cells.push_back(report_json_object(rep));
  return cells.dump(2) + "\n";
}

}  // namespace riskquad
