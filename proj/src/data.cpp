#include "riskquad/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "riskquad/csv.hpp"

namespace riskquad {

namespace {

double parse_price_field(const std::string& s) {
  if (s.empty()) return std::nan("");  // missing observation
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed numeric field '" + s + "'");
  return v;
}

}  // namespace

void PriceTable::validate() const {
  if (dates.empty() || tickers.empty()) throw std::invalid_argument("PriceTable: empty");
  if (prices.size() != dates.size()) throw std::invalid_argument("PriceTable: row count");
  for (std::size_t d = 1; d < dates.size(); ++d) {
    if (!(dates[d - 1] < dates[d]))
      throw std::invalid_argument("PriceTable: dates not strictly increasing at " +
                                  dates[d].to_string());
  }
  for (const auto& row : prices) {
    if (row.size() != tickers.size()) throw std::invalid_argument("PriceTable: column count");
    for (double p : row) {
      if (!(p > 0.0)) throw std::invalid_argument("PriceTable: nonpositive price");
    }
  }
}

std::size_t PriceTable::ticker_index(const std::string& t) const {
  const auto it = std::find(tickers.begin(), tickers.end(), t);
  if (it == tickers.end()) throw std::invalid_argument("unknown ticker '" + t + "'");
  return static_cast<std::size_t>(it - tickers.begin());
}

PriceTable PriceTable::select(const std::vector<std::string>& subset) const {
  PriceTable out;
  out.dates = dates;
  out.tickers = subset;
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& t : subset) idx.push_back(ticker_index(t));
  out.prices.reserve(prices.size());
  for (const auto& row : prices) {
    std::vector<double> r;
    r.reserve(idx.size());
    for (std::size_t j : idx) r.push_back(row[j]);
    out.prices.push_back(std::move(r));
  }
  out.validate();
  return out;
}

void MacroSeries::validate() const {
  if (dates.empty() || dates.size() != values.size())
    throw std::invalid_argument("MacroSeries: empty or misaligned");
  for (std::size_t d = 1; d < dates.size(); ++d) {
    if (!(dates[d - 1] < dates[d]))
      throw std::invalid_argument("MacroSeries: dates not strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("MacroSeries: non-finite value");
  }
}

double MacroSeries::at(const Date& when) const {
  // latest observation with date <= when
  auto it = std::upper_bound(dates.begin(), dates.end(), when);
  if (it == dates.begin())
    throw std::invalid_argument("macro series starts " + dates.front().to_string() +
                                ", after requested " + when.to_string());
  return values[static_cast<std::size_t>(it - dates.begin()) - 1];
}

MacroSeries MacroSeries::yoy_change() const {
  MacroSeries out;
  for (std::size_t i = 0; i < dates.size(); ++i) {
    const Date lagged = dates[i].plus_days(-365);
    if (lagged < dates.front()) continue;
    const double base = at(lagged);
    if (base == 0.0) throw std::invalid_argument("MacroSeries: zero base in YoY change");
    out.dates.push_back(dates[i]);
    out.values.push_back(values[i] / base - 1.0);
  }
  if (out.dates.empty())
    throw std::invalid_argument("MacroSeries: no dates with a full year of history");
  return out;
}

ReturnTable compute_returns(const PriceTable& p) {
  p.validate();
  if (p.num_days() < 2) throw std::invalid_argument("compute_returns: need at least two dates");
  ReturnTable out;
  out.tickers = p.tickers;
  out.dates.assign(p.dates.begin() + 1, p.dates.end());
  out.returns.resize(p.num_days() - 1);
  for (std::size_t d = 1; d < p.num_days(); ++d) {
    auto& row = out.returns[d - 1];
    row.resize(p.num_tickers());
    for (std::size_t j = 0; j < p.num_tickers(); ++j)
      row[j] = p.prices[d][j] / p.prices[d - 1][j] - 1.0;
  }
  return out;
}

ReturnTable ReturnTable::slice(std::size_t first, std::size_t count) const {
  if (first + count > num_days()) throw std::invalid_argument("ReturnTable::slice out of range");
  ReturnTable out;
  out.tickers = tickers;
  out.dates.assign(dates.begin() + static_cast<long>(first),
                   dates.begin() + static_cast<long>(first + count));
  out.returns.assign(returns.begin() + static_cast<long>(first),
                     returns.begin() + static_cast<long>(first + count));
  return out;
}

ReturnTable ReturnTable::select_days(const std::vector<bool>& mask) const {
  if (mask.size() != num_days())
    throw std::invalid_argument("ReturnTable::select_days: mask length mismatch");
  ReturnTable out;
  out.tickers = tickers;
  for (std::size_t d = 0; d < num_days(); ++d) {
    if (!mask[d]) continue;
    out.dates.push_back(dates[d]);
    out.returns.push_back(returns[d]);
  }
  return out;
}

std::vector<bool> select_periods(const MacroSeries& m, const AnalystRule& rule,
                                 const std::vector<Date>& window_dates) {
  if (window_dates.empty()) throw std::invalid_argument("select_periods: empty window");
  if (rule.indicator == IndicatorRule::custom_mask) {
    if (rule.custom_mask.size() != window_dates.size())
      throw std::invalid_argument("select_periods: custom mask length mismatch");
    return rule.custom_mask;
  }

  std::vector<double> vals(window_dates.size());
  for (std::size_t d = 0; d < window_dates.size(); ++d) vals[d] = m.at(window_dates[d]);

  // median with the lower-middle convention for even counts
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[(sorted.size() - 1) / 2];

  const bool above = rule.indicator == IndicatorRule::rate_above_median ||
                     rule.indicator == IndicatorRule::cpi_above_median;
  std::vector<bool> mask(vals.size());
  for (std::size_t d = 0; d < vals.size(); ++d)
    mask[d] = above ? vals[d] > median : vals[d] <= median;
  return mask;
}

std::vector<double> estimate_theta(const ReturnTable& r, const std::vector<bool>& mask) {
  if (mask.size() != r.num_days())
    throw std::invalid_argument("estimate_theta: mask length mismatch");
  std::size_t count = 0;
  std::vector<double> theta(r.tickers.size(), 0.0);
  for (std::size_t d = 0; d < r.num_days(); ++d) {
    if (!mask[d]) continue;
    ++count;
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += r.returns[d][j];
  }
  if (count == 0) throw std::invalid_argument("estimate_theta: empty selection");
  for (double& v : theta) v /= static_cast<double>(count);
  return theta;
}

std::vector<double> manager_theta(const std::vector<std::vector<double>>& thetas,
                                  const std::vector<double>& mu) {
  if (thetas.size() != mu.size() || thetas.empty())
    throw std::invalid_argument("manager_theta: length mismatch");
  std::vector<double> out(thetas.front().size(), 0.0);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i].size() != out.size())
      throw std::invalid_argument("manager_theta: ragged estimates");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += mu[i] * thetas[i][j];
  }
  return out;
}

PriceTable parse_price_csv(const std::string& text) {
  const CsvTable csv = parse_csv(text);
  if (csv.header.size() < 2 || csv.header.front() != "date")
    throw std::invalid_argument("price CSV: header must be date,<ticker>,...");
  PriceTable out;
  out.tickers.assign(csv.header.begin() + 1, csv.header.end());
  for (const auto& row : csv.rows) {
    out.dates.push_back(Date::parse(row.front()));
    std::vector<double> prices(out.tickers.size());
    for (std::size_t j = 0; j < out.tickers.size(); ++j) prices[j] = parse_price_field(row[j + 1]);
    out.prices.push_back(std::move(prices));
  }
  return clean_price_table(std::move(out), 0.05, {});
}

PriceTable load_price_csv(const std::string& path) {
  try {
    return parse_price_csv(read_text_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

MacroSeries parse_macro_csv(const std::string& text) {
  const CsvTable csv = parse_csv(text);
  if (csv.header.size() != 2 || csv.header[0] != "date" || csv.header[1] != "value")
    throw std::invalid_argument("macro CSV: header must be date,value");
  MacroSeries out;
  for (const auto& row : csv.rows) {
    out.dates.push_back(Date::parse(row[0]));
    out.values.push_back(parse_price_field(row[1]));
  }
  out.validate();
  return out;
}

MacroSeries load_macro_csv(const std::string& path) {
  try {
    return parse_macro_csv(read_text_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

PriceTable clean_price_table(PriceTable raw,
                             double max_gap_share,
                             const std::function<void(const std::string&)>& warn) {
  if (raw.dates.empty() || raw.tickers.empty())
    throw std::invalid_argument("price table: empty");
  for (std::size_t d = 1; d < raw.dates.size(); ++d) {
    if (!(raw.dates[d - 1] < raw.dates[d]))
      throw std::invalid_argument("price table: dates not strictly increasing");
  }

  // Per-ticker gap census, then drop or forward-fill.
  std::vector<std::string> kept;
  std::vector<std::size_t> kept_idx;
  for (std::size_t j = 0; j < raw.tickers.size(); ++j) {
    std::size_t gaps = 0;
    for (std::size_t d = 0; d < raw.dates.size(); ++d) {
      if (std::isnan(raw.prices[d][j])) ++gaps;
    }
    const double share =
        static_cast<double>(gaps) / static_cast<double>(raw.dates.size());
    if (share > max_gap_share) {
      if (warn)
        warn("dropping ticker " + raw.tickers[j] + ": missing " +
             std::to_string(gaps) + "/" + std::to_string(raw.dates.size()) + " days");
      continue;
    }
    kept.push_back(raw.tickers[j]);
    kept_idx.push_back(j);
  }
  if (kept.empty()) throw std::invalid_argument("price table: all tickers dropped");

  PriceTable out;
  out.dates = raw.dates;
  out.tickers = std::move(kept);
  out.prices.resize(raw.dates.size());
  for (std::size_t d = 0; d < raw.dates.size(); ++d) {
    out.prices[d].resize(kept_idx.size());
    for (std::size_t jj = 0; jj < kept_idx.size(); ++jj) {
      double v = raw.prices[d][kept_idx[jj]];
      if (std::isnan(v)) {
        if (d == 0)
          throw std::invalid_argument("price table: ticker " + out.tickers[jj] +
                                      " missing its first observation");
        v = out.prices[d - 1][jj];  // forward-fill
      }
      out.prices[d][jj] = v;
    }
  }
  out.validate();
  return out;
}

}  // namespace riskquad
