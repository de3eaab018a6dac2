#ifndef RISKQUAD_DATA_HPP
#define RISKQUAD_DATA_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskquad/dates.hpp"

namespace riskquad {

/// Adjusted closes on a shared, strictly increasing trading calendar.
struct PriceTable {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  std::vector<std::vector<double>> prices;  // [date][ticker], all > 0

  std::size_t num_days() const { return dates.size(); }
  std::size_t num_tickers() const { return tickers.size(); }
  void validate() const;
  std::size_t ticker_index(const std::string& t) const;  // throws if absent
  PriceTable select(const std::vector<std::string>& subset) const;
};

/// One macro indicator (e.g. a yield series or a CPI level), sparse in time.
struct MacroSeries {
  std::vector<Date> dates;
  std::vector<double> values;

  void validate() const;
  /// Value on `when`, forward-filled from the latest observation <= when;
  /// throws when the series starts after `when`.
  double at(const Date& when) const;
  /// Year-over-year relative change: v(t)/v(t - 365d) - 1, forward-filled
  /// lookup on the lagged date.  Dates without a full year of history drop.
  MacroSeries yoy_change() const;
};

enum class IndicatorRule {
  rate_above_median,
  rate_below_median,
  cpi_above_median,
  cpi_below_median,
  custom_mask,
};

/// Scenario selection: which training days an analyst keeps.
struct AnalystRule {
  IndicatorRule indicator = IndicatorRule::rate_above_median;
  std::vector<bool> custom_mask;  // used only by custom_mask
};

/// Simple daily returns per ticker; one row fewer than the price table.
struct ReturnTable {
  std::vector<Date> dates;                   // length T-1, the "to" dates
  std::vector<std::string> tickers;
  std::vector<std::vector<double>> returns;  // [date][ticker], all > -1

  std::size_t num_days() const { return dates.size(); }
  ReturnTable slice(std::size_t first, std::size_t count) const;
  ReturnTable select_days(const std::vector<bool>& mask) const;
};

ReturnTable compute_returns(const PriceTable& p);

/// Day mask for a window: true on days whose (forward-filled) macro value
/// satisfies the rule against the window median.  The median of an even
/// count is the lower middle value; days equal to the median count as
/// "below", never "above".
std::vector<bool> select_periods(const MacroSeries& m, const AnalystRule& rule,
                                 const std::vector<Date>& window_dates);

/// Column means of the selected days.  Throws when the mask selects nothing.
std::vector<double> estimate_theta(const ReturnTable& r, const std::vector<bool>& mask);

/// Componentwise mu-weighted combination of per-scenario estimates.
std::vector<double> manager_theta(const std::vector<std::vector<double>>& thetas,
                                  const std::vector<double>& mu);

/// Wide CSV: header `date,<t1>,<t2>,...`, ISO dates, positive decimal closes.
PriceTable load_price_csv(const std::string& path);
PriceTable parse_price_csv(const std::string& text);

/// Two-column CSV: header `date,value`.
MacroSeries load_macro_csv(const std::string& path);
MacroSeries parse_macro_csv(const std::string& text);

/// Cleaning pass shared by the CSV and HTTP ingestion paths: drops tickers
/// missing more than `max_gap_share` of the calendar (warning via `warn`),
/// forward-fills interior gaps (NaNs), and validates the result.
PriceTable clean_price_table(PriceTable raw, double max_gap_share,
                             const std::function<void(const std::string&)>& warn);

/// HTTP ingestion.  The endpoint template is expanded per ticker with
/// {ticker}, {start}, {end} placeholders and must return a per-ticker CSV
/// with `date` and a close column.  Distinct failures (HTTP error, malformed
/// CSV, empty result) carry the ticker in the message.
struct FetchOptions {
  std::string endpoint_template;
  std::vector<std::string> tickers;
  Date start;
  Date end;
  double max_gap_share = 0.05;
};

PriceTable fetch_prices(const FetchOptions& opts,
                        const std::function<void(const std::string&)>& warn = {});

}  // namespace riskquad

#endif
