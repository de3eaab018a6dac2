#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "riskquad/csv.hpp"
#include "riskquad/data.hpp"

#include "httplib.h"

namespace riskquad {

namespace {

std::string expand(std::string tmpl, const std::string& key, const std::string& value) {
  const std::string needle = "{" + key + "}";
  std::size_t pos = 0;
  while ((pos = tmpl.find(needle, pos)) != std::string::npos) {
    tmpl.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return tmpl;
}

// scheme://host[:port]/path?query -> (scheme://host[:port], /path?query)
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos)
    throw std::invalid_argument("fetch: endpoint lacks a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

PriceTable fetch_prices(const FetchOptions& opts,
                        const std::function<void(const std::string&)>& warn) {
  if (opts.tickers.empty()) throw std::invalid_argument("fetch: no tickers requested");
  if (opts.endpoint_template.empty())
    throw std::invalid_argument("fetch: empty endpoint template");

  std::map<Date, std::map<std::string, double>> by_date;
  for (const auto& ticker : opts.tickers) {
    std::string url = expand(opts.endpoint_template, "ticker", ticker);
    url = expand(url, "start", opts.start.to_string());
    url = expand(url, "end", opts.end.to_string());
    const auto [base, path] = split_url(url);

    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    const auto res = client.Get(path);
    if (!res)
      throw std::runtime_error("fetch error for ticker " + ticker + ": no response from " + base);
    if (res->status != 200)
      throw std::runtime_error("fetch error for ticker " + ticker + ": HTTP " +
                               std::to_string(res->status));

    CsvTable csv;
    try {
      csv = parse_csv(res->body);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("malformed CSV for ticker " + ticker + ": " + e.what());
    }
    if (csv.header.size() < 2 || csv.header.front() != "date")
      throw std::runtime_error("malformed CSV for ticker " + ticker +
                               ": header must start with date,<close>");
    if (csv.rows.empty())
      throw std::runtime_error("empty result for ticker " + ticker);
    for (const auto& row : csv.rows) {
      const Date d = Date::parse(row.front());
      if (d < opts.start || opts.end < d) continue;
      double v = 0.0;
      try {
        v = std::stod(row[1]);
      } catch (...) {
        throw std::runtime_error("malformed CSV for ticker " + ticker + ": bad close '" +
                                 row[1] + "'");
      }
      by_date[d][ticker] = v;
    }
  }
  if (by_date.empty()) throw std::runtime_error("fetch: no observations in the requested range");

  PriceTable raw;
  raw.tickers = opts.tickers;
  for (const auto& [date, closes] : by_date) {
    raw.dates.push_back(date);
    std::vector<double> row(opts.tickers.size(), std::nan(""));
    for (std::size_t j = 0; j < opts.tickers.size(); ++j) {
      const auto it = closes.find(opts.tickers[j]);
      if (it != closes.end()) row[j] = it->second;
    }
    raw.prices.push_back(std::move(row));
  }
  return clean_price_table(std::move(raw), opts.max_gap_share, warn);
}

}  // namespace riskquad
