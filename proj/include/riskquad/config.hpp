#ifndef RISKQUAD_CONFIG_HPP
#define RISKQUAD_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskquad/backtest.hpp"

namespace riskquad {

/// The full run configuration: data sources, analyst definitions, model
/// parameters and the optional sensitivity grid.  Parsed from JSON and
/// validated before any computation; every violation is a ConfigError with
/// the offending key in the message.
struct RunConfig {
  // data
  std::string prices_csv;               // offline path (canonical)
  std::string rate_csv;
  std::string cpi_csv;
  std::optional<std::string> index_ticker;
  std::vector<std::string> universe;    // resolved ticker list
  std::string universe_tag = "base";

  // fetch (only with --fetch)
  std::string fetch_endpoint;
  std::string fetch_start;
  std::string fetch_end;

  BacktestConfig backtest;
  GridOverrides grid;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a config document.  Relative data paths resolve
/// against RISKQUAD_DATA_DIR when set, else against the config file's
/// directory.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir);

/// Loads the data named by the config (offline CSV path).
MarketData load_market_data(const RunConfig& cfg);

}  // namespace riskquad

#endif
