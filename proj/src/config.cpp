#include "riskquad/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "json.hpp"
#include "riskquad/csv.hpp"

namespace riskquad {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& need(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

double need_number(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string need_string(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

IndicatorRule parse_rule(const std::string& name) {
  if (name == "rate_above_median") return IndicatorRule::rate_above_median;
  if (name == "rate_below_median") return IndicatorRule::rate_below_median;
  if (name == "cpi_above_median") return IndicatorRule::cpi_above_median;
  if (name == "cpi_below_median") return IndicatorRule::cpi_below_median;
  if (name == "custom_mask") return IndicatorRule::custom_mask;
  fail("unknown analyst rule '" + name + "'");
}

TargetSense parse_sense(const std::string& name) {
  if (name == "program_default") return TargetSense::program_default;
  if (name == "equality") return TargetSense::equality;
  if (name == "at_least") return TargetSense::at_least;
  fail("unknown target sense '" + name + "'");
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::path(path).is_absolute()) return path;
  if (const char* root = std::getenv("RISKQUAD_DATA_DIR"); root && *root)
    return (fs::path(root) / path).string();
  return (fs::path(base_dir) / path).string();
}

std::vector<std::string> read_universe_file(const std::string& path) {
  std::vector<std::string> tickers;
  std::string text = read_text_file(path);
  std::string cur;
  for (char ch : text + "\n") {
    if (ch == '\n' || ch == '\r') {
      if (!cur.empty() && cur[0] != '#') tickers.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (tickers.empty()) fail("universe file '" + path + "' lists no tickers");
  return tickers;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  RunConfig cfg;

  const json& data = need(doc, "data");
  cfg.prices_csv = resolve_path(need_string(data, "prices_csv"), base_dir);
  cfg.rate_csv = resolve_path(need_string(data, "rate_csv"), base_dir);
  if (data.contains("cpi_csv")) cfg.cpi_csv = resolve_path(data["cpi_csv"].get<std::string>(), base_dir);
  if (data.contains("index_ticker")) cfg.index_ticker = data["index_ticker"].get<std::string>();
  if (data.contains("universe_file")) {
    const std::string path = resolve_path(data["universe_file"].get<std::string>(), base_dir);
    cfg.universe = read_universe_file(path);
  } else if (data.contains("universe")) {
    cfg.universe = data["universe"].get<std::vector<std::string>>();
  } else {
    fail("data needs either 'universe_file' or a 'universe' list");
  }
  if (data.contains("fetch")) {
    const json& f = data["fetch"];
    cfg.fetch_endpoint = need_string(f, "endpoint");
    cfg.fetch_start = need_string(f, "start");
    cfg.fetch_end = need_string(f, "end");
  }

  const json& analysts = need(doc, "analysts");
  if (!analysts.is_array() || analysts.empty()) fail("'analysts' must be a nonempty array");
  double wsum = 0.0;
  for (const json& a : analysts) {
    AnalystSpec spec;
    spec.label = need_string(a, "label");
    spec.rule.indicator = parse_rule(need_string(a, "rule"));
    if (spec.rule.indicator == IndicatorRule::custom_mask) {
      if (!a.contains("mask") || !a["mask"].is_array()) fail("custom_mask rule needs a 'mask' array");
      for (const json& b : a["mask"]) spec.rule.custom_mask.push_back(b.get<bool>());
    }
    spec.weight = need_number(a, "weight");
    if (spec.weight < 0.0) fail("analyst weight must be nonnegative");
    wsum += spec.weight;
    cfg.backtest.analysts.push_back(std::move(spec));
  }
  if (std::abs(wsum - 1.0) > 1e-12) fail("analyst weights must sum to 1");

  const double alpha = need_number(doc, "alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("'alpha' must lie strictly in (0,1)");
  cfg.backtest.alpha = alpha;

  const double window = need_number(doc, "window");
  if (window < 2.0 || window != std::floor(window)) fail("'window' must be an integer >= 2");
  cfg.backtest.window = static_cast<std::size_t>(window);

  try {
    cfg.backtest.cutoff = Date::parse(need_string(doc, "cutoff"));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }

  const json& theta0 = need(doc, "theta0");
  if (theta0.contains("value")) {
    cfg.backtest.theta0.explicit_value = theta0["value"].get<double>();
  } else if (theta0.contains("month")) {
    cfg.backtest.theta0.month = theta0["month"].get<std::string>();
    if (cfg.backtest.theta0.month.size() != 7 || cfg.backtest.theta0.month[4] != '-')
      fail("'theta0.month' must be YYYY-MM");
  } else {
    fail("'theta0' needs 'value' or 'month'");
  }

  cfg.backtest.rf_annual = need_number(doc, "risk_free_annual");
  if (doc.contains("annualization_days")) {
    cfg.backtest.annualization_days = doc["annualization_days"].get<double>();
    if (!(cfg.backtest.annualization_days > 0.0)) fail("'annualization_days' must be positive");
  }
  if (doc.contains("sortino_full_sample"))
    cfg.backtest.sortino_full_sample = doc["sortino_full_sample"].get<bool>();
  if (doc.contains("manager_target_sense"))
    cfg.backtest.manager_sense = parse_sense(doc["manager_target_sense"].get<std::string>());
  if (doc.contains("analyst_target_sense"))
    cfg.backtest.analyst_sense = parse_sense(doc["analyst_target_sense"].get<std::string>());
  if (doc.contains("theta0_scale")) cfg.backtest.theta0_scale = doc["theta0_scale"].get<double>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();

  if (doc.contains("sensitivity")) {
    const json& s = doc["sensitivity"];
    if (s.contains("window")) {
      for (const json& v : s["window"]) {
        const double w = v.get<double>();
        if (w < 2.0 || w != std::floor(w)) fail("sensitivity window values must be integers >= 2");
        cfg.grid.windows.push_back(static_cast<std::size_t>(w));
      }
    }
    if (s.contains("alpha")) {
      for (const json& v : s["alpha"]) {
        const double a = v.get<double>();
        if (!(a > 0.0 && a < 1.0)) fail("sensitivity alpha values must lie in (0,1)");
        cfg.grid.alphas.push_back(a);
      }
    }
    if (s.contains("theta0_scale")) {
      for (const json& v : s["theta0_scale"]) {
        const double x = v.get<double>();
        if (!(x > 0.0)) fail("sensitivity theta0_scale values must be positive");
        cfg.grid.theta0_scales.push_back(x);
      }
    }
    if (s.contains("universe_files")) {
      for (const json& v : s["universe_files"]) {
        const std::string path = resolve_path(v.get<std::string>(), base_dir);
        UniverseSpec u;
        u.tag = std::filesystem::path(path).stem().string();
        u.tickers = read_universe_file(path);
        cfg.grid.universes.push_back(std::move(u));
      }
    }
  }

  cfg.backtest.universe = cfg.universe;
  cfg.backtest.index_ticker = cfg.index_ticker;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(text, std::filesystem::path(path).parent_path().string());
}

MarketData load_market_data(const RunConfig& cfg) {
  MarketData data;
  data.prices = load_price_csv(cfg.prices_csv);
  data.rate = load_macro_csv(cfg.rate_csv);
  if (!cfg.cpi_csv.empty()) {
    data.cpi = load_macro_csv(cfg.cpi_csv);
  } else {
    const bool needs_cpi =
        std::any_of(cfg.backtest.analysts.begin(), cfg.backtest.analysts.end(),
                    [](const AnalystSpec& a) {
                      return a.rule.indicator == IndicatorRule::cpi_above_median ||
                             a.rule.indicator == IndicatorRule::cpi_below_median;
                    });
    if (needs_cpi) throw ConfigError("config: cpi_csv required by a cpi_* analyst rule");
    data.cpi = data.rate;  // placeholder, never consulted
  }
  // fail fast on tickers the price table cannot serve
  for (const auto& t : cfg.universe) data.prices.ticker_index(t);
  for (const auto& u : cfg.grid.universes) {
    for (const auto& t : u.tickers) data.prices.ticker_index(t);
  }
  if (cfg.index_ticker) data.prices.ticker_index(*cfg.index_ticker);
  return data;
}

}  // namespace riskquad
