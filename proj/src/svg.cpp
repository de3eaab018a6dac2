#include "riskquad/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace riskquad {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 32;
constexpr int kMarginBottom = 40;

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string daily_return_chart(const BacktestReport& rep) {
  std::vector<std::pair<std::string, const std::vector<double>*>> series;
  for (const auto& p : rep.portfolios) {
    if (p.status == LpStatus::optimal && !p.daily.empty()) series.emplace_back(p.name, &p.daily);
  }
  series.emplace_back("Index", &rep.index_daily);

  double lo = 0.0, hi = 0.0;
  std::size_t days = 0;
  for (const auto& [name, s] : series) {
    for (double v : *s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    days = std::max(days, s->size());
  }
  if (hi - lo < 1e-9) hi = lo + 1e-9;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto xpos = [&](std::size_t d) {
    return kMarginLeft + (days > 1 ? plot_w * static_cast<double>(d) / (days - 1) : 0.0);
  };
  const auto ypos = [&](double v) { return kMarginTop + plot_h * (hi - v) / (hi - lo); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kMarginLeft) +
         "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">Portfolio daily returns"
         " (test period)</text>\n";

  // axes and the zero line
  svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop) + "\" x2=\"" +
         fmt(kMarginLeft) + "\" y2=\"" + fmt(kMarginTop + plot_h) +
         "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop + plot_h) + "\" x2=\"" +
         fmt(kMarginLeft + plot_w) + "\" y2=\"" + fmt(kMarginTop + plot_h) +
         "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  if (lo < 0.0 && hi > 0.0) {
    svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(ypos(0.0)) + "\" x2=\"" +
           fmt(kMarginLeft + plot_w) + "\" y2=\"" + fmt(ypos(0.0)) +
           "\" stroke=\"#ccc\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (double tick : {lo, 0.0, hi}) {
    if (tick == 0.0 && (lo > 0.0 || hi < 0.0)) continue;
    svg += "<text x=\"4\" y=\"" + fmt(ypos(tick) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(tick * 100.0) + "%</text>\n";
  }

  std::size_t idx = 0;
  for (const auto& [name, s] : series) {
    const char* color = kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    for (std::size_t d = 0; d < s->size(); ++d) {
      points += fmt(xpos(d)) + "," + fmt(ypos((*s)[d])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = kMarginTop + 16.0 * static_cast<double>(idx);
    svg += "<line x1=\"" + fmt(kWidth - kMarginRight + 8) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(kWidth - kMarginRight + 28) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(kWidth - kMarginRight + 34) + "\" y=\"" + fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + name + "</text>\n";
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace riskquad
