#ifndef RISKQUAD_SVG_HPP
#define RISKQUAD_SVG_HPP

#include <string>

#include "riskquad/backtest.hpp"

namespace riskquad {

/// Line chart of the test-period daily returns, one polyline per portfolio
/// plus the index.  Plain hand-emitted SVG; a convenience output only.
std::string daily_return_chart(const BacktestReport& rep);

}  // namespace riskquad

#endif
