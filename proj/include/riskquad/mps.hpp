#ifndef RISKQUAD_MPS_HPP
#define RISKQUAD_MPS_HPP

#include <string>

#include "riskquad/lp.hpp"

namespace riskquad {

/// MPS text with NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA sections, 8-character
/// aligned name fields and deterministic row/column order.  Values are
/// shortest-round-trip decimals so parse_mps(export_lp_file(m)) == m holds
/// bit-for-bit; the value field may therefore run past the classic 12-char
/// width, which whitespace-splitting readers accept.
std::string export_lp_file(const LpModel& model);

/// Inverse of export_lp_file; whitespace-tolerant.  Throws on malformed input.
LpModel parse_mps(const std::string& text);

}  // namespace riskquad

#endif
