#ifndef RISKQUAD_CSV_HPP
#define RISKQUAD_CSV_HPP

#include <string>
#include <vector>

namespace riskquad {

/// Minimal CSV support for the comma-separated numeric tables this project
/// reads and writes: no quoting, no embedded separators, one header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);    // throws on I/O failure
CsvTable parse_csv(const std::string& text);   // throws on ragged rows

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Shortest round-trip decimal; used everywhere a float reaches a report so
/// output bytes are reproducible.
std::string format_double(double v);

}  // namespace riskquad

#endif
