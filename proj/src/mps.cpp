#include "riskquad/mps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace riskquad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_num(const std::string& s, std::size_t lineno) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("MPS: bad numeric field '" + s + "' at line " +
                                std::to_string(lineno));
  return v;
}

std::string pad8(const std::string& s) {
  std::string out = s;
  if (out.size() < 8) out.resize(8, ' ');
  return out;
}

char sense_char(LpModel::Sense s) {
  switch (s) {
    case LpModel::Sense::le: return 'L';
    case LpModel::Sense::eq: return 'E';
    case LpModel::Sense::ge: return 'G';
  }
  return 'E';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string export_lp_file(const LpModel& model) {
  model.validate();
  std::string out;
  out += "NAME          " + model.name + "\n";

  out += "ROWS\n";
  out += " N  COST\n";
  for (const auto& row : model.rows) {
    out += " ";
    out += sense_char(row.sense);
    out += "  " + row.name + "\n";
  }

  // Every column is declared through its objective entry (zero included), so
  // otherwise empty columns survive the round trip; row entries follow in
  // model row order.
  out += "COLUMNS\n";
  std::vector<std::vector<std::pair<int, double>>> by_col(model.num_vars());
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    for (const auto& [col, val] : model.rows[r].coeffs)
      by_col[static_cast<std::size_t>(col)].emplace_back(static_cast<int>(r), val);
  }
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const std::string cname = pad8(model.var_names[j]);
    out += "    " + cname + "  " + pad8("COST") + "  " + num(model.objective[j]) + "\n";
    for (const auto& [r, val] : by_col[j])
      out += "    " + cname + "  " + pad8(model.rows[static_cast<std::size_t>(r)].name) + "  " +
             num(val) + "\n";
  }

  out += "RHS\n";
  for (const auto& row : model.rows) {
    if (row.rhs != 0.0)
      out += "    " + pad8("RHS") + "  " + pad8(row.name) + "  " + num(row.rhs) + "\n";
  }

  // Default MPS bounds are [0, +inf); anything else is spelled out.
  out += "BOUNDS\n";
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const double lo = model.lower[j];
    const double hi = model.upper[j];
    const std::string cname = pad8(model.var_names[j]);
    if (lo == 0.0 && hi == kInf) continue;
    if (lo == -kInf && hi == kInf) {
      out += " FR " + pad8("BND") + "  " + cname + "\n";
      continue;
    }
    if (lo == hi) {
      out += " FX " + pad8("BND") + "  " + cname + "  " + num(lo) + "\n";
      continue;
    }
    if (lo == -kInf) {
      out += " MI " + pad8("BND") + "  " + cname + "\n";
    } else if (lo != 0.0) {
      out += " LO " + pad8("BND") + "  " + cname + "  " + num(lo) + "\n";
    }
    if (hi != kInf) out += " UP " + pad8("BND") + "  " + cname + "  " + num(hi) + "\n";
  }
  out += "ENDATA\n";
  return out;
}

LpModel parse_mps(const std::string& text) {
  LpModel model;
  model.name.clear();

  enum class Section { none, rows, columns, rhs, bounds, done };
  Section section = Section::none;

  std::string objname;
  std::map<std::string, int> row_index;
  std::map<std::string, int> col_index;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty() || fields[0][0] == '*') continue;

    if (line[0] != ' ' && line[0] != '\t') {  // section header
      const std::string& kw = fields[0];
      if (kw == "NAME") {
        model.name = fields.size() > 1 ? fields[1] : "";
      } else if (kw == "ROWS") {
        section = Section::rows;
      } else if (kw == "COLUMNS") {
        section = Section::columns;
      } else if (kw == "RHS") {
        section = Section::rhs;
      } else if (kw == "BOUNDS") {
        section = Section::bounds;
      } else if (kw == "RANGES") {
        throw std::invalid_argument("MPS: RANGES section not supported");
      } else if (kw == "ENDATA") {
        section = Section::done;
        break;
      } else {
        throw std::invalid_argument("MPS: unsupported section '" + kw + "' at line " +
                                    std::to_string(lineno));
      }
      continue;
    }

    if (section == Section::rows) {
      if (fields.size() != 2)
        throw std::invalid_argument("MPS: bad ROWS line " + std::to_string(lineno));
      if (fields[0] == "N") {
        if (!objname.empty())
          throw std::invalid_argument("MPS: multiple objective rows");
        objname = fields[1];
        continue;
      }
      LpModel::Row row;
      row.name = fields[1];
      if (fields[0] == "L") row.sense = LpModel::Sense::le;
      else if (fields[0] == "E") row.sense = LpModel::Sense::eq;
      else if (fields[0] == "G") row.sense = LpModel::Sense::ge;
      else
        throw std::invalid_argument("MPS: bad row sense '" + fields[0] + "' at line " +
                                    std::to_string(lineno));
      if (!row_index.emplace(row.name, static_cast<int>(model.rows.size())).second)
        throw std::invalid_argument("MPS: duplicate row " + row.name);
      model.rows.push_back(std::move(row));
    } else if (section == Section::columns) {
      if (fields.size() != 3 && fields.size() != 5)
        throw std::invalid_argument("MPS: bad COLUMNS line " + std::to_string(lineno));
      const std::string& cname = fields[0];
      int col;
      if (auto it = col_index.find(cname); it != col_index.end()) {
        col = it->second;
      } else {
        col = model.add_var(cname, 0.0, kInf, 0.0);
        col_index.emplace(cname, col);
      }
      for (std::size_t f = 1; f + 1 < fields.size(); f += 2) {
        const std::string& rname = fields[f];
        const double val = parse_num(fields[f + 1], lineno);
        if (rname == objname) {
          model.objective[static_cast<std::size_t>(col)] = val;
          continue;
        }
        const auto rit = row_index.find(rname);
        if (rit == row_index.end())
          throw std::invalid_argument("MPS: unknown row '" + rname + "' at line " +
                                      std::to_string(lineno));
        model.rows[static_cast<std::size_t>(rit->second)].coeffs.emplace_back(col, val);
      }
    } else if (section == Section::rhs) {
      if (fields.size() != 3 && fields.size() != 5)
        throw std::invalid_argument("MPS: bad RHS line " + std::to_string(lineno));
      for (std::size_t f = 1; f + 1 < fields.size(); f += 2) {
        const auto rit = row_index.find(fields[f]);
        if (rit == row_index.end())
          throw std::invalid_argument("MPS: unknown RHS row '" + fields[f] + "' at line " +
                                      std::to_string(lineno));
        model.rows[static_cast<std::size_t>(rit->second)].rhs = parse_num(fields[f + 1], lineno);
      }
    } else if (section == Section::bounds) {
      if (fields.size() < 3)
        throw std::invalid_argument("MPS: bad BOUNDS line " + std::to_string(lineno));
      const std::string& type = fields[0];
      const auto cit = col_index.find(fields[2]);
      if (cit == col_index.end())
        throw std::invalid_argument("MPS: bound on unknown column '" + fields[2] + "'");
      const auto col = static_cast<std::size_t>(cit->second);
      const double v = fields.size() >= 4 ? parse_num(fields[3], lineno) : 0.0;
      if (type == "UP") model.upper[col] = v;
      else if (type == "LO") model.lower[col] = v;
      else if (type == "FX") model.lower[col] = model.upper[col] = v;
      else if (type == "FR") {
        model.lower[col] = -kInf;
        model.upper[col] = kInf;
      } else if (type == "MI") {
        model.lower[col] = -kInf;
      } else if (type == "PL") {
        model.upper[col] = kInf;
      } else {
        throw std::invalid_argument("MPS: unsupported bound type '" + type + "'");
      }
    } else {
      throw std::invalid_argument("MPS: data outside any section at line " +
                                  std::to_string(lineno));
    }
  }
  if (section != Section::done) throw std::invalid_argument("MPS: missing ENDATA");

  for (auto& row : model.rows) {
    std::stable_sort(row.coeffs.begin(), row.coeffs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  model.validate();
  return model;
}

}  // namespace riskquad
