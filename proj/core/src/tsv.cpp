#include "sclink/tsv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "sclink/errors.hpp"

namespace sclink {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '\t')) out.push_back(trim(cell));
  return out;
}

}  // namespace

int TsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

TsvTable read_tsv(std::istream& in, const std::string& source_name) {
  TsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        table.meta[trim(t.substr(1, eq - 1))] = trim(t.substr(eq + 1));
      }
      continue;
    }
    auto cells = split_tabs(t);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": expected " << table.header.size()
          << " columns, found " << cells.size();
      throw ValidationError(msg.str());
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        std::ostringstream msg;
        msg << source_name << ":" << line_no << ": non-numeric cell '" << c << "'";
        throw ValidationError(msg.str());
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw ValidationError(source_name + ": missing header row");
  return table;
}

TsvTable read_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_tsv(in, path);
}

}  // namespace sclink
