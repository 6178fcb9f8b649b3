#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sclink {

/// Header-bearing tab-separated table. Lines starting with '#' are comments;
/// comments of the form `# key = value` are collected into `meta`.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> line_numbers;  // source line of each row, 1-based
  std::map<std::string, std::string> meta;

  int column(const std::string& name) const;  // -1 if absent
};

TsvTable read_tsv(std::istream& in, const std::string& source_name);
TsvTable read_tsv_file(const std::string& path);

}  // namespace sclink
