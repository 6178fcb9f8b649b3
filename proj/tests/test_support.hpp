#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sclink::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(SCLINK_TEST_DATA_DIR) + "/" + rel;
}

/// Fresh scratch directory under the build tree.
inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(SCLINK_TEST_TMP_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

/// Two numeric columns of a shipped table, read without the library parser
/// so the tests have an independent view of the files.
inline std::vector<std::pair<double, double>> read_two_columns(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    ss >> a >> b;
    rows.emplace_back(a, b);
  }
  return rows;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sclink::testing
