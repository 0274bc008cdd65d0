#include "eccar/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace eccar {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    std::vector<double> row(fields.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], row[j])) {
        numeric = false;
        bad_col = j;
        break;
      }
    }
    if (!numeric) {
      if (header_allowed) {  // single leading header row
        header_allowed = false;
        continue;
      }
      throw InvalidData(path + ": cannot parse value at row " +
                        std::to_string(lineno) + ", column " +
                        std::to_string(bad_col + 1));
    }
    header_allowed = false;
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw InvalidData(path + ": row " + std::to_string(lineno) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(width));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidData(path + ": no numeric rows");
  Matrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

GroupPartition read_partition_file(const std::string& path, int p, int q) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open " + path);
  GroupPartition partition;
  partition.p = p;
  partition.q = q;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::pair<int, int>> group;
    for (const auto& entry : split(line, ';')) {
      if (trim(entry).empty()) continue;
      const auto parts = split(entry, ',');
      int i = 0, j = 0;
      try {
        if (parts.size() != 2) throw std::invalid_argument("pair");
        i = std::stoi(trim(parts[0]));
        j = std::stoi(trim(parts[1]));
      } catch (const std::exception&) {
        throw InvalidPartition(path + ": malformed entry '" + entry +
                               "' at line " + std::to_string(lineno));
      }
      group.emplace_back(i, j);
    }
    if (!group.empty()) partition.groups.push_back(std::move(group));
  }
  if (!validate_partition(partition))
    throw InvalidPartition(path + ": groups do not partition [" +
                           std::to_string(p) + "]x[" + std::to_string(q) + "]");
  return partition;
}

void write_partition_file(const GroupPartition& partition,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  for (const auto& group : partition.groups) {
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (k) out << ';';
      out << group[k].first << ',' << group[k].second;
    }
    out << '\n';
  }
}

}  // namespace eccar
