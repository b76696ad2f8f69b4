#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace modrec {

/// Numeric CSV table with an optional block of leading `# key=value` metadata lines.
struct CsvTable {
  std::vector<std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column by header name; throws InvalidArgument if absent.
  Eigen::VectorXd column(const std::string& name) const;
  /// Value of a `# key=value` metadata line, empty if missing.
  std::string meta(const std::string& key) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Fixed formatting used for every numeric CSV field: 12 significant digits, "nan" for NaN.
std::string format_double(double v);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

}  // namespace modrec
