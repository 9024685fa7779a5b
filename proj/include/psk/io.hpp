#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "psk/grid.hpp"

namespace psk {

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Reads "x y" rows (whitespace or comma separated). Lines starting with '#'
/// and blank lines are skipped, as is a single non-numeric header line.
FunctionTable read_two_column(std::istream& in);
FunctionTable read_two_column(const std::filesystem::path& file);
void write_two_column(std::ostream& out, const FunctionTable& t);

/// Parses a comma separated list of numbers ("0.1,0.5,1").
std::vector<double> parse_number_list(const std::string& text);

/// Minimal CSV writer with fixed column order.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& cells);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace psk
