#include "psk/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace psk {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<double> split_numbers(std::string line, bool& ok) {
  std::replace(line.begin(), line.end(), ',', ' ');
  std::replace(line.begin(), line.end(), '\t', ' ');
  std::istringstream ss(line);
  std::vector<double> out;
  std::string tok;
  ok = true;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
  }
  return out;
}

}  // namespace

FunctionTable read_two_column(std::istream& in) {
  FunctionTable t;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    bool ok = false;
    auto nums = split_numbers(line, ok);
    if (!ok) {
      if (!header_seen && t.x.empty()) {
        header_seen = true;
        continue;
      }
      throw std::runtime_error("two-column table: unparsable line " + std::to_string(lineno));
    }
    if (nums.size() != 2) {
      throw std::runtime_error("two-column table: expected 2 numbers on line " +
                               std::to_string(lineno));
    }
    t.x.push_back(nums[0]);
    t.y.push_back(nums[1]);
  }
  t.validate();
  return t;
}

FunctionTable read_two_column(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_two_column(in);
}

void write_two_column(std::ostream& out, const FunctionTable& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << format_double(t.x[i]) << ' ' << format_double(t.y[i]) << '\n';
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  bool ok = false;
  auto nums = split_numbers(text, ok);
  if (!ok || nums.empty()) throw std::invalid_argument("bad number list: '" + text + "'");
  return nums;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<double>& cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double c : cells) text.push_back(format_double(c));
  row(text);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace psk
