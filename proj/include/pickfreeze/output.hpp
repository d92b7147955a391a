#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pickfreeze {

// "%.12g" rendering used everywhere a number becomes text, so identical
// doubles always produce identical bytes
std::string format_double(double v);

// one table cell; Real cells render empty (CSV) or null (JSON) when NaN
struct Cell {
  enum class Kind { Text, Real, Int };
  Kind kind = Kind::Text;
  std::string text;
  double real = 0.0;
  long long integer = 0;

  static Cell str(std::string s) {
    Cell c;
    c.kind = Kind::Text;
    c.text = std::move(s);
    return c;
  }
  static Cell num(double v) {
    Cell c;
    c.kind = Kind::Real;
    c.real = v;
    return c;
  }
  static Cell count(long long v) {
    Cell c;
    c.kind = Kind::Int;
    c.integer = v;
    return c;
  }
};

// tabular result plus the metadata every output must carry
struct OutputTable {
  std::string version;
  std::uint64_t seed = 0;
  std::string config;  // canonical command echo
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// format is "csv" or "json"
void write_output(const OutputTable& table, const std::string& format,
                  std::ostream& os);

}  // namespace pickfreeze
