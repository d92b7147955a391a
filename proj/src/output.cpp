#include "pickfreeze/output.hpp"

#include <cmath>
#include <cstdio>

#include "pickfreeze/errors.hpp"

#include <json.hpp>

namespace pickfreeze {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const OutputTable& t, std::ostream& os) {
  os << "# version=" << t.version << "\n";
  os << "# seed=" << t.seed << "\n";
  os << "# config=" << t.config << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << csv_escape(t.columns[c]);
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      const Cell& cell = row[c];
      switch (cell.kind) {
        case Cell::Kind::Text: os << csv_escape(cell.text); break;
        case Cell::Kind::Int: os << cell.integer; break;
        case Cell::Kind::Real:
          if (!std::isnan(cell.real)) os << format_double(cell.real);
          break;
      }
    }
    os << "\n";
  }
}

void write_json(const OutputTable& t, std::ostream& os) {
  nlohmann::json j;
  j["version"] = t.version;
  j["seed"] = t.seed;
  j["config"] = t.config;
  j["columns"] = t.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto jr = nlohmann::json::array();
    for (const Cell& cell : row) {
      switch (cell.kind) {
        case Cell::Kind::Text: jr.push_back(cell.text); break;
        case Cell::Kind::Int: jr.push_back(cell.integer); break;
        case Cell::Kind::Real:
          if (std::isnan(cell.real)) {
            jr.push_back(nullptr);
          } else {
            jr.push_back(cell.real);
          }
          break;
      }
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

}  // namespace

void write_output(const OutputTable& table, const std::string& format,
                  std::ostream& os) {
  if (format == "csv") {
    write_csv(table, os);
  } else if (format == "json") {
    write_json(table, os);
  } else {
    throw ParameterError("unknown output format: " + format);
  }
}

}  // namespace pickfreeze
