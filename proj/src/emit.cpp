#include "magblock/emit.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

constexpr const char* kWallTimeKey = "wall_time_s";

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

double parse_number(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') throw ValidationError("csv: bad number '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw UsageError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

const char* extension(OutputFormat format) noexcept { return format == OutputFormat::csv ? ".csv" : ".json"; }

std::string to_csv(const ResultTable& table) {
  std::string out;
  const nlohmann::ordered_json* wall = nullptr;
  for (const auto& item : table.metadata.items()) {
    if (item.key() == kWallTimeKey) {
      wall = &item.value();
      continue;
    }
    out += "# " + item.key() + ": " + item.value().dump() + "\n";
  }
  if (wall) out += std::string("# ") + kWallTimeKey + ": " + wall->dump() + "\n";
  out += join(table.columns, ',') + "\n";
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_number(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = table.metadata;
  // Keep the wall time last so that only the final metadata line differs
  // between otherwise identical runs.
  if (meta.contains(kWallTimeKey)) {
    const auto wall = meta[kWallTimeKey];
    meta.erase(kWallTimeKey);
    meta[kWallTimeKey] = wall;
  }
  doc["metadata"] = meta;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void emit(const ResultTable& table, OutputFormat format, const std::filesystem::path& path) {
  const std::string text = format == OutputFormat::csv ? to_csv(table) : to_json(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ResultTable parse_csv(const std::string& text) {
  ResultTable table;
  table.metadata = nlohmann::ordered_json::object();
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      try {
        table.metadata[key] = nlohmann::ordered_json::parse(value);
      } catch (const nlohmann::json::parse_error&) {
        table.metadata[key] = value;
      }
      continue;
    }
    if (line.empty()) continue;
    if (!header) {
      table.columns = split(line, ',');
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& field : split(line, ',')) row.push_back(parse_number(field));
    if (row.size() != table.columns.size()) throw ValidationError("csv: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  if (table.metadata.contains("name")) table.name = table.metadata["name"].get<std::string>();
  return table;
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace magblock
