#include "riskavg/table.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace riskavg {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("ResultTable: row width does not match schema");
  rows_.push_back(std::move(cells));
}

std::string ResultTable::fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string ResultTable::fmt(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  return buf;
}

void ResultTable::set_metadata(const std::string& key, const std::string& value) {
  metadata_.emplace_back(key, value);
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string ResultTable::metadata_json() const {
  nlohmann::ordered_json j;
  j["artifact"] = kArtifactVersion;
  for (const auto& [k, v] : metadata_) {
    // config echoes arrive as JSON text; keep them structured
    if (!v.empty() && (v.front() == '{' || v.front() == '[')) {
      j[k] = nlohmann::ordered_json::parse(v);
    } else {
      j[k] = v;
    }
  }
  j["columns"] = columns_;
  return j.dump(2) + "\n";
}

std::string ResultTable::write(const std::string& dir, const std::string& stem) const {
  std::filesystem::create_directories(dir);
  std::filesystem::path csv_path = std::filesystem::path(dir) / (stem + ".csv");
  {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw std::runtime_error("ResultTable: cannot open " + csv_path.string());
    f << to_csv();
  }
  {
    std::ofstream f(std::filesystem::path(dir) / (stem + ".meta.json"), std::ios::binary);
    f << metadata_json();
  }
  return csv_path.string();
}

}  // namespace riskavg
