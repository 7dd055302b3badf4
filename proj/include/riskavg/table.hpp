#pragma once

#include <string>
#include <vector>

namespace riskavg {

/// Column-schema'd result rows plus the metadata needed to reproduce them.
/// Values are formatted once, deterministically, at insertion: the written
/// CSV is byte-identical across reruns of the same (config, seed).
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);

  /// Formats a double with enough digits to round-trip.
  static std::string fmt(double v);
  static std::string fmt(std::uint64_t v);

  void set_metadata(const std::string& key, const std::string& value);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Comma-separated, '.' decimal, header row, LF line endings, UTF-8.
  std::string to_csv() const;

  /// Sidecar metadata (config echo, artifact version, row schema) as JSON text.
  std::string metadata_json() const;

  /// Writes <dir>/<stem>.csv and <dir>/<stem>.meta.json; returns the csv path.
  std::string write(const std::string& dir, const std::string& stem) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

inline constexpr const char* kArtifactVersion = "riskavg 0.1.0";

}  // namespace riskavg
